import numpy as np
import pytest

from entshare.qcore import ginibre_density, haar_unitary, kron, overlap, trace_distance
from entshare.states import IsotropicParams, generalized_bell, isotropic
from entshare.twirl import twirl_exact, twirl_sampled


def test_exact_fixes_isotropic_states():
    for fraction in (0.0, 0.3, 1.0 / 4.0, 1.0):
        rho = isotropic(IsotropicParams(2, fraction))
        assert np.max(np.abs(twirl_exact(rho).entries - rho.entries)) < 1e-14


def test_exact_fixes_both_endpoints():
    phi = generalized_bell(3)
    pure = phi.density()
    assert np.max(np.abs(twirl_exact(pure).entries - pure.entries)) < 1e-14
    from entshare.qcore import DensityMatrix

    mixed = DensityMatrix(np.eye(9) / 9, (3, 3))
    assert np.max(np.abs(twirl_exact(mixed).entries - mixed.entries)) < 1e-14


def test_exact_is_idempotent_and_preserves_overlap():
    rng = np.random.default_rng(0)
    for d in (2, 3):
        rho = ginibre_density((d, d), rng)
        once = twirl_exact(rho)
        twice = twirl_exact(once)
        assert np.max(np.abs(twice.entries - once.entries)) < 1e-12
        phi = generalized_bell(d)
        assert abs(overlap(once, phi) - overlap(rho, phi)) < 1e-12


def test_exact_rejects_unequal_sides():
    with pytest.raises(ValueError):
        twirl_exact(ginibre_density((2, 3), np.random.default_rng(1)))


def test_single_sample_fixes_isotropic_input():
    rho = isotropic(IsotropicParams(2, 0.8))
    out = twirl_sampled(rho, 1, np.random.default_rng(2))
    assert np.max(np.abs(out.entries - rho.entries)) < 1e-9


def test_every_sample_preserves_entangled_fraction():
    # <phi|(U x U*) rho (U x U*)^dag|phi> = <phi|rho|phi> for each draw
    rng = np.random.default_rng(3)
    d = 3
    rho = ginibre_density((d, d), rng)
    phi = generalized_bell(d)
    target = overlap(rho, phi)
    for _ in range(25):
        u = haar_unitary(d, rng)
        w = kron(u, u.conj())
        rotated = w @ rho.entries @ w.conj().T
        value = float(np.real(phi.amplitudes.conj() @ rotated @ phi.amplitudes))
        assert abs(value - target) < 1e-10


def test_sampled_converges_to_exact():
    rng = np.random.default_rng(4)
    rho = ginibre_density((2, 2), rng)
    sampled = twirl_sampled(rho, 2000, np.random.default_rng(5))
    assert trace_distance(sampled, twirl_exact(rho)) < 0.06


def test_sampled_distance_shrinks_with_more_samples():
    rho = ginibre_density((2, 2), np.random.default_rng(6))
    exact = twirl_exact(rho)
    small, large = [], []
    for seed in range(20):
        small.append(trace_distance(twirl_sampled(rho, 100, np.random.default_rng([7, seed])), exact))
        large.append(trace_distance(twirl_sampled(rho, 10000, np.random.default_rng([8, seed])), exact))
    assert np.median(large) < np.median(small)


def test_sampled_worker_count_does_not_change_bits():
    rho = ginibre_density((2, 2), np.random.default_rng(9))
    serial = twirl_sampled(rho, 700, np.random.default_rng(10), workers=1)
    threaded = twirl_sampled(rho, 700, np.random.default_rng(10), workers=4)
    assert np.array_equal(serial.entries, threaded.entries)
