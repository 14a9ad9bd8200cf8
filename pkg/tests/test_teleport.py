import numpy as np
import pytest

from entshare.qcore import (
    StateVector,
    apply_channel,
    channel_superoperator,
    entanglement_fidelity,
    ginibre_density,
    haar_state,
    kron,
    overlap,
)
from entshare.states import IsotropicParams, bell_pair, generalized_bell, ghz, isotropic
from entshare.teleport import (
    bell_basis,
    depolarizing_channel,
    share_sequential,
    teleport_channel,
    teleport_fidelity,
    teleport_subsystems,
    weyl_pair,
)

from oracles import measure_and_correct_teleport


@pytest.mark.parametrize("d", [2, 3, 5])
def test_weyl_relations(d):
    pair = weyl_pair(d)
    eye = np.eye(d)
    omega = np.exp(2j * np.pi / d)
    assert np.allclose(pair.shift.conj().T @ pair.shift, eye, atol=1e-10)
    assert np.allclose(pair.clock.conj().T @ pair.clock, eye, atol=1e-10)
    assert np.allclose(np.linalg.matrix_power(pair.shift, d), eye, atol=1e-10)
    assert np.allclose(np.linalg.matrix_power(pair.clock, d), eye, atol=1e-10)
    assert np.allclose(pair.clock @ pair.shift, omega * pair.shift @ pair.clock, atol=1e-10)


def test_bell_basis_d2_matches_the_four_bell_states():
    basis = bell_basis(2)
    s = 1 / np.sqrt(2)
    assert np.allclose(basis[0].amplitudes, [s, 0, 0, s], atol=1e-12)  # (a,b) = (0,0)
    assert np.allclose(basis[1].amplitudes, [s, 0, 0, -s], atol=1e-12)  # (0,1)
    assert np.allclose(basis[2].amplitudes, [0, s, s, 0], atol=1e-12)  # (1,0)
    assert np.allclose(basis[3].amplitudes, [0, -s, s, 0], atol=1e-12)  # (1,1): X Z |00+11>


@pytest.mark.parametrize("d", [2, 3, 4])
def test_bell_basis_orthonormal_and_complete(d):
    basis = bell_basis(d)
    assert len(basis) == d * d
    gram = np.array(
        [[np.vdot(a.amplitudes, b.amplitudes) for b in basis] for a in basis]
    )
    assert np.allclose(gram, np.eye(d * d), atol=1e-10)
    total = sum(np.outer(b.amplitudes, b.amplitudes.conj()) for b in basis)
    assert np.allclose(total, np.eye(d * d), atol=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_perfect_resource_gives_identity_channel(d):
    channel = teleport_channel(generalized_bell(d).density())
    assert np.allclose(channel_superoperator(channel), np.eye(d * d), atol=1e-10)


@pytest.mark.parametrize("d", [2, 3])
def test_maximally_mixed_resource_erases_input(d):
    from entshare.qcore import DensityMatrix

    channel = teleport_channel(DensityMatrix(np.eye(d * d) / d**2, (d, d)))
    rng = np.random.default_rng(1)
    for _ in range(5):
        psi = haar_state((d,), rng)
        out = apply_channel(channel, psi.density(), (0,))
        assert np.allclose(out.entries, np.eye(d) / d, atol=1e-10)
        assert abs(overlap(out, psi) - 1.0 / d) < 1e-10


def test_isotropic_resource_on_plus_state():
    channel = teleport_channel(isotropic(IsotropicParams(2, 0.85)))
    plus = StateVector([1 / np.sqrt(2), 1 / np.sqrt(2)], (2,))
    assert abs(overlap(apply_channel(channel, plus.density(), (0,)), plus) - 0.9) < 1e-10


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("d", [2, 3])
def test_channel_matches_measure_and_correct_oracle(d, seed):
    rng = np.random.default_rng([100, d, seed])
    resource = ginibre_density((d, d), rng)
    channel = teleport_channel(resource)
    psi = haar_state((d,), rng)
    via_kraus = apply_channel(channel, psi.density(), (0,)).entries
    via_projectors = measure_and_correct_teleport(psi.density().entries, resource.entries, d)
    assert np.allclose(via_kraus, via_projectors, atol=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_completeness_for_noisy_resources(d):
    rng = np.random.default_rng([7, d])
    for _ in range(3):
        ops = teleport_channel(ginibre_density((d, d), rng)).operators
        total = sum(op.conj().T @ op for op in ops)
        assert np.allclose(total, np.eye(d), atol=1e-10)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("fraction", [0.1, 0.5, 0.9])
def test_isotropic_resource_is_depolarizing_channel(d, fraction):
    mixing = (d * d * fraction - 1.0) / (d * d - 1.0)
    lhs = channel_superoperator(teleport_channel(isotropic(IsotropicParams(d, fraction))))
    rhs = channel_superoperator(depolarizing_channel(d, mixing))
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_teleport_fidelity_values():
    assert teleport_fidelity(3, 1.0) == 1.0
    for d in (2, 3, 4):
        assert abs(teleport_fidelity(d, 1.0 / d**2) - 1.0 / d) < 1e-12
    eps = 0.3
    assert abs(teleport_fidelity(2, 1 - eps) - (1 - 2 / 3 * eps)) < 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_output_overlap_is_input_independent(d):
    rng = np.random.default_rng(11)
    for fraction in (1.0 / d**2, 0.6, 1.0):
        channel = teleport_channel(isotropic(IsotropicParams(d, fraction)))
        values = []
        for _ in range(20):
            psi = haar_state((d,), rng)
            values.append(overlap(apply_channel(channel, psi.density(), (0,)), psi))
        assert max(values) - min(values) < 1e-10
        assert abs(values[0] - teleport_fidelity(d, fraction)) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4])
def test_second_half_of_max_entangled_keeps_fraction(d):
    for fraction in (0.4, 0.8, 1.0):
        channel = teleport_channel(isotropic(IsotropicParams(d, fraction)))
        phi = generalized_bell(d)
        assert abs(entanglement_fidelity(channel, phi, (1,)) - fraction) < 1e-10


def test_teleport_subsystems_perfect_resource_is_identity():
    psi = ghz(3)
    out = teleport_subsystems(psi, (1,), generalized_bell(2).density())
    assert np.allclose(out.entries, psi.density().entries, atol=1e-10)


def test_teleport_subsystems_ghz_single_qubit():
    eps = 0.2
    psi = ghz(2)
    out = teleport_subsystems(psi, (1,), isotropic(IsotropicParams(2, 1 - eps)))
    assert abs(overlap(out, psi) - (1 - eps)) < 1e-10


def test_teleport_subsystems_ghz3_beats_bound():
    from entshare.bounds import multipartite_sharing_bound

    eps = 0.15
    psi = ghz(3)
    out = teleport_subsystems(psi, (2,), isotropic(IsotropicParams(2, 1 - eps)))
    value = overlap(out, psi)
    assert value >= multipartite_sharing_bound(1, eps, 2, 0.25) - 1e-9


def test_teleport_subsystems_dimension_mismatch():
    with pytest.raises(ValueError):
        teleport_subsystems(ghz(3), (0, 1), generalized_bell(2).density())


def test_share_sequential_no_hops_returns_input():
    psi = ghz(3)
    out = share_sequential(psi, [])
    assert np.allclose(out.entries, psi.density().entries, atol=1e-12)


def test_share_sequential_perfect_hops_identity():
    psi = ghz(3)
    perfect = generalized_bell(2).density()
    out = share_sequential(psi, [((0,), perfect), ((2,), perfect)])
    assert np.allclose(out.entries, psi.density().entries, atol=1e-10)


def test_share_sequential_two_noisy_hops():
    from entshare.bounds import entanglement_fidelity_bound

    eps = 0.1
    resource = isotropic(IsotropicParams(2, 1 - eps))
    psi = ghz(3)
    out = share_sequential(psi, [((1,), resource), ((2,), resource)])
    value = overlap(out, psi)
    # two independent hops cannot do worse than the product of per-hop bounds
    per_hop = entanglement_fidelity_bound(2 * eps / 3, 2, 0.25)
    assert value >= per_hop**2 - 1e-9


def test_share_sequential_rejects_overlapping_hops():
    resource = isotropic(IsotropicParams(2, 0.9))
    with pytest.raises(ValueError):
        share_sequential(ghz(3), [((0,), resource), ((0,), resource)])
