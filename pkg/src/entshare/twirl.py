"""Twirling over U x U* conjugations, exact and Monte-Carlo."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .qcore import DensityMatrix, haar_unitary, overlap
from .states import IsotropicParams, generalized_bell, isotropic

_BLOCK = 256


def _pair_dimension(rho: DensityMatrix) -> int:
    if len(rho.dims) != 2 or rho.dims[0] != rho.dims[1]:
        raise ValueError(f"twirling needs two equal subsystems, got dims {rho.dims}")
    return rho.dims[0]


def twirl_exact(rho: DensityMatrix) -> DensityMatrix:
    """Closed-form projection onto the isotropic family.

    The average over U x U* conjugations keeps only the entangled fraction,
    so the result is the isotropic state with F = overlap(rho, generalized_bell).
    """
    d = _pair_dimension(rho)
    fraction = overlap(rho, generalized_bell(d))
    return isotropic(IsotropicParams(d, fraction))


def twirl_sampled(
    rho: DensityMatrix,
    n_samples: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> DensityMatrix:
    """Monte-Carlo average of (U x U*) rho (U x U*)^dag over Haar draws.

    Each sample uses its own child stream of ``rng`` and partial sums are
    accumulated over fixed-size blocks, so the result is bit-identical for
    any ``workers`` count.
    """
    d = _pair_dimension(rho)
    if n_samples < 1:
        raise ValueError("need at least one sample")
    streams = rng.spawn(n_samples)

    def block_sum(start: int) -> np.ndarray:
        acc = np.zeros_like(rho.entries)
        for i in range(start, min(start + _BLOCK, n_samples)):
            u = haar_unitary(d, streams[i])
            w = np.kron(u, u.conj())
            acc += w @ rho.entries @ w.conj().T
        return acc

    starts = range(0, n_samples, _BLOCK)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(block_sum, starts))
    else:
        sums = [block_sum(s) for s in starts]

    total = np.zeros_like(rho.entries)
    for part in sums:
        total += part
    return DensityMatrix(total / n_samples, rho.dims)
