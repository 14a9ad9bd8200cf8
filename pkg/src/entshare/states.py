"""Constructors for the named states used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import DensityMatrix, StateVector


@dataclass(frozen=True)
class IsotropicParams:
    """Parameters of an isotropic state: local dimension and entangled fraction."""

    d: int
    F: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("isotropic states need local dimension >= 2")
        if not 0.0 <= self.F <= 1.0:
            raise ValueError(f"entangled fraction must lie in [0, 1], got {self.F}")


def bell_pair() -> StateVector:
    """(|00> + |11>) / sqrt(2) on two qubits."""
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1.0 / np.sqrt(2.0)
    return StateVector(amps, (2, 2))


def generalized_bell(d: int) -> StateVector:
    """Maximally entangled state (1/sqrt(d)) sum_j |j>|j> on d x d."""
    if d < 2:
        raise ValueError("generalized Bell states need d >= 2")
    amps = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return StateVector(amps, (d, d))


def isotropic(params: IsotropicParams) -> DensityMatrix:
    """Mixture of the maximally entangled projector and its complement.

    The entangled fraction F is exactly the overlap with the maximally
    entangled state.
    """
    d = params.d
    phi = generalized_bell(d).amplitudes
    projector = np.outer(phi, phi.conj())
    rest = (np.eye(d * d, dtype=complex) - projector) / (d * d - 1)
    return DensityMatrix(params.F * projector + (1.0 - params.F) * rest, (d, d))


def ghz(n_qubits: int) -> StateVector:
    """(|0...0> + |1...1>) / sqrt(2) on n_qubits qubits."""
    if n_qubits < 2:
        raise ValueError("GHZ states need at least 2 qubits")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return StateVector(amps, (2,) * n_qubits)


def interleave_permutation(m: int) -> tuple[int, ...]:
    """Permutation regrouping m interleaved pairs (A1 B1 ... Am Bm) into blocks.

    The returned tuple lists old slots in their new order, i.e. new slot i
    holds old subsystem perm[i]; the result ordering is (A1 ... Am B1 ... Bm).
    Applied to bell_pair()^{x m} it yields generalized_bell(2**m) to machine
    precision.
    """
    if m < 1:
        raise ValueError("need at least one pair")
    return tuple(range(0, 2 * m, 2)) + tuple(range(1, 2 * m, 2))
