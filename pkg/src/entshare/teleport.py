"""Qudit teleportation through an arbitrary two-sided resource state.

The measurement basis and correction follow one fixed convention: outcome
(a, b) corresponds to the projector onto (X^a Z^b x I)|max ent>, where X and
Z are the d-dimensional shift and clock operators, and the receiver applies
the conjugation that inverts that outcome's displacement.  Any unitarily
equivalent labeling produces the same channel, since the protocol averages
over all d^2 outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import DensityMatrix, KrausChannel, StateVector, apply_channel, kron
from .states import generalized_bell

_EIG_KEEP = 1e-14


@dataclass(frozen=True, eq=False)
class WeylPair:
    """Shift matrix (|l> -> |l+1 mod d>) and clock matrix (|l> -> w^l |l>)."""

    d: int
    shift: np.ndarray
    clock: np.ndarray


def weyl_pair(d: int) -> WeylPair:
    if d < 2:
        raise ValueError("Weyl operators need dimension >= 2")
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    pair = WeylPair(d, shift, clock)
    pair.shift.setflags(write=False)
    pair.clock.setflags(write=False)
    return pair


def _displacements(d: int) -> list[np.ndarray]:
    """All d^2 operators X^a Z^b, indexed a*d + b."""
    clock_phases = np.exp(2j * np.pi * np.arange(d) / d)
    ops = []
    for a in range(d):
        x_pow = np.roll(np.eye(d, dtype=complex), a, axis=0)
        for b in range(d):
            ops.append(x_pow * clock_phases[np.newaxis, :] ** b)
    return ops


def bell_basis(d: int) -> tuple[StateVector, ...]:
    """The d^2 orthonormal states (X^a Z^b x I)|max ent>, indexed a*d + b."""
    if d < 2:
        raise ValueError("need dimension >= 2")
    phi = generalized_bell(d).amplitudes
    eye = np.eye(d, dtype=complex)
    return tuple(StateVector(kron(u, eye) @ phi, (d, d)) for u in _displacements(d))


def teleport_channel(resource: DensityMatrix) -> KrausChannel:
    """The channel induced by teleporting through ``resource``.

    The sender measures the input together with her resource half in
    bell_basis(d); the receiver undoes the signalled displacement.  All d^2
    outcomes are averaged deterministically, so the returned Kraus operators
    are exact.  For a resource with eigenpairs (lam, v) and V the d x d
    reshape of v, the Kraus operators are sqrt(lam/d) U (V^T) U^dag over all
    displacements U.
    """
    if len(resource.dims) != 2 or resource.dims[0] != resource.dims[1]:
        raise ValueError(f"resource must live on two equal subsystems, got dims {resource.dims}")
    d = resource.dims[0]
    vals, vecs = np.linalg.eigh(resource.entries)
    units = _displacements(d)
    operators = []
    for lam, vec in zip(vals, vecs.T):
        if lam <= _EIG_KEEP:
            continue
        v_t = vec.reshape(d, d).T
        weight = np.sqrt(lam / d)
        for u in units:
            operators.append(weight * (u @ v_t @ u.conj().T))
    return KrausChannel(operators)


def depolarizing_channel(d: int, mixing_weight: float) -> KrausChannel:
    """The channel rho -> w rho + (1-w) I/d, as Kraus operators.

    Uses the displacement decomposition of the maximally mixing term, so the
    operator list is {sqrt(w + (1-w)/d^2) I} plus scaled nonidentity
    displacements.
    """
    if not -1.0 / (d * d - 1) <= mixing_weight <= 1.0:
        raise ValueError(f"mixing weight {mixing_weight} outside the valid channel range")
    uniform = (1.0 - mixing_weight) / (d * d)
    ops = []
    for index, u in enumerate(_displacements(d)):
        scale = mixing_weight + uniform if index == 0 else uniform
        ops.append(np.sqrt(scale) * u)
    return KrausChannel(ops)


def teleport_fidelity(d: int, entangled_fraction: float) -> float:
    """Output overlap (F d + 1)/(d + 1) of teleportation through an isotropic resource."""
    if d < 2:
        raise ValueError("need dimension >= 2")
    if not 0.0 <= entangled_fraction <= 1.0:
        raise ValueError("entangled fraction must lie in [0, 1]")
    return (entangled_fraction * d + 1.0) / (d + 1.0)


def teleport_subsystems(
    psi: StateVector, targets: Sequence[int], resource: DensityMatrix
) -> DensityMatrix:
    """Teleport the grouped ``targets`` subsystems of ``psi`` through ``resource``.

    The targets are grouped in the listed order into one system whose
    dimension must match one side of the resource; the other subsystems
    are untouched.
    """
    return apply_channel(teleport_channel(resource), psi.density(), targets)


def share_sequential(
    psi: StateVector, hops: Sequence[tuple[Sequence[int], DensityMatrix]]
) -> DensityMatrix:
    """Fold teleport_subsystems over ``hops``, modelling multi-party distribution.

    Hops must target pairwise disjoint subsystem sets.
    """
    seen: set[int] = set()
    for targets, _ in hops:
        batch = set(int(t) for t in targets)
        if batch & seen:
            raise ValueError("hops must target pairwise disjoint subsystems")
        seen |= batch
    rho = psi.density()
    for targets, resource in hops:
        rho = apply_channel(teleport_channel(resource), rho, targets)
    return rho
