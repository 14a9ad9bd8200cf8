"""Monte-Carlo and exact analysis of CSS-based entanglement purification.

Noise is an i.i.d. per-qubit Pauli channel on the transmitted halves, which
makes the classical error-pattern simulation exact: the protocol's statistics
depend only on which qubits carry bit flips and which carry phase flips.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gf2
from .csscode import CssCode, decode, syndrome

_WILSON_Z = 1.959963984540054  # two-sided 95% normal quantile

_MAX_ENUMERATION_LENGTH = 10


@dataclass(frozen=True)
class PauliChannelSpec:
    """Per-qubit probabilities of identity, X, Y and Z errors."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        probs = (self.p_i, self.p_x, self.p_y, self.p_z)
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {sum(probs)!r}")

    @classmethod
    def depolarizing(cls, p: float) -> "PauliChannelSpec":
        return cls(1.0 - p, p / 3.0, p / 3.0, p / 3.0)

    def symmetrized(self) -> "PauliChannelSpec":
        """Effective per-qubit channel after averaging over the random basis mask."""
        half = (self.p_x + self.p_z) / 2.0
        return PauliChannelSpec(self.p_i, half, self.p_y, half)


@dataclass(frozen=True)
class PauliErrorPattern:
    """Bit-flip and phase-flip indicator vectors; a Y error sets both."""

    bit: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        bit = gf2.as_bits(self.bit).reshape(-1)
        phase = gf2.as_bits(self.phase).reshape(-1)
        if bit.size != phase.size:
            raise ValueError("bit and phase vectors must have equal length")
        bit.setflags(write=False)
        phase.setflags(write=False)
        object.__setattr__(self, "bit", bit)
        object.__setattr__(self, "phase", phase)


@dataclass(frozen=True)
class ProtocolOutcome:
    """One purification round; logical_success is meaningful only when not aborted."""

    aborted: bool
    disagreements: int
    logical_success: bool


@dataclass(frozen=True)
class PurificationReport:
    trials: int
    passes: int
    successes: int
    pass_rate: float
    conditional_fidelity: float | None
    ci_low: float | None
    ci_high: float | None
    seed: int


def wilson_interval(successes: int, total: int) -> tuple[float, float]:
    """95% Wilson score interval; degenerate observations give a point interval."""
    if total <= 0:
        raise ValueError("total must be positive")
    if successes <= 0:
        return (0.0, 0.0)
    if successes >= total:
        return (1.0, 1.0)
    z2 = _WILSON_Z**2
    p_hat = successes / total
    denom = 1.0 + z2 / total
    center = (p_hat + z2 / (2 * total)) / denom
    half = _WILSON_Z * math.sqrt(p_hat * (1 - p_hat) / total + z2 / (4 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def sample_pattern(spec: PauliChannelSpec, count: int, rng: np.random.Generator) -> PauliErrorPattern:
    """Independent per-qubit Pauli draws for ``count`` transmitted qubits."""
    if count < 1:
        raise ValueError("count must be at least 1")
    thresholds = np.cumsum([spec.p_i, spec.p_x, spec.p_y])
    draws = np.searchsorted(thresholds, rng.random(count), side="right")
    bit = ((draws == 1) | (draws == 2)).astype(np.uint8)
    phase = ((draws == 2) | (draws == 3)).astype(np.uint8)
    return PauliErrorPattern(bit, phase)


def apply_hadamard_mask(pattern: PauliErrorPattern, mask) -> PauliErrorPattern:
    """Swap bit and phase components where the mask is 1 (H X H = Z)."""
    mask = gf2.as_bits(mask).reshape(-1)
    if mask.size != pattern.bit.size:
        raise ValueError("mask length does not match the pattern")
    flip = mask.astype(bool)
    return PauliErrorPattern(
        np.where(flip, pattern.phase, pattern.bit),
        np.where(flip, pattern.bit, pattern.phase),
    )


def run_protocol(code: CssCode, spec: PauliChannelSpec, rng: np.random.Generator) -> ProtocolOutcome:
    """Simulate one purification round in the error-pattern picture.

    The round draws the random basis mask, samples channel errors on the 2n
    transmitted qubits, undoes the mask, picks a uniformly random half of the
    pairs as check pairs, and aborts when more than t of their two-sided
    measurements disagree.  Otherwise it decodes the code pairs' bit and
    phase syndromes; the round succeeds when the residual bit error lies in
    C2 and the residual phase error lies in the dual of C1, i.e. when the
    errors act trivially on the encoded pairs.
    """
    n = code.c1.n
    mask = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
    pattern = apply_hadamard_mask(sample_pattern(spec, 2 * n, rng), mask)
    shuffled = rng.permutation(2 * n)
    check_idx = np.sort(shuffled[:n])
    code_idx = np.sort(shuffled[n:])

    disagreements = int(pattern.bit[check_idx].sum())
    if disagreements > code.t:
        return ProtocolOutcome(True, disagreements, False)

    e_bit = pattern.bit[code_idx]
    e_phase = pattern.phase[code_idx]
    hat_bit, hat_phase = decode(code, syndrome(code.h1, e_bit), syndrome(code.h2, e_phase))
    success = code.is_trivial_bit_error(e_bit ^ hat_bit) and code.is_trivial_phase_error(
        e_phase ^ hat_phase
    )
    return ProtocolOutcome(False, disagreements, bool(success))


def estimate(
    code: CssCode,
    spec: PauliChannelSpec,
    trials: int,
    seed: int,
    workers: int = 1,
) -> PurificationReport:
    """Aggregate run_protocol over ``trials`` independent rounds.

    Trial i uses the substream seeded by (seed, i), so reports are identical
    for any worker count and bit-identical across runs.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")

    def run_range(bounds: tuple[int, int]) -> tuple[int, int]:
        passes = successes = 0
        for i in range(*bounds):
            outcome = run_protocol(code, spec, np.random.default_rng([seed, i]))
            if not outcome.aborted:
                passes += 1
                successes += int(outcome.logical_success)
        return passes, successes

    chunk = max(1, math.ceil(trials / max(1, workers) / 4))
    ranges = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run_range, ranges))
    else:
        counts = [run_range(r) for r in ranges]
    passes = sum(c[0] for c in counts)
    successes = sum(c[1] for c in counts)

    if passes == 0:
        fidelity = ci_low = ci_high = None
    else:
        fidelity = successes / passes
        ci_low, ci_high = wilson_interval(successes, passes)
    return PurificationReport(
        trials=trials,
        passes=passes,
        successes=successes,
        pass_rate=passes / trials,
        conditional_fidelity=fidelity,
        ci_low=ci_low,
        ci_high=ci_high,
        seed=seed,
    )


def _all_patterns(n: int) -> np.ndarray:
    return np.array([gf2.int_to_bits(v, n) for v in range(2**n)], dtype=np.uint8)


def _success_flags(code: CssCode, patterns: np.ndarray, which: str) -> np.ndarray:
    check = code.h1 if which == "bit" else code.h2
    table = code.bit_table if which == "bit" else code.phase_table
    syndromes = gf2.matmul(patterns, check.T)
    keys = syndromes @ (1 << np.arange(check.shape[0] - 1, -1, -1))
    residuals = patterns ^ table.leaders[keys]
    membership = code.c2_dual_basis if which == "bit" else code.c1.generator
    return ~gf2.matmul(residuals, membership.T).any(axis=1)


def exact_logical_success_rate(code: CssCode, spec: PauliChannelSpec, random_mask: bool = True) -> float:
    """Exact success probability by enumerating all 4^n code-pair patterns.

    Check pairs are independent of code pairs under i.i.d. noise, so
    conditioning on passing the check leaves this distribution unchanged.
    """
    n = code.c1.n
    if n > _MAX_ENUMERATION_LENGTH:
        raise ValueError(f"exact enumeration is limited to block length {_MAX_ENUMERATION_LENGTH}")
    eff = spec.symmetrized() if random_mask else spec
    patterns = _all_patterns(n)
    bit_ok = _success_flags(code, patterns, "bit").astype(float)
    phase_ok = _success_flags(code, patterns, "phase").astype(float)
    # joint per-qubit law: rows index the bit component, columns the phase component
    joint = np.array([[eff.p_i, eff.p_z], [eff.p_x, eff.p_y]])
    weights = np.ones((patterns.shape[0], patterns.shape[0]))
    for j in range(n):
        weights *= joint[patterns[:, j, np.newaxis], patterns[np.newaxis, :, j]]
    return float(bit_ok @ weights @ phase_ok)


def exact_pass_rate(code: CssCode, spec: PauliChannelSpec, random_mask: bool = True) -> float:
    """Exact probability that at most t of the n check pairs disagree."""
    eff = spec.symmetrized() if random_mask else spec
    q = eff.p_x + eff.p_y
    n = code.c1.n
    return float(
        sum(math.comb(n, k) * q**k * (1.0 - q) ** (n - k) for k in range(code.t + 1))
    )
