"""Dense complex linear algebra for quantum states and channels.

Subsystem ordering convention, used by every function in the package: the
leftmost factor in a dims tuple is the most significant index, so the basis
state |j1 j2 ... jk> has flat index j1*d2*...*dk + ... + jk.  This matches
numpy's row-major reshape and ``np.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIG_FLOOR = -1e-10
KRAUS_ATOL = 1e-10
SCHMIDT_TOL = 1e-10
DENSE_CAP = 4096


def _as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"subsystem dimensions must be positive integers, got {dims}")
    total = int(np.prod(out))
    if total > DENSE_CAP:
        raise ValueError(f"total dimension {total} exceeds the dense cap {DENSE_CAP}")
    return out


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state on a composite system with explicit subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, amplitudes: Sequence[complex], dims: Sequence[int]):
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        dims = _as_dims(dims)
        if amps.size != int(np.prod(dims)):
            raise ValueError(f"{amps.size} amplitudes do not fill dims {dims}")
        norm_sq = float(np.real(np.vdot(amps, amps)))
        if abs(norm_sq - 1.0) > max(NORM_ATOL, 4e-12):
            raise ValueError(f"state not normalized: |psi|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", _freeze(amps))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state: Hermitian, unit-trace, positive within numerical floor."""

    entries: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, entries: np.ndarray, dims: Sequence[int]):
        mat = np.array(entries, dtype=complex)
        dims = _as_dims(dims)
        total = int(np.prod(dims))
        if mat.shape != (total, total):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.allclose(mat, mat.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
            raise ValueError("density matrix is not Hermitian")
        trace = float(np.real(np.trace(mat)))
        if abs(trace - 1.0) > max(TRACE_ATOL, 4e-12):
            raise ValueError(f"density matrix trace is {trace!r}, expected 1")
        low = float(np.linalg.eigvalsh(mat)[0])
        if low < EIG_FLOOR:
            raise ValueError(f"density matrix has negative eigenvalue {low!r}")
        object.__setattr__(self, "entries", _freeze(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Quantum operation as a finite list of equally shaped Kraus operators.

    The operators must satisfy the completeness relation
    sum_mu K_mu^dag K_mu = I on the input space.
    """

    operators: tuple[np.ndarray, ...]

    def __init__(self, operators: Iterable[np.ndarray]):
        ops = tuple(np.array(op, dtype=complex) for op in operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(op.shape != shape for op in ops):
            raise ValueError("Kraus operators must all share one 2-d shape")
        total = np.zeros((shape[1], shape[1]), dtype=complex)
        for op in ops:
            total += op.conj().T @ op
        if not np.allclose(total, np.eye(shape[1]), atol=KRAUS_ATOL, rtol=0.0):
            raise ValueError("Kraus operators violate the completeness relation")
        object.__setattr__(self, "operators", tuple(_freeze(op) for op in ops))

    @property
    def input_dim(self) -> int:
        return self.operators[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Singular-value data of a pure state across a bipartition.

    ``coefficients`` are the non-increasing singular values sqrt(p_j);
    ``schmidt_number`` counts those above SCHMIDT_TOL.
    """

    coefficients: np.ndarray
    schmidt_number: int
    left_vectors: tuple[StateVector, ...]
    right_vectors: tuple[StateVector, ...]

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients**2

    @property
    def max_pair_product(self) -> float:
        """Largest p_j * p_k over distinct indices; 0.0 for product states."""
        p = self.probabilities
        if self.schmidt_number < 2:
            return 0.0
        return float(p[0] * p[1])


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the leftmost factor most significant."""
    return np.kron(np.asarray(a), np.asarray(b))


def _permuted_axes(perm: Sequence[int], n_subsystems: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n_subsystems)):
        raise ValueError(f"{perm} is not a permutation of {n_subsystems} subsystems")
    return perm


def permute_subsystems(state, perm: Sequence[int]):
    """Reorder subsystems so that new slot i holds old subsystem perm[i]."""
    if isinstance(state, StateVector):
        axes = _permuted_axes(perm, len(state.dims))
        new_dims = tuple(state.dims[p] for p in axes)
        amps = state.amplitudes.reshape(state.dims).transpose(axes).reshape(-1)
        return StateVector(amps, new_dims)
    if isinstance(state, DensityMatrix):
        axes = _permuted_axes(perm, len(state.dims))
        new_dims = tuple(state.dims[p] for p in axes)
        n = len(state.dims)
        tensor = state.entries.reshape(state.dims + state.dims)
        tensor = tensor.transpose(axes + tuple(n + p for p in axes))
        return DensityMatrix(tensor.reshape(state.dim, state.dim), new_dims)
    raise TypeError(f"cannot permute subsystems of {type(state).__name__}")


def _check_subsystem_indices(indices: Sequence[int], n_subsystems: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"subsystem indices must be distinct, got {indices}")
    for i in idx:
        if not 0 <= i < n_subsystems:
            raise IndexError(f"subsystem index {i} out of range for {n_subsystems} subsystems")
    return idx


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state over ``keep`` (in original relative order)."""
    kept = sorted(_check_subsystem_indices(keep, len(rho.dims)))
    if not kept:
        raise ValueError("keep must be a nonempty set of subsystem indices")
    n = len(rho.dims)
    traced = [i for i in range(n) if i not in kept]
    tensor = rho.entries.reshape(rho.dims + rho.dims)
    # contract each traced subsystem's row index with its column index
    for offset, i in enumerate(traced):
        axis = i - offset
        remaining = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=axis, axis2=axis + remaining)
    new_dims = tuple(rho.dims[i] for i in kept)
    total = int(np.prod(new_dims))
    return DensityMatrix(tensor.reshape(total, total), new_dims)


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose one subsystem's indices; returns a plain (possibly non-PSD) matrix."""
    (sub,) = _check_subsystem_indices([subsystem], len(rho.dims))
    n = len(rho.dims)
    tensor = rho.entries.reshape(rho.dims + rho.dims)
    axes = list(range(2 * n))
    axes[sub], axes[n + sub] = axes[n + sub], axes[sub]
    return tensor.transpose(axes).reshape(rho.dim, rho.dim)


def _sqrtm_psd(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    # eigenvalues below the eigh noise floor are numerically zero; keeping
    # them would inject sqrt(noise) ~ 1e-8 into near-singular square roots
    floor = max(vals[-1], 0.0) * mat.shape[0] * np.finfo(float).eps
    vals = np.where(vals > floor, vals, 0.0)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(sigma: DensityMatrix, tau: DensityMatrix) -> float:
    """Square-root fidelity tr sqrt(sigma^{1/2} tau sigma^{1/2}), in [0, 1].

    Both square roots come from Hermitian eigendecompositions with
    eigenvalues clamped at 0, and the trace quantity is evaluated as the
    trace norm of sqrt(tau) sqrt(sigma), which is robust for near-singular
    states.  When ``tau`` is pure this equals sqrt(overlap(sigma, tau)).
    """
    if sigma.dim != tau.dim:
        raise ValueError(f"dimension mismatch: {sigma.dim} vs {tau.dim}")
    product = _sqrtm_psd(tau.entries) @ _sqrtm_psd(sigma.entries)
    singulars = np.linalg.svd(product, compute_uv=False)
    return float(min(1.0, singulars.sum()))


def overlap(rho: DensityMatrix, phi: StateVector) -> float:
    """Linear overlap <phi|rho|phi>, in [0, 1]."""
    if rho.dim != phi.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {phi.dim}")
    value = float(np.real(phi.amplitudes.conj() @ rho.entries @ phi.amplitudes))
    return min(1.0, max(0.0, value))


def schmidt_decompose(psi: StateVector, left: Sequence[int]) -> SchmidtDecomposition:
    """SVD of the amplitude matrix across the (left, complement) bipartition.

    Both blocks keep their subsystems in original relative order; the
    reconstruction sum_j c_j |left_j> x |right_j> reproduces ``psi`` in the
    (left block, right block) ordering.
    """
    n = len(psi.dims)
    left_idx = sorted(_check_subsystem_indices(left, n))
    if not left_idx or len(left_idx) == n:
        raise ValueError("left must be a proper nonempty subset of subsystems")
    right_idx = [i for i in range(n) if i not in left_idx]
    left_dims = tuple(psi.dims[i] for i in left_idx)
    right_dims = tuple(psi.dims[i] for i in right_idx)
    dl = int(np.prod(left_dims))
    dr = int(np.prod(right_dims))
    matrix = psi.amplitudes.reshape(psi.dims).transpose(left_idx + right_idx).reshape(dl, dr)
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    number = int(np.count_nonzero(s > SCHMIDT_TOL))
    left_vecs = tuple(StateVector(u[:, j], left_dims) for j in range(s.size))
    right_vecs = tuple(StateVector(vh[j, :], right_dims) for j in range(s.size))
    return SchmidtDecomposition(_freeze(s.copy()), number, left_vecs, right_vecs)


def apply_channel(channel: KrausChannel, rho: DensityMatrix, targets: Sequence[int]) -> DensityMatrix:
    """Apply ``channel`` to the grouped ``targets`` subsystems, identity elsewhere.

    The target subsystems are grouped in the listed order (leftmost most
    significant).  A dimension-changing channel is only supported when it
    covers the whole system; the output then has a single subsystem.
    """
    n = len(rho.dims)
    idx = _check_subsystem_indices(targets, n)
    if not idx:
        raise ValueError("targets must be nonempty")
    target_dim = int(np.prod([rho.dims[i] for i in idx]))
    if channel.input_dim != target_dim:
        raise ValueError(
            f"channel input dimension {channel.input_dim} does not match target dimension {target_dim}"
        )
    if channel.output_dim != channel.input_dim and len(idx) != n:
        raise ValueError("dimension-changing channels must act on the full system")

    rest = [i for i in range(n) if i not in idx]
    rest_dim = int(np.prod([rho.dims[i] for i in rest], dtype=int)) if rest else 1
    perm = list(idx) + rest
    tensor = rho.entries.reshape(rho.dims + rho.dims)
    tensor = tensor.transpose(tuple(perm) + tuple(n + p for p in perm))
    blocked = tensor.reshape(target_dim, rest_dim, target_dim, rest_dim)

    out_dim = channel.output_dim
    result = np.zeros((out_dim, rest_dim, out_dim, rest_dim), dtype=complex)
    for op in channel.operators:
        tmp = np.tensordot(op, blocked, axes=([1], [0]))  # (out, rest, in, rest)
        result += np.tensordot(tmp, op.conj(), axes=([2], [1])).transpose(0, 1, 3, 2)

    if out_dim != target_dim:
        return DensityMatrix(result.reshape(out_dim, out_dim), (out_dim,))
    # undo the grouping permutation
    out_tensor = result.reshape(tuple(rho.dims[p] for p in perm) * 2)
    inverse = np.argsort(perm)
    out_tensor = out_tensor.transpose(tuple(inverse) + tuple(n + i for i in inverse))
    return DensityMatrix(out_tensor.reshape(rho.dim, rho.dim), rho.dims)


def entanglement_fidelity(channel: KrausChannel, psi: StateVector, targets: Sequence[int]) -> float:
    """How well the channel on ``targets`` preserves the joint pure state."""
    return overlap(apply_channel(channel, psi.density(), targets), psi)


def channel_superoperator(channel: KrausChannel) -> np.ndarray:
    """Matrix of the channel acting on row-major vectorized density matrices."""
    total = None
    for op in channel.operators:
        term = np.kron(op, op.conj())
        total = term if total is None else total + term
    return total


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary via Ginibre + QR with phase fixing."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    ginibre = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(ginibre)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def haar_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dims = _as_dims(dims)
    total = int(np.prod(dims))
    vec = rng.standard_normal(total) + 1j * rng.standard_normal(total)
    return StateVector(vec / np.linalg.norm(vec), dims)


def ginibre_density(dims: Sequence[int], rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank density matrix G G^dag / tr(G G^dag)."""
    dims = _as_dims(dims)
    total = int(np.prod(dims))
    g = rng.standard_normal((total, total)) + 1j * rng.standard_normal((total, total))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat), dims)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of the difference."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    vals = np.linalg.eigvalsh(a.entries - b.entries)
    return float(0.5 * np.abs(vals).sum())
