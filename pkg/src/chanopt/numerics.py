"""Dense complex linear algebra kernel for small operators.

Everything downstream (channels, sweeps, protocols) runs on plain complex
numpy arrays at dimensions well under a hundred, so this module favors
clarity over asymptotics: dense storage, eigendecompositions wherever
convenient, and explicit shape bookkeeping through :class:`SystemShape`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class SystemShape:
    """Tensor factorization of a square matrix into subsystem dimensions."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.factor_dims))

    def check(self, m: np.ndarray) -> None:
        if m.shape != (self.dim, self.dim):
            raise ValueError(
                f"shape mismatch: matrix is {m.shape}, factors {self.factor_dims} "
                f"require {self.dim}x{self.dim}"
            )


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array and reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if not np.isfinite(a).all():
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return np.abs(m - m.conj().T).max() <= tol


def hermitian_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector columns). The input is
    symmetrized first so that round-off on analytically Hermitian operands
    cannot leak imaginary parts into the spectrum.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eigendecomposition needs a square matrix")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def partial_trace(m, shape: SystemShape, keep: int) -> np.ndarray:
    """Trace out every tensor factor except ``keep``.

    The trace of the input is preserved: tr(result) = tr(m).
    """
    m = as_matrix(m)
    shape.check(m)
    dims = shape.factor_dims
    k = len(dims)
    if not 0 <= keep < k:
        raise ValueError(f"keep index {keep} out of range for {k} factors")
    if 2 * k > len(_LETTERS):
        raise ValueError("too many tensor factors")
    t = m.reshape(dims + dims)
    row = list(_LETTERS[:k])
    col = list(_LETTERS[:k])
    col[keep] = _LETTERS[k]
    sub = "".join(row) + "".join(col) + "->" + row[keep] + col[keep]
    return np.einsum(sub, t)


def partial_transpose(m, shape: SystemShape, on: int) -> np.ndarray:
    """Transpose a single tensor factor; applying twice is the identity."""
    m = as_matrix(m)
    shape.check(m)
    dims = shape.factor_dims
    k = len(dims)
    if not 0 <= on < k:
        raise ValueError(f"transpose index {on} out of range for {k} factors")
    t = m.reshape(dims + dims)
    t = np.swapaxes(t, on, on + k)
    return t.reshape(m.shape)


def trace_norm(m) -> float:
    """Sum of singular values; for Hermitian input, sum of |eigenvalues|.

    Hermiticity is detected within HERMITICITY_TOL so that analytically
    Hermitian operands take the cheaper, more accurate eigenvalue path.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("trace norm is defined here for square matrices only")
    if is_hermitian(m):
        w, _ = hermitian_eig(m)
        return float(np.abs(w).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def max_abs(m) -> float:
    """Largest entry magnitude; the residual measure used throughout."""
    return float(np.abs(np.asarray(m)).max())


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def max_entangled(d: int) -> np.ndarray:
    """Amplitudes of the maximally entangled state on a d x d bipartite space."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def is_density(m: np.ndarray, tol: float = 1e-9) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1] or not is_hermitian(m, tol):
        return False
    if abs(np.trace(m).real - 1.0) > tol:
        return False
    w, _ = hermitian_eig(m)
    return bool(w.min() >= -tol)
