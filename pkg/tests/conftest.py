"""Shared fixtures and independent oracles.

The oracles here recompute quantities by the most literal method available
(double loops, eigendecompositions, exhaustive grids) so the library's
closed forms and solvers are checked against something that cannot share
their bugs.
"""
import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)


def random_pure(rng, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density(rng, d: int, rank: int | None = None) -> np.ndarray:
    r = rank or d
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    m = g @ g.conj().T
    return m / np.trace(m).real


def haar_unitary(rng, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ---------------------------------------------------------------------------
# Oracles


def trace_norm_oracle(m) -> float:
    """Sum of singular values from an explicit SVD."""
    return float(np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False).sum())


def partial_trace_oracle(m, dims, keep: int) -> np.ndarray:
    """Index-loop partial trace, no einsum."""
    m = np.asarray(m, dtype=complex)
    dims = tuple(dims)
    dk = dims[keep]
    out = np.zeros((dk, dk), dtype=complex)
    idx = [range(d) for d in dims]
    import itertools

    def flat(multi):
        f = 0
        for d, i in zip(dims, multi):
            f = f * d + i
        return f

    for row in itertools.product(*idx):
        for a in range(dk):
            col = list(row)
            col[keep] = a
            out[row[keep], a] += m[flat(row), flat(col)]
    return out


def partial_transpose_oracle(m, dims, on: int) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    k = len(dims)
    t = m.reshape(tuple(dims) + tuple(dims))
    t = np.swapaxes(t, on, k + on)
    n = int(np.prod(dims))
    return t.reshape(n, n)


def bell_weights_oracle(kraus_ops, d: int) -> np.ndarray:
    """Project the Choi matrix onto the Weyl frame by direct matrix products."""
    x = np.zeros((d, d), dtype=complex)
    for b in range(d):
        x[b, (b + 1) % d] = 1.0
    w = np.exp(2j * np.pi / d)
    z = np.diag([w ** (k + 1) for k in range(d)])
    choi = np.zeros((d * d, d * d), dtype=complex)
    for kop in kraus_ops:
        v = np.asarray(kop, dtype=complex).reshape(-1)
        choi += np.outer(v, v.conj())
    weights = []
    for j in range(d):
        for k in range(d):
            u = np.linalg.matrix_power(x, j) @ np.linalg.matrix_power(z, k)
            vu = u.reshape(-1)
            weights.append((vu.conj() @ choi @ vu).real / d**2)
    return np.array(weights)


def ang_grid_search(x, steps: int):
    """Exhaustive phase grid for the closure equation.

    Returns (min residual, resolution bound): the closure can move by at most
    sum(x[:-1]) * (pi / steps) between neighboring grid points, so a true
    solution leaves a residual below that bound somewhere on the grid.
    """
    x = np.asarray(x, dtype=float)
    k = len(x) - 1
    phases = np.exp(2j * np.pi * np.arange(steps) / steps)
    total = np.array(x[-1], dtype=complex)
    for j in range(k):
        total = total[..., None] + x[j] * phases
    best = np.abs(total).min()
    bound = float(np.sum(x[:k])) * (np.pi / steps)
    return float(best), bound


def hull_min_norm_oracle(points, steps: int = 200) -> float:
    """Brute-force min |convex combination| over a barycentric grid."""
    import itertools

    pts = np.asarray(points, dtype=complex)
    k = len(pts)
    if k == 1:
        return float(abs(pts[0]))
    ticks = np.linspace(0.0, 1.0, steps)
    best = np.inf
    if k == 2:
        for t in ticks:
            best = min(best, abs(t * pts[0] + (1 - t) * pts[1]))
        return float(best)
    for combo in itertools.product(ticks, repeat=k - 1):
        rest = 1.0 - sum(combo)
        if rest < -1e-12:
            continue
        w = np.array(list(combo) + [max(rest, 0.0)])
        best = min(best, abs(np.sum(w * pts)))
    return float(best)
