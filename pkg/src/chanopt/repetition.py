"""Strategies for using a channel several times.

Identical repetition sends copies of one input, parallel repetition sends a
joint entangled input, and sequential repetition pipes each use's output
through an interleaver channel into the next use. The two certificates here
are executable guarantees: for covariant families, feeding the entangled
optimum identically reproduces any sequential strategy's final state; for
binary measurement families, classically adaptive block inputs never beat
identical repetition.

Everything is assembled as dense matrices; a dimension guard keeps the
joint spaces at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelFamily, KrausChannel, apply_extended
from .comparison import bayes_binary_risk
from .numerics import SystemShape, hermitian_eig, max_abs, max_entangled
from .optimal_inputs import IrrepBlocks, PureState, group_correction_simulator

DIM_GUARD = 4096


@dataclass
class Strategy:
    mode: str
    n: int
    input: PureState
    interleavers: tuple[KrausChannel, ...] = ()

    def __post_init__(self):
        if self.mode not in ("identical", "parallel", "sequential"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        self.interleavers = tuple(self.interleavers)
        if self.mode == "sequential":
            if len(self.interleavers) != self.n - 1:
                raise ValueError("sequential mode needs n-1 interleavers")
        elif self.interleavers:
            raise ValueError(f"{self.mode} mode takes no interleavers")


@dataclass
class AdaptivePlan:
    """Blockwise classical adaptation: before each block the sender picks an
    input from that block's menu, conditioned on earlier outcomes. The
    intermediate measurement rule is fixed to the binary posterior-weighted
    Helstrom projector; the final block gets the exact Bayes decision."""

    block_sizes: tuple[int, ...]
    menus: tuple[tuple[PureState, ...], ...]

    def __post_init__(self):
        self.block_sizes = tuple(int(b) for b in self.block_sizes)
        if not self.block_sizes or any(b < 1 for b in self.block_sizes):
            raise ValueError("block sizes must be positive")
        self.menus = tuple(tuple(m) for m in self.menus)
        if len(self.menus) != len(self.block_sizes):
            raise ValueError("one menu per block required")
        if any(not m for m in self.menus):
            raise ValueError("menus must be nonempty")


def _apply_member_at(ch: KrausChannel, rho: np.ndarray, dims, k: int) -> np.ndarray:
    """Apply the channel to tensor factor k of a state with the given dims."""
    dims = list(dims)
    if dims[k] != ch.din:
        raise ValueError("factor dimension does not match the channel input")
    n = len(dims)
    t = rho.reshape(*dims, *dims)
    new_dims = dims.copy()
    new_dims[k] = ch.dout
    out = np.zeros((*new_dims, *new_dims), dtype=complex)
    for kop in ch.kraus_ops:
        a = np.moveaxis(np.tensordot(kop, t, axes=(1, k)), 0, k)
        b = np.moveaxis(np.tensordot(a, kop.conj(), axes=(n + k, 1)), -1, n + k)
        out += b
    dim = int(np.prod(new_dims))
    return out.reshape(dim, dim)


def factor_permutation(dims, perm) -> np.ndarray:
    """Unitary reordering tensor factors: |i_0 .. i_{n-1}> -> permuted order."""
    dims = list(dims)
    total = int(np.prod(dims))
    dst = np.transpose(np.arange(total).reshape(dims), perm).reshape(-1)
    p = np.zeros((total, total))
    p[np.arange(total), dst] = 1.0
    return p


def _guard(dim: int):
    if dim > DIM_GUARD:
        raise ValueError(f"joint dimension {dim} exceeds the {DIM_GUARD} guard")


def repeated_output(member: KrausChannel, strat: Strategy) -> np.ndarray:
    """Exact final state of the strategy for one family member."""
    dims = strat.input.shape.factor_dims

    if strat.mode == "identical":
        if len(dims) != 2 or dims[0] != member.din:
            raise ValueError("identical mode expects an input on channel x reference")
        dr = dims[1]
        _guard((member.dout * dr) ** strat.n)
        omega = apply_extended(member, strat.input.density(), strat.input.shape)
        out = omega
        for _ in range(strat.n - 1):
            out = np.kron(out, omega)
        return out

    if strat.mode == "parallel":
        if len(dims) != 2 * strat.n or any(dims[2 * i] != member.din for i in range(strat.n)):
            raise ValueError(
                "parallel mode expects n (channel x reference) factor pairs"
            )
        out_dims = list(dims)
        for i in range(strat.n):
            out_dims[2 * i] = member.dout
        _guard(int(np.prod(out_dims)))
        rho = strat.input.density()
        cur = list(dims)
        for i in range(strat.n):
            rho = _apply_member_at(member, rho, cur, 2 * i)
            cur[2 * i] = member.dout
        return rho

    if len(dims) != 2 or dims[0] != member.din:
        raise ValueError("sequential mode expects an input on channel x reference")
    dr = dims[1]
    _guard(member.dout * dr)
    shape_in = SystemShape((member.din, dr))
    rho = strat.input.density()
    for i in range(strat.n):
        rho = apply_extended(member, rho, shape_in)
        if i < strat.n - 1:
            y = strat.interleavers[i]
            if y.din != member.dout * dr or y.dout != member.din * dr:
                raise ValueError(f"interleaver {i} dimensions do not chain")
            rho = y.apply(rho)
    return rho


# ---------------------------------------------------------------------------
# Interleaver presets


def identity_rewire_interleavers(d: int, d_ref: int, n: int) -> list[KrausChannel]:
    """Feed each output straight into the next use (square channels only)."""
    eye = np.eye(d * d_ref)
    return [KrausChannel.from_ops([eye]) for _ in range(n - 1)]


def fresh_swap_interleavers(d: int, d_ref: int, n: int) -> list[KrausChannel]:
    """Discard the running output into the reference and swap in the next
    fresh copy. Pair with an initial state laid out as
    (in_1, r_1, in_2, r_2, ..., in_n, r_n); the final state is the identical
    repetition up to that factor order.
    """
    dims = [d, d_ref] * n
    out = []
    for i in range(1, n):
        perm = list(range(2 * n))
        perm[0], perm[2 * i] = perm[2 * i], perm[0]
        out.append(KrausChannel.from_ops([factor_permutation(dims, perm)]))
    return out


def random_unitary_interleavers(d: int, d_ref: int, n: int, seed) -> list[KrausChannel]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n - 1):
        dim = d * d_ref
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        out.append(KrausChannel.from_ops([q]))
    return out


# ---------------------------------------------------------------------------
# Certificates


def identical_matches_sequential(
    fam: ChannelFamily,
    group: list[tuple[np.ndarray, np.ndarray]],
    blocks: IrrepBlocks,
    strat_seq: Strategy,
    tol: float = 1e-8,
) -> dict[str, float]:
    """Residual between a sequential run and its identical-repetition
    simulation, per member.

    The simulation consumes one copy of the member's entangled-input output
    per step, reconstructs the step through the group measure-and-correct
    circuit, and applies the same interleavers. Small residuals certify that
    identical repetition of the entangled optimum loses nothing against this
    sequential strategy.
    """
    if strat_seq.mode != "sequential":
        raise ValueError("certificate expects a sequential strategy")
    dims = strat_seq.input.shape.factor_dims
    if len(dims) != 2 or dims[0] != fam.din:
        raise ValueError("sequential input must live on channel x reference")
    sims = group_correction_simulator(fam, group, blocks, tol)

    residuals: dict[str, float] = {}
    for label, ch in fam.members:
        direct = repeated_output(ch, strat_seq)
        rho = strat_seq.input.density()
        for i in range(strat_seq.n):
            rho = sims[label](rho)
            if i < strat_seq.n - 1:
                rho = strat_seq.interleavers[i].apply(rho)
        residuals[label] = max_abs(direct - rho)
    return residuals


def _block_outputs(ch: KrausChannel, psi: PureState, d: int, n_block: int):
    dims = psi.shape.factor_dims
    if len(dims) == n_block and all(dim == d for dim in dims):
        step = 1  # bare inputs, no reference factors
    elif len(dims) == 2 * n_block and all(dims[2 * i] == d for i in range(n_block)):
        step = 2
    else:
        raise ValueError(
            "menu state must carry one channel factor (optionally with a "
            "reference) per use"
        )
    rho = psi.density()
    cur = list(dims)
    for i in range(n_block):
        rho = _apply_member_at(ch, rho, cur, step * i)
        cur[step * i] = ch.dout
    return rho


def _helstrom_projector(x: np.ndarray) -> np.ndarray:
    lam, v = hermitian_eig(x)
    keep = v[:, lam >= 0]
    return keep @ keep.conj().T


def adaptive_vs_identical(
    fam: ChannelFamily, prior: float, plan: AdaptivePlan
) -> dict[str, float]:
    """Best classically adaptive risk over the plan's menus, against the
    identical repetition of the entangled input with a joint decision.

    Intermediate blocks are measured with the posterior-weighted Helstrom
    projector and the outcome reweights the posterior; the last block
    contributes its exact Bayes risk. The menu minimization is exhaustive
    per branch.
    """
    if fam.kind != "measurement":
        raise ValueError("adaptation analysis expects a measurement family")
    if len(fam.members) != 2:
        raise ValueError("binary family required")
    if not 0.0 <= prior <= 1.0:
        raise ValueError("prior must lie in [0,1]")
    d = fam.din
    (_, ch_p), (_, ch_m) = fam.members
    n = sum(plan.block_sizes)
    _guard((ch_p.dout * d) ** n)

    def best_risk(j: int, post_p: float, post_m: float) -> float:
        n_block = plan.block_sizes[j]
        best = np.inf
        for psi in plan.menus[j]:
            rho_p = _block_outputs(ch_p, psi, d, n_block)
            rho_m = _block_outputs(ch_m, psi, d, n_block)
            if j == len(plan.block_sizes) - 1:
                total = post_p + post_m
                risk = total * bayes_binary_risk(rho_p, rho_m, post_p / total)
            else:
                proj = _helstrom_projector(post_p * rho_p - post_m * rho_m)
                risk = 0.0
                for eff in (proj, np.eye(proj.shape[0]) - proj):
                    a = post_p * float(np.trace(rho_p @ eff).real)
                    b = post_m * float(np.trace(rho_m @ eff).real)
                    if a + b <= 1e-15:
                        continue
                    risk += best_risk(j + 1, a, b)
            best = min(best, risk)
        return best

    adaptive = best_risk(0, prior, 1.0 - prior)

    phi = max_entangled(d)
    shape = SystemShape((d, d))
    omega_p = apply_extended(ch_p, np.outer(phi, phi.conj()), shape)
    omega_m = apply_extended(ch_m, np.outer(phi, phi.conj()), shape)
    joint_p, joint_m = omega_p, omega_m
    for _ in range(n - 1):
        joint_p = np.kron(joint_p, omega_p)
        joint_m = np.kron(joint_m, omega_m)
    identical = bayes_binary_risk(joint_p, joint_m, prior)

    return {"adaptive_risk": float(adaptive), "identical_risk": float(identical)}
