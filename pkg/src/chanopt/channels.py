"""Channel representations and constructors.

A channel is carried either as a Kraus list (:class:`KrausChannel`) or as a
Choi matrix (:class:`ChoiMatrix`); both know their input and output
dimensions, and conversion goes through :func:`choi_of` and
:meth:`ChoiMatrix.to_kraus`.

Choi convention: ``W = sum_ij L(|i><j|) (x) |i><j|`` on H_out (x) H_in, so a
row-major reshape of a Kraus operator K (dout x din) vectorizes it into the
rank-one contribution vec(K) vec(K)^dag. The map acts as
``L(rho) = tr_in[ W (1 (x) rho^T) ]``.

Basis labels run 0..d-1 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    SystemShape,
    as_matrix,
    dagger,
    hermitian_eig,
    is_hermitian,
    max_abs,
    tensor,
)

DEFAULT_TOL = 1e-9


class ConstraintViolation(ValueError):
    """A family constructor received parameters outside its admissible set."""


@dataclass
class KrausChannel:
    """Completely positive trace preserving map as a list of Kraus operators.

    All operators are dout x din; trace preservation sum_k K^dag K = I is the
    caller's responsibility and is what :func:`validate_cptp` checks.
    """

    kraus_ops: list[np.ndarray]
    din: int
    dout: int

    def __post_init__(self):
        if not self.kraus_ops:
            raise ValueError("at least one Kraus operator required")
        ops = [as_matrix(k) for k in self.kraus_ops]
        for k in ops:
            if k.shape != (self.dout, self.din):
                raise ValueError(
                    f"Kraus operator shape {k.shape} does not match "
                    f"(dout, din) = ({self.dout}, {self.din})"
                )
        self.kraus_ops = ops

    @classmethod
    def from_ops(cls, ops) -> "KrausChannel":
        first = as_matrix(ops[0])
        return cls(list(ops), din=first.shape[1], dout=first.shape[0])

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        return sum(k @ rho @ dagger(k) for k in self.kraus_ops)

    def kraus_sum(self) -> np.ndarray:
        """sum_k K^dag K, equal to the identity for a trace preserving map."""
        return sum(dagger(k) @ k for k in self.kraus_ops)


@dataclass
class ChoiMatrix:
    matrix: np.ndarray
    din: int
    dout: int

    def __post_init__(self):
        self.matrix = as_matrix(self.matrix)
        n = self.din * self.dout
        if self.matrix.shape != (n, n):
            raise ValueError(
                f"Choi matrix shape {self.matrix.shape} does not match "
                f"dout*din = {n}"
            )

    def apply(self, rho) -> np.ndarray:
        """L(rho) = tr_in[ W (1 (x) rho^T) ]."""
        rho = as_matrix(rho)
        m = self.matrix @ np.kron(np.eye(self.dout), rho.T)
        t = m.reshape(self.dout, self.din, self.dout, self.din)
        return np.trace(t, axis1=1, axis2=3)

    def trace_out_output(self) -> np.ndarray:
        """tr_out W; equals I_din for a trace preserving map."""
        t = self.matrix.reshape(self.dout, self.din, self.dout, self.din)
        return np.trace(t, axis1=0, axis2=2)

    def to_kraus(self, tol: float = 1e-12) -> KrausChannel:
        """Kraus form from the eigendecomposition of the Choi matrix.

        Eigenvalues below tol are treated as zero; negative eigenvalues beyond
        tolerance mean the map is not completely positive.
        """
        w, v = hermitian_eig(self.matrix)
        if w.min() < -1e-8:
            raise ValueError(f"Choi matrix is not PSD (min eig {w.min():.3e})")
        ops = []
        for lam, col in zip(w, v.T):
            if lam > tol:
                ops.append(np.sqrt(lam) * col.reshape(self.dout, self.din))
        if not ops:
            raise ValueError("Choi matrix has no positive eigenvalues")
        return KrausChannel(ops, din=self.din, dout=self.dout)


@dataclass
class Povm:
    """Positive operator valued measure: PSD elements summing to the identity."""

    elements: list[np.ndarray]
    labels: list[str] | None = None

    def __post_init__(self):
        self.elements = [as_matrix(e) for e in self.elements]
        d = self.elements[0].shape[0]
        for e in self.elements:
            if e.shape != (d, d):
                raise ValueError("POVM elements must share a square dimension")
        if self.labels is None:
            self.labels = [str(i) for i in range(len(self.elements))]

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        total = sum(self.elements)
        if max_abs(total - np.eye(self.dim)) > tol:
            raise ConstraintViolation("POVM completeness: elements do not sum to I")
        for i, e in enumerate(self.elements):
            w, _ = hermitian_eig(e)
            if w.min() < -tol:
                raise ConstraintViolation(f"POVM element {i} is not PSD")


@dataclass
class ChannelFamily:
    """Ordered, labeled channels sharing input and output spaces.

    ``params`` carries kind-specific structure: the xi vectors of a qubit
    generalized Pauli family, the rotation data of a rotated measurement
    family, and so on. Consumers that need structure (the entanglement
    module, the measurement certifiers) read it from here.
    """

    members: list[tuple[str, KrausChannel]]
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.members:
            raise ValueError("a family needs at least one member")
        din = self.members[0][1].din
        dout = self.members[0][1].dout
        for label, ch in self.members:
            if ch.din != din or ch.dout != dout:
                raise ValueError(f"member {label!r} has mismatched dimensions")

    @property
    def din(self) -> int:
        return self.members[0][1].din

    @property
    def dout(self) -> int:
        return self.members[0][1].dout

    def __len__(self) -> int:
        return len(self.members)

    def channels(self) -> list[KrausChannel]:
        return [ch for _, ch in self.members]

    def labels(self) -> list[str]:
        return [label for label, _ in self.members]


# ---------------------------------------------------------------------------
# Core operations


def choi_of(ch: KrausChannel) -> ChoiMatrix:
    """Choi matrix sum_k vec(K_k) vec(K_k)^dag with row-major vec."""
    n = ch.dout * ch.din
    w = np.zeros((n, n), dtype=complex)
    for k in ch.kraus_ops:
        v = k.reshape(-1)
        w += np.outer(v, v.conj())
    return ChoiMatrix(w, din=ch.din, dout=ch.dout)


def apply_extended(ch: KrausChannel, rho, shape: SystemShape) -> np.ndarray:
    """Apply the channel to the first tensor factor of rho.

    With a single-factor shape this is plain application; otherwise the map
    acts as L (x) I on the remaining factors.
    """
    rho = as_matrix(rho)
    shape.check(rho)
    if shape.factor_dims[0] != ch.din:
        raise ValueError(
            f"first factor {shape.factor_dims[0]} does not match channel din {ch.din}"
        )
    rest = int(np.prod(shape.factor_dims[1:])) if len(shape.factor_dims) > 1 else 1
    if rest == 1:
        return ch.apply(rho)
    eye = np.eye(rest)
    return sum(
        np.kron(k, eye) @ rho @ np.kron(dagger(k), eye) for k in ch.kraus_ops
    )


@dataclass
class CptpReport:
    trace_preserving: bool
    cp: bool
    min_choi_eig: float

    @property
    def valid(self) -> bool:
        return self.trace_preserving and self.cp


def validate_cptp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> CptpReport:
    tp = max_abs(ch.kraus_sum() - np.eye(ch.din)) <= tol
    w, _ = hermitian_eig(choi_of(ch).matrix)
    min_eig = float(w.min())
    return CptpReport(trace_preserving=bool(tp), cp=min_eig >= -tol, min_choi_eig=min_eig)


def gen_pauli(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Generalized Pauli pair (X_d, Z_d).

    X_d is the cyclic shift with X|j> = |j-1 mod d>, Z_d = diag(w^(k+1)) for
    w = exp(2 pi i / d); they satisfy X^d = Z^d = 1 and w Z X = X Z.
    """
    if d < 2:
        raise ValueError(f"generalized Pauli needs dimension >= 2, got {d}")
    x = np.zeros((d, d), dtype=complex)
    for b in range(d):
        x[b, (b + 1) % d] = 1.0
    w = np.exp(2j * np.pi / d)
    z = np.diag([w ** (k + 1) for k in range(d)])
    return x, z


def weyl_ops(d: int) -> list[np.ndarray]:
    """The d^2 Weyl operators X^j Z^k, ordered with j major, k minor."""
    x, z = gen_pauli(d)
    xs = [np.linalg.matrix_power(x, j) for j in range(d)]
    zs = [np.linalg.matrix_power(z, k) for k in range(d)]
    return [xs[j] @ zs[k] for j in range(d) for k in range(d)]


def is_unital(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    if ch.din != ch.dout:
        raise ValueError("unitality is defined for equal input/output dimensions")
    out = sum(k @ dagger(k) for k in ch.kraus_ops)
    return max_abs(out - np.eye(ch.dout)) <= tol


def is_covariant(
    fam: ChannelFamily,
    group: list[tuple[np.ndarray, np.ndarray]],
    tol: float = DEFAULT_TOL,
    contravariant: bool = False,
) -> bool:
    """Check L(U_g rho U_g^dag) = V_g L(rho) V_g^dag for every member and g.

    The contravariant variant conjugates the output rotation: V_g -> conj(V_g).
    Both sides are compared on Choi matrices, which is equivalent to comparing
    the maps themselves.
    """
    din, dout = fam.din, fam.dout
    gs = []
    for u, v in group:
        u = as_matrix(u)
        v = as_matrix(v)
        if max_abs(u @ dagger(u) - np.eye(din)) > 1e-9 or max_abs(
            v @ dagger(v) - np.eye(dout)
        ) > 1e-9:
            raise ValueError("group elements must be unitary")
        gs.append((u, v.conj() if contravariant else v))
    eye_in = np.eye(din)
    eye_out = np.eye(dout)
    for _, ch in fam.members:
        w = choi_of(ch).matrix
        for u, v in gs:
            pre = np.kron(eye_out, u.T) @ w @ np.kron(eye_out, u.conj())
            post = np.kron(v, eye_in) @ w @ np.kron(dagger(v), eye_in)
            if max_abs(pre - post) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Family constructors
#
# Parameter mapping for the qubit generalized Pauli family: with the Weyl
# order [I, Z, X, XZ] the mixing weights are
#   theta = (xi0, xi3, xi1, xi2),  xi0 = 1 - xi1 - xi2 - xi3,
# i.e. xi1 weights X, xi2 weights XZ (= -iY), xi3 weights Z.


def gp_theta_from_xi(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (3,):
        raise ConstraintViolation("gp d=2 takes a 3-component xi vector")
    xi0 = 1.0 - xi.sum()
    theta = np.array([xi0, xi[2], xi[0], xi[1]])
    if theta.min() < -1e-12 or theta.max() > 1 + 1e-12:
        raise ConstraintViolation(
            f"gp weights must lie in the probability simplex, got theta={theta}"
        )
    return np.clip(theta, 0.0, 1.0)


def gp_xi_from_theta(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.array([theta[2], theta[3], theta[1]])


def _gp_channel(d: int, theta) -> KrausChannel:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (d * d,):
        raise ConstraintViolation(f"gp d={d} needs {d*d} weights, got {theta.shape}")
    if theta.min() < -1e-12 or abs(theta.sum() - 1.0) > 1e-9:
        raise ConstraintViolation(
            "gp weights must be nonnegative and sum to 1 "
            f"(min {theta.min():.3e}, sum {theta.sum():.12f})"
        )
    ops = [
        np.sqrt(max(t, 0.0)) * u
        for t, u in zip(theta, weyl_ops(d))
        if t > 1e-15
    ]
    if not ops:
        raise ConstraintViolation("gp weights are all zero")
    return KrausChannel(ops, din=d, dout=d)


def gp_weights_from_channel(ch: KrausChannel, tol: float = 1e-9) -> np.ndarray:
    """Recover Weyl mixing weights from a channel's Choi matrix.

    Works for any channel whose Choi state is diagonal in the basis
    (W_i (x) 1)|Phi_d>; raises ConstraintViolation otherwise.
    """
    d = ch.din
    if ch.dout != d:
        raise ConstraintViolation("weight recovery needs din == dout")
    w = choi_of(ch).matrix / d
    phi = np.zeros(d * d, dtype=complex)
    phi[:: d + 1] = 1.0 / np.sqrt(d)
    vecs = [np.kron(u, np.eye(d)) @ phi for u in weyl_ops(d)]
    weights = np.array([np.real(v.conj() @ w @ v) for v in vecs])
    recon = sum(t * np.outer(v, v.conj()) for t, v in zip(weights, vecs))
    if max_abs(recon - w) > tol:
        raise ConstraintViolation("channel is not a Weyl mixture")
    return weights


def _damp_channel(p: float, xi: float) -> KrausChannel:
    if not 0.0 <= p <= 1.0 or not 0.0 <= xi <= 1.0:
        raise ConstraintViolation(f"damp needs p, xi in [0,1], got p={p}, xi={xi}")
    sp, sq = np.sqrt(p), np.sqrt(1.0 - p)
    ops = [
        sp * np.diag([1.0, np.sqrt(xi)]),
        sq * np.diag([np.sqrt(xi), 1.0]),
        sp * np.array([[0.0, np.sqrt(1.0 - xi)], [0.0, 0.0]]),
        sq * np.array([[0.0, 0.0], [np.sqrt(1.0 - xi), 0.0]]),
    ]
    return KrausChannel([op.astype(complex) for op in ops], din=2, dout=2)


def _diag_channel(d: int, theta) -> KrausChannel:
    """Cyclic family of diagonal Kraus operators.

    E_1 carries the parameter vector on its leading diagonal entries followed
    by the norm entry sqrt(sum |theta|^2), zeros after; E_i (i = 2..d) is the
    cyclic conjugate X^(i-1) E_1 X^-(i-1). Trace preservation pins
    sum_m |E_1[m,m]|^2 = 1, which is validated numerically rather than
    assumed in closed form.
    """
    theta = np.asarray(theta, dtype=complex).reshape(-1)
    want = int(np.ceil((d - 1) / 2))
    if theta.shape != (want,):
        raise ConstraintViolation(
            f"diag d={d} needs {want} parameters, got {theta.shape[0]}"
        )
    ent = np.zeros(d, dtype=complex)
    ent[:want] = theta
    ent[want] = np.sqrt(float(np.sum(np.abs(theta) ** 2)))
    e1 = np.diag(ent)
    x, _ = gen_pauli(d)
    ops = []
    for i in range(d):
        xi_pow = np.linalg.matrix_power(x, i)
        ops.append(xi_pow @ e1 @ dagger(xi_pow))
    ch = KrausChannel(ops, din=d, dout=d)
    if max_abs(ch.kraus_sum() - np.eye(d)) > DEFAULT_TOL:
        raise ConstraintViolation(
            "diag parameters violate trace preservation; need sum of squared "
            f"diagonal magnitudes = 1, got {np.sum(np.abs(ent) ** 2):.12f}"
        )
    return ch


def cdep_choi(d: int, theta: float) -> ChoiMatrix:
    """Choi matrix theta * SWAP + (1-theta)/d * I of the contravariant family.

    The SWAP summand alone is the (non-CP) transpose map; the mixture is CP
    exactly on theta in [0, 1/(d+1)].
    """
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    w = theta * swap + (1.0 - theta) / d * np.eye(d * d)
    return ChoiMatrix(w, din=d, dout=d)


def _cdep_channel(d: int, theta: float) -> KrausChannel:
    if not 0.0 <= theta <= 1.0 / (d + 1) + 1e-12:
        raise ConstraintViolation(
            f"cdep parameter range is [0, 1/(d+1)] = [0, {1.0/(d+1):.6f}], got {theta}"
        )
    return cdep_choi(d, theta).to_kraus()


def _ou_channel(unitaries, weights) -> KrausChannel:
    us = [as_matrix(u) for u in unitaries]
    d = us[0].shape[0]
    for i, u in enumerate(us):
        if u.shape != (d, d) or max_abs(u @ dagger(u) - np.eye(d)) > 1e-9:
            raise ConstraintViolation(f"ou element {i} is not unitary")
    for i in range(len(us)):
        for j in range(i + 1, len(us)):
            if abs(np.trace(dagger(us[j]) @ us[i])) > 1e-9:
                raise ConstraintViolation(
                    f"ou elements {i},{j} violate orthogonality tr(U_i U_j^dag) = 0"
                )
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(us),) or w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-9:
        raise ConstraintViolation("ou weights must be a probability vector over the unitaries")
    ops = [np.sqrt(max(t, 0.0)) * u for t, u in zip(w, us) if t > 1e-15]
    return KrausChannel(ops, din=d, dout=d)


def _qubit_phase_channel(t1: float, t2: float) -> KrausChannel:
    r2 = t1 * t1 + t2 * t2
    if r2 > 1.0 + 1e-12:
        raise ConstraintViolation(
            f"qubit-phase parameter must satisfy t1^2 + t2^2 <= 1, got {r2:.6f}"
        )
    e1 = np.diag([1.0, t1 + 1j * t2])
    e2 = np.diag([0.0, np.sqrt(max(1.0 - r2, 0.0))])
    return KrausChannel([e1, e2], din=2, dout=2)


def measurement_channel(povm: Povm) -> KrausChannel:
    """Channel that measures a POVM and outputs the outcome label.

    Output dimension is the number of outcomes; Kraus operators are
    sqrt(lam) |i><phi| over the eigenpairs of each element, so the output is
    diagonal in the outcome basis: L(rho) = sum_i tr(rho M_i) |i><i|.
    """
    povm.validate()
    d = povm.dim
    m = len(povm.elements)
    ops = []
    for i, elem in enumerate(povm.elements):
        w, v = hermitian_eig(elem)
        for lam, col in zip(w, v.T):
            if lam > 1e-12:
                out = np.zeros((m, d), dtype=complex)
                out[i, :] = np.sqrt(lam) * col.conj()
                ops.append(out)
    return KrausChannel(ops, din=d, dout=m)


def _measurement_member(povm_elems) -> tuple[KrausChannel, Povm]:
    povm = Povm([as_matrix(e) for e in povm_elems])
    return measurement_channel(povm), povm


def rotated_povm(base_plus, base_minus, unitaries) -> tuple[list, list, float]:
    """Build the rotated measurement pair M_pm(i) = (1/c) U_i M_pm U_i^dag.

    Requires sum_i U_i A U_i^dag = c tr(A) 1 (checked on random A), which
    fixes c = sum_i tr(M)/d per element and makes each rotated set a POVM.
    """
    us = [as_matrix(u) for u in unitaries]
    d = us[0].shape[0]
    rng = np.random.default_rng(20240814)
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    total = sum(u @ a @ dagger(u) for u in us)
    c = len(us) / d
    if max_abs(total - c * np.trace(a) * np.eye(d)) > 1e-8:
        raise ConstraintViolation(
            "rotation set does not satisfy sum_i U A U^dag = c tr(A) 1"
        )
    mp = as_matrix(base_plus)
    mm = as_matrix(base_minus)
    plus = [u @ mp @ dagger(u) / c for u in us]
    minus = [u @ mm @ dagger(u) / c for u in us]
    return plus, minus, c


def make_family(kind: str, params: dict) -> ChannelFamily:
    """Construct a validated channel family of the given kind.

    Raises ConstraintViolation naming the violated constraint when the
    parameters fall outside the kind's admissible set. Every member of the
    returned family passes validate_cptp.
    """
    members: list[tuple[str, KrausChannel]] = []
    stored: dict = {}

    if kind == "gp":
        d = int(params["d"])
        if d == 2 and "xis" in params:
            xis = [np.asarray(x, dtype=float) for x in params["xis"]]
            thetas = [gp_theta_from_xi(x) for x in xis]
            stored["xis"] = xis
        else:
            thetas = [np.asarray(t, dtype=float) for t in params["thetas"]]
            if d == 2:
                stored["xis"] = [gp_xi_from_theta(t) for t in thetas]
        stored["thetas"] = thetas
        labels = params.get("labels") or [f"gp{i}" for i in range(len(thetas))]
        members = [(lab, _gp_channel(d, t)) for lab, t in zip(labels, thetas)]

    elif kind == "damp":
        p = float(params["p"])
        xis = [float(x) for x in params["xis"]]
        labels = params.get("labels") or [f"damp{i}" for i in range(len(xis))]
        members = [(lab, _damp_channel(p, x)) for lab, x in zip(labels, xis)]
        stored = {"p": p, "xis": xis}

    elif kind == "diag":
        d = int(params["d"])
        thetas = [np.asarray(t, dtype=complex).reshape(-1) for t in params["thetas"]]
        labels = params.get("labels") or [f"diag{i}" for i in range(len(thetas))]
        members = [(lab, _diag_channel(d, t)) for lab, t in zip(labels, thetas)]
        stored = {"thetas": thetas}

    elif kind == "cdep":
        d = int(params["d"])
        thetas = [float(t) for t in params["thetas"]]
        labels = params.get("labels") or [f"cdep{i}" for i in range(len(thetas))]
        members = [(lab, _cdep_channel(d, t)) for lab, t in zip(labels, thetas)]
        stored = {"thetas": thetas}

    elif kind == "ou":
        unitaries = params["unitaries"]
        weight_sets = params["weights"]
        labels = params.get("labels") or [f"ou{i}" for i in range(len(weight_sets))]
        members = [(lab, _ou_channel(unitaries, w)) for lab, w in zip(labels, weight_sets)]
        stored = {"unitaries": [as_matrix(u) for u in unitaries]}

    elif kind == "qubit-phase":
        thetas = [(float(a), float(b)) for a, b in params["thetas"]]
        labels = params.get("labels") or [f"phase{i}" for i in range(len(thetas))]
        members = [(lab, _qubit_phase_channel(a, b)) for lab, (a, b) in zip(labels, thetas)]
        stored = {"thetas": thetas}

    elif kind == "measurement":
        if "unitaries" in params:
            plus, minus, c = rotated_povm(
                params["m_plus"], params["m_minus"], params["unitaries"]
            )
            ch_p, povm_p = _measurement_member(plus)
            ch_m, povm_m = _measurement_member(minus)
            members = [("plus", ch_p), ("minus", ch_m)]
            stored = {
                "structure": "rotated",
                "unitaries": [as_matrix(u) for u in params["unitaries"]],
                "m_plus": as_matrix(params["m_plus"]),
                "m_minus": as_matrix(params["m_minus"]),
                "c": c,
                "povms": [povm_p, povm_m],
            }
        else:
            povm_sets = params["povms"]
            labels = params.get("labels") or [f"meas{i}" for i in range(len(povm_sets))]
            povms = []
            for lab, elems in zip(labels, povm_sets):
                ch, povm = _measurement_member(elems)
                members.append((lab, ch))
                povms.append(povm)
            stored = {"structure": params.get("structure", "plain"), "povms": povms}

    elif kind == "unitary":
        unitaries = [as_matrix(u) for u in params["unitaries"]]
        d = unitaries[0].shape[0]
        for i, u in enumerate(unitaries):
            if max_abs(u @ dagger(u) - np.eye(d)) > 1e-9:
                raise ConstraintViolation(f"unitary member {i} is not unitary")
        labels = params.get("labels") or [f"u{i}" for i in range(len(unitaries))]
        members = [(lab, KrausChannel([u], din=d, dout=d)) for lab, u in zip(labels, unitaries)]

    elif kind == "custom":
        kraus_sets = params["kraus"]
        labels = params.get("labels") or [f"ch{i}" for i in range(len(kraus_sets))]
        members = [(lab, KrausChannel.from_ops(ops)) for lab, ops in zip(labels, kraus_sets)]

    else:
        raise ConstraintViolation(f"unknown family kind {kind!r}")

    fam = ChannelFamily(members=members, kind=kind, params=stored)
    for label, ch in fam.members:
        report = validate_cptp(ch, DEFAULT_TOL * 10)
        if not report.valid:
            raise ConstraintViolation(
                f"member {label!r} failed CPTP validation "
                f"(tp={report.trace_preserving}, min Choi eig={report.min_choi_eig:.3e})"
            )
    return fam
