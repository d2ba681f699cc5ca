"""The double g + g*, metric n-Lie algebras and Manin triples.

The double has basis (e_1, ..., e_d, f_1, ..., f_d), stored 0-based as
indices 0..d-1 for g and d..2d-1 for g*.  Its bracket on a basis tuple is
determined by which positions hold dual vectors:

* none: the bracket of g;
* all: the dual bracket given by the cobracket;
* exactly position i: (-1)^(n-i) ad*(other entries) applied to that dual vector;
* all but position i: (-1)^(n-i) ad~*(other entries) applied to that vector,
  where ad~* is the coadjoint action of the dual algebra on g;
* anything else: zero.

For n = 2 the middle two cases overlap and both terms are added.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .algebra import CheckReport, NLieAlgebra, Scan, check_filippov_jacobi, check_skew_symmetry
from .bialgebra import (
    DEFAULT_CENTROID_READING,
    Cobracket,
    check_condition_i,
    check_double_construction,
    first_antisymmetry_violation,
)
from .tensor import as_array, canonical_tuples, is_zero, normalize, scalar, zeros

__all__ = [
    "MetricNLieAlgebra",
    "Subspace",
    "ManinTriple",
    "Double",
    "hyperbolic_form",
    "build_double",
    "check_metric",
    "check_manin_triple",
    "bialgebra_from_manin",
    "theorem_equivalence",
]


class MetricNLieAlgebra:
    """An n-Lie algebra with a symmetric non-degenerate bilinear form.

    Invariance is not assumed; see :func:`check_metric`.
    """

    def __init__(self, algebra: NLieAlgebra, form):
        B = as_array(form)
        D = algebra.dim
        if B.shape != (D, D):
            raise ValueError(f"form must be {D} x {D}, got {B.shape}")
        if not bool(np.all(B == B.T)):
            raise ValueError("form is not symmetric")
        if linalg.rank(B) != D:
            raise ValueError("form is degenerate")
        B.flags.writeable = False
        self.algebra = algebra
        self.form = B

    def pairing(self, u, v):
        return scalar(as_array(u).dot(self.form).dot(as_array(v)))


class Subspace:
    """Span of linearly independent vectors (the rows of ``basis``)."""

    def __init__(self, ambient_dim: int, basis: Sequence):
        B = as_array(list(basis)) if len(basis) else zeros((0, ambient_dim))
        if B.ndim != 2 or B.shape[1] != ambient_dim:
            raise ValueError(f"basis vectors must have length {ambient_dim}")
        if B.shape[0] and linalg.rank(B) != B.shape[0]:
            raise ValueError("subspace basis is linearly dependent")
        B.flags.writeable = False
        self.ambient_dim = ambient_dim
        self.basis = B

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coordinates(self, v) -> Optional[list]:
        """c with sum c_i basis_i = v, or None if v is outside the span."""
        v = as_array(v)
        if self.dim == 0:
            return [] if is_zero(v) else None
        return linalg.solve(self.basis.T, list(v))

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None


@dataclass
class ManinTriple:
    metric: MetricNLieAlgebra
    g1: Subspace
    g2: Subspace
    name: str = ""


def hyperbolic_form(d: int) -> np.ndarray:
    """<x + xi, y + eta> = eta(x) + xi(y) in the basis (e, f)."""
    B = zeros((2 * d, 2 * d))
    for i in range(d):
        B[i, d + i] = 1
        B[d + i, i] = 1
    return B


def _double_value(T: np.ndarray, G: np.ndarray, idx: tuple, d: int) -> np.ndarray:
    n = len(idx)
    out = zeros(2 * d)
    duals = [p for p, a in enumerate(idx) if a >= d]
    if not duals:
        out[:d] = T[idx]
        return out
    if len(duals) == n:
        s = tuple(a - d for a in idx)
        out[d:] = G[(slice(None),) + s]
        return out
    if len(duals) == 1:
        i = duals[0]
        X = idx[:i] + idx[i + 1:]
        s = idx[i] - d
        # ad*(X) f_s = -sum_k [X, e_k]_s f_k
        out[d:] += (-1) ** (n - 1 - i) * -T[X + (slice(None), s)]
    if len(duals) == n - 1:
        i = next(p for p in range(n) if idx[p] < d)
        Xi = tuple(a - d for a in idx[:i] + idx[i + 1:])
        x = idx[i]
        # ad~*(Xi) e_x = -sum_k G[x, Xi, k] e_k
        out[:d] += (-1) ** (n - 1 - i) * -G[(x,) + Xi + (slice(None),)]
    return out


@dataclass
class Double:
    metric: MetricNLieAlgebra
    cobracket: Cobracket
    verified: bool
    reports: dict = field(default_factory=dict)

    @property
    def algebra(self) -> NLieAlgebra:
        return self.metric.algebra

    @property
    def form(self) -> np.ndarray:
        return self.metric.form

    def triple(self) -> ManinTriple:
        d = self.cobracket.dim
        eye = [[1 if i == j else 0 for j in range(2 * d)] for i in range(2 * d)]
        return ManinTriple(self.metric, Subspace(2 * d, eye[:d]), Subspace(2 * d, eye[d:]))


def build_double(cb: Cobracket, reading: str = DEFAULT_CENTROID_READING) -> Double:
    """The algebra g + g* with its hyperbolic form.

    Every ordered tuple is evaluated from the pattern rule, then the dense
    tensor is checked for skew-symmetry before canonical storage.  The
    result carries ``verified=True`` only when the cobracket passes the
    double-construction check.
    """
    n, d = cb.arity, cb.dim
    if cb.tensor.shape != (d,) * (n + 1):
        raise ValueError("cobracket and algebra dimensions disagree")
    T, G = cb.algebra.tensor, cb.tensor
    D = 2 * d
    dense = zeros((D,) * n + (D,))
    for idx in itertools.product(range(D), repeat=n):
        dense[idx] = _double_value(T, G, idx, d)
    name = f"double({cb.name})" if cb.name else "double"
    raw = NLieAlgebra.from_dense(n, D, dense, name=name)
    skew = check_skew_symmetry(raw)
    if not skew.verdict:
        raise ValueError(f"double bracket is not skew-symmetric: {skew.counterexample}")
    dc = check_double_construction(cb, reading)
    alg = raw.canonical()
    return Double(
        MetricNLieAlgebra(alg, hyperbolic_form(d)),
        cb,
        verified=dc.verdict,
        reports={"double-construction": dc, "skew-symmetry": skew},
    )


def check_metric(m: MetricNLieAlgebra) -> CheckReport:
    """([X, x], t) + (x, [X, t]) = 0 for increasing X and all x, t."""
    alg = m.algebra
    T, B = alg.tensor, m.form
    n, D = alg.arity, alg.dim
    scan = Scan("metric-invariance")
    for X in canonical_tuples(D, n - 1):
        TX = T[X]  # TX[x] = [X, e_x]
        BT = TX.dot(B)  # BT[x, t] = ([X, e_x], e_t)
        for x in range(D):
            for t in range(D):
                scan.add({"x": X + (x,), "t": (t,)}, as_array(BT[x, t] + BT[t, x]))
    return scan.report()


def _bracket(alg: NLieAlgebra, vectors) -> np.ndarray:
    return alg.bracket(*vectors)


def check_manin_triple(t: ManinTriple) -> CheckReport:
    """Decomposition, isotropy, closure, the mixed-bracket conditions and FJI.

    The two single-mixed conditions are checked for n >= 3 only.  The
    invariance of the form is reported as the ``metric`` part.  The
    mixed-bracket family with k arguments from g1 and n-k from g2 is
    checked for 2 <= k <= n-2 against every basis vector of the ambient
    algebra.
    """
    m = t.metric
    alg = m.algebra
    B = m.form
    n, D = alg.arity, alg.dim
    U, V = t.g1.basis, t.g2.basis
    parts: dict = {}

    parts["metric"] = check_metric(m)

    ds = Scan("direct-sum")
    both = np.concatenate([U, V]) if U.shape[0] and V.shape[0] else (U if U.shape[0] else V)
    r = linalg.rank(both) if both.shape[0] else 0
    ds.add({"dim g1": t.g1.dim, "dim g2": t.g2.dim}, as_array([D - r, D - t.g1.dim - t.g2.dim]))
    parts["direct-sum"] = ds.report()
    direct = parts["direct-sum"].verdict

    iso = Scan("isotropy")
    for label, W in (("g1", U), ("g2", V)):
        P = W.dot(B).dot(W.T) if W.shape[0] else zeros((0, 0))
        for a in range(W.shape[0]):
            for b in range(a, W.shape[0]):
                iso.add({label: (a, b)}, as_array(P[a, b]))
    parts["isotropy"] = iso.report()

    # closure: with g = g1 + g2 the g2-component of a bracket is the residual
    basis_all = np.concatenate([U, V]).T if direct else None
    clo = Scan("closure")
    for label, W, other in (("g1", U, slice(t.g1.dim, None)), ("g2", V, slice(0, t.g1.dim))):
        for idx in canonical_tuples(W.shape[0], n):
            v = _bracket(alg, [W[i] for i in idx])
            if direct:
                coords = linalg.solve(basis_all, list(v))
                res = as_array(coords[other])
            else:
                sub = t.g1 if label == "g1" else t.g2
                res = as_array([0 if sub.contains(v) else 1])
            clo.add({label: idx}, res)
    parts["closure"] = clo.report()

    def mixed(name: str, P, Q):
        scan = Scan(name)
        for X in canonical_tuples(P.shape[0], n - 1):
            xs = [P[i] for i in X]
            for a in range(Q.shape[0]):
                v = _bracket(alg, xs + [Q[a]])
                pair = Q.dot(B).dot(v)
                for b in range(Q.shape[0]):
                    scan.add({"x": X, "y": (a, b)}, as_array(pair[b]))
        return scan.report()

    if n >= 3:
        parts["inv-1"] = mixed("inv-1", U, V)
        parts["inv-2"] = mixed("inv-2", V, U)
    else:
        # the conditions pair against a second vector y_2 (resp. x_2) of a
        # block that only has n - 1 = 1 members, so they are void for n = 2
        for name in ("inv-1", "inv-2"):
            parts[name] = Scan(name).report(note="void for n = 2")

    inv3 = Scan("inv-3")
    for k in range(2, n - 1):
        for X in canonical_tuples(U.shape[0], k):
            for Y in canonical_tuples(V.shape[0], n - k):
                v = _bracket(alg, [U[i] for i in X] + [V[j] for j in Y])
                inv3.add({"x": X, "y": Y, "k": k}, B.dot(v))
    parts["inv-3"] = inv3.report()
    if n < 4:
        parts["inv-3"].details["note"] = "empty family for n < 4"

    parts["filippov-jacobi"] = check_filippov_jacobi(alg)
    return CheckReport.combine("manin-triple", parts)


def bialgebra_from_manin(t: ManinTriple, check: bool = True) -> Cobracket:
    """Read off the cobracket on g1 from the bracket of g2 = g1*.

    The dual basis c_1..c_d of g2 with (b_x, c_k) = delta is obtained by one
    exact inversion of the cross Gram matrix.  The bracket of g1 is written
    in its own basis b, and gamma(b_x) has coefficient (b_x, [c_s1..c_sn])
    on b_s1 (x) ... (x) b_sn.
    """
    if check:
        rep = check_manin_triple(t)
        if not rep.verdict:
            failing = [k for k, v in rep.details.items() if isinstance(v, CheckReport) and not v.verdict]
            raise ValueError(f"not a Manin triple (failing: {', '.join(failing)})")
    m = t.metric
    alg, B = m.algebra, m.form
    n = alg.arity
    Bb, Cp = t.g1.basis, t.g2.basis
    d = Bb.shape[0]
    if Cp.shape[0] != d:
        raise ValueError("g1 and g2 have different dimensions")
    cross = Bb.dot(B).dot(Cp.T)  # cross[x, y] = (b_x, c'_y)
    M = linalg.inverse(cross)
    C = M.T.dot(Cp)  # c_k = sum_y M[y, k] c'_y
    C = normalize(C)
    brackets = {}
    for idx in canonical_tuples(d, n):
        v = _bracket(alg, [Bb[i] for i in idx])
        coeffs = C.dot(B).dot(v)  # (v, c_k)
        if not is_zero(coeffs):
            brackets[idx] = tuple(coeffs)
    g = NLieAlgebra(n, d, brackets)
    G = zeros((d,) * (n + 1))
    for idx in itertools.product(range(d), repeat=n):
        v = _bracket(alg, [C[i] for i in idx])
        G[(slice(None),) + idx] = Bb.dot(B).dot(v)  # (b_x, v)
    return Cobracket(g, G, antisymmetric=first_antisymmetry_violation(G) is None)


def theorem_equivalence(cb: Cobracket, reading: str = DEFAULT_CENTROID_READING) -> CheckReport:
    """Both directions of the double-construction / Manin-triple equivalence.

    The premise is condition (i): without it the statement says nothing,
    so the check passes vacuously with a note.  When the cobracket is a
    double-construction bialgebra the forward direction (FJI, invariance,
    Manin triple) and the backward round trip are required.  Otherwise the
    forward direction is skipped and the triple is probed: a Manin triple
    there would contradict the converse.
    """
    premise = check_condition_i(cb)
    if not premise.verdict:
        rep = CheckReport(name="theorem-equivalence", verdict=True, details={"premise": premise})
        rep.details["note"] = "premise fails (dual bracket is not an n-Lie bracket); statement is vacuous"
        return rep
    dc = check_double_construction(cb, reading)
    double = build_double(cb, reading)
    triple = double.triple()
    parts: dict = {"premise": premise, "double-construction": dc}
    if dc.verdict:
        parts["double-filippov-jacobi"] = check_filippov_jacobi(double.algebra)
        parts["double-metric"] = check_metric(double.metric)
        parts["manin-triple"] = check_manin_triple(triple)
        back = Scan("round-trip")
        recovered = bialgebra_from_manin(triple, check=False)
        back.add({}, as_array([0 if recovered == cb else 1]))
        parts["round-trip"] = back.report()
        parts["recovered-double-construction"] = check_double_construction(
            Cobracket(recovered.algebra, recovered.tensor), reading
        )
        rep = CheckReport.combine("theorem-equivalence", parts)
        rep.details["forward"] = all(
            parts[k].verdict for k in ("double-filippov-jacobi", "double-metric", "manin-triple")
        )
        rep.details["backward"] = parts["round-trip"].verdict and parts["recovered-double-construction"].verdict
        return rep
    manin = check_manin_triple(triple)
    probe = Scan("converse-probe")
    probe.add({}, as_array([1 if manin.verdict else 0]))
    parts["manin-triple"] = manin
    parts["converse-probe"] = probe.report()
    rep = CheckReport(
        name="theorem-equivalence",
        verdict=not manin.verdict,
        checks_run=sum(p.checks_run for p in parts.values()),
        counterexample=None if not manin.verdict else probe.report().counterexample,
        failures=1 if manin.verdict else 0,
        details=dict(parts),
    )
    rep.details["note"] = (
        f"forward direction skipped: double construction fails ({', '.join(dc.failing)})"
    )
    return rep
