"""Cobrackets, n-Lie bialgebras, operad matrices and the auxiliary maps.

A cobracket is stored as one array ``G`` of shape ``(d,) + (d,) * n`` with
``G[x, s1, ..., sn]`` the coefficient of ``e_s1 (x) ... (x) e_sn`` in
``gamma(e_x)``.  The transposed map defines the dual bracket: the
coefficient of ``f_x`` in ``[f_s1, ..., f_sn]`` is ``G[x, s1, ..., sn]``.

Tensor slots are written 1-based in docstrings and reports ("slot 1" is
the leftmost factor) and 0-based in code.  ``slot_i(M)`` means the
operator ``1 (x) ... (x) M (x) ... (x) 1`` with M in slot i.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from . import linalg
from .algebra import CheckReport, NLieAlgebra, Scan, check_filippov_jacobi
from .tensor import act_on_slot, as_array, canonical_tuples, is_zero, normalize, scalar, sort_sign, zeros

__all__ = [
    "Cobracket",
    "BialgebraReport",
    "OperadEntry",
    "OperadMatrix",
    "CENTROID_READINGS",
    "dual_bracket",
    "check_antisymmetry",
    "check_condition_i",
    "check_cocycle",
    "check_bialgebra",
    "check_pairing_identity",
    "dual_bialgebra",
    "build_operad_matrix",
    "check_cocycle_via_operad",
    "check_Ri_operad",
    "check_Cj_operad",
    "check_local_cocycle",
    "check_compatibility_sum",
    "check_centroid",
    "check_local_operad_map",
    "check_double_construction",
    "check_structure_constants",
    "cocycle_space",
    "solution_space",
    "random_candidates",
]

CENTROID_READINGS = ("all-slots", "first-slot")
DEFAULT_CENTROID_READING = "all-slots"


class Cobracket:
    """A linear map gamma: g -> (x)^n g given by its images of basis vectors.

    With ``antisymmetric=True`` (the default) every image must be fully
    antisymmetric; the constructor raises ``ValueError`` naming the first
    offending basis index and slot pair.  ``antisymmetric=False`` is the
    raw mode used for operad-condition experiments.
    """

    def __init__(self, algebra: NLieAlgebra, tensor, antisymmetric: bool = True, name: str = ""):
        n, d = algebra.arity, algebra.dim
        G = as_array(tensor)
        if G.shape != (d,) * (n + 1):
            raise ValueError(f"cobracket tensor must have shape {(d,) * (n + 1)}, got {G.shape}")
        self.algebra = algebra
        self.name = name
        self.antisymmetric = antisymmetric
        G.flags.writeable = False
        self._G = G
        if antisymmetric:
            bad = first_antisymmetry_violation(G)
            if bad is not None:
                x, a, b = bad
                raise ValueError(
                    f"gamma(e{x + 1}) is not antisymmetric in slots {a + 1} and {b + 1}"
                )

    @property
    def tensor(self) -> np.ndarray:
        return self._G

    @property
    def arity(self) -> int:
        return self.algebra.arity

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def image(self, x: int) -> np.ndarray:
        return self._G[x]

    def __call__(self, v) -> np.ndarray:
        return np.tensordot(as_array(v), self._G, axes=([0], [0]))

    @classmethod
    def zero(cls, algebra: NLieAlgebra, name: str = "") -> "Cobracket":
        return cls(algebra, zeros((algebra.dim,) * (algebra.arity + 1)), name=name)

    @classmethod
    def from_images(cls, algebra: NLieAlgebra, images: Mapping[int, object], antisymmetric: bool = True, name: str = "") -> "Cobracket":
        """Build from ``{basis index: rank-n tensor}``; missing images are 0."""
        d, n = algebra.dim, algebra.arity
        G = zeros((d,) * (n + 1))
        for x, t in images.items():
            t = as_array(t)
            if t.shape != (d,) * n:
                raise ValueError(f"image of e{x + 1} must have shape {(d,) * n}")
            G[x] = t
        return cls(algebra, G, antisymmetric=antisymmetric, name=name)

    @classmethod
    def from_wedges(cls, algebra: NLieAlgebra, wedges: Mapping[int, Mapping[tuple, object]], name: str = "") -> "Cobracket":
        """``{x: {increasing slot tuple: coeff}}`` expanded antisymmetrically.

        ``{3: {(0, 1, 2): 1}}`` is gamma(e4) = e1 ^ e2 ^ e3 (unnormalized
        wedge, so each of the 3! orderings carries coefficient +-1).
        """
        d, n = algebra.dim, algebra.arity
        G = zeros((d,) * (n + 1))
        for x, entries in wedges.items():
            for s, c in entries.items():
                s = tuple(s)
                if len(s) != n or any(s[a] >= s[a + 1] for a in range(n - 1)):
                    raise ValueError(f"wedge index {s} is not an increasing {n}-tuple")
                for perm in itertools.permutations(range(n)):
                    sg, _ = sort_sign(perm)
                    G[(x,) + tuple(s[p] for p in perm)] += sg * scalar(c)
        return cls(algebra, G, name=name)

    @classmethod
    def random(cls, algebra: NLieAlgebra, rng: random.Random, low: int = -2, high: int = 2, density: float = 1.0, name: str = "") -> "Cobracket":
        """Random antisymmetric cobracket: integer wedge coefficients in [low, high]."""
        d, n = algebra.dim, algebra.arity
        wedges = {}
        for x in range(d):
            entries = {}
            for s in canonical_tuples(d, n):
                c = rng.randint(low, high)
                if density < 1.0 and rng.random() >= density:
                    c = 0
                if c:
                    entries[s] = c
            wedges[x] = entries
        return cls.from_wedges(algebra, wedges, name=name)

    def wedge_coordinates(self) -> list:
        """Coefficients on (x, increasing s) in lexicographic order."""
        d, n = self.dim, self.arity
        return [self._G[(x,) + s] for x in range(d) for s in canonical_tuples(d, n)]

    def with_algebra(self, algebra: NLieAlgebra) -> "Cobracket":
        return Cobracket(algebra, self._G, antisymmetric=self.antisymmetric, name=self.name)

    def __add__(self, other: "Cobracket") -> "Cobracket":
        if other.algebra != self.algebra:
            raise ValueError("cobrackets over different algebras")
        both = self.antisymmetric and other.antisymmetric
        return Cobracket(self.algebra, self._G + other._G, antisymmetric=both)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cobracket):
            return NotImplemented
        return self.algebra == other.algebra and bool(np.all(self._G == other._G))

    def __hash__(self):
        return hash((hash(self.algebra), tuple(self._G.flat)))

    def __repr__(self) -> str:
        nz = int(np.count_nonzero(self._G != 0))
        return f"<Cobracket {self.name or '?'} over {self.algebra!r} nonzero={nz}>"


def first_antisymmetry_violation(G: np.ndarray) -> Optional[tuple[int, int, int]]:
    """(basis index, slot a, slot b) of the first failure, 0-based, or None."""
    n = G.ndim - 1
    for x in range(G.shape[0]):
        t = G[x]
        for a, b in itertools.combinations(range(n), 2):
            if not is_zero(t + np.swapaxes(t, a, b)):
                return x, a, b
    return None


def _as_antisymmetric(cb: Cobracket) -> bool:
    return cb.antisymmetric or first_antisymmetry_violation(cb.tensor) is None


def dual_bracket(cb: Cobracket) -> NLieAlgebra:
    """The n-Lie bracket candidate on the dual space, in the dual basis."""
    bad = first_antisymmetry_violation(cb.tensor)
    if bad is not None:
        x, a, b = bad
        raise ValueError(f"gamma(e{x + 1}) is not antisymmetric in slots {a + 1} and {b + 1}")
    n, d = cb.arity, cb.dim
    T = np.moveaxis(cb.tensor, 0, -1)
    label = f"dual({cb.name})" if cb.name else ""
    return NLieAlgebra.from_dense(n, d, T, name=label).canonical()


# -- small tensor helpers --------------------------------------------------

def _image_of_bracket(T: np.ndarray, G: np.ndarray, x: tuple) -> np.ndarray:
    """gamma([e_x1, ..., e_xn])."""
    return np.tensordot(T[tuple(x)], G, axes=([0], [0]))


def _adn(ad: np.ndarray, t: np.ndarray) -> np.ndarray:
    """ad^(n): the derivation extension of ad to (x)^n g."""
    out = zeros(t.shape)
    for slot in range(t.ndim):
        out = out + act_on_slot(ad, t, slot)
    return out


def _ad(T: np.ndarray, X: Sequence[int]) -> np.ndarray:
    s, srt = sort_sign(X)
    d = T.shape[-1]
    if s == 0:
        return zeros((d, d))
    return s * T[srt].T


def _hat(x: tuple, i: int) -> tuple:
    return x[:i] + x[i + 1:]


def _skip(name: str, reason: str) -> CheckReport:
    return CheckReport(name=name, verdict=False, details={"skipped": reason})


# -- residual generators ---------------------------------------------------
# Each yields (where, residual) over a sufficient tuple set, so the same
# code serves both the checks and the linear solution-space builders.

def _cocycle_residuals(cb: Cobracket) -> Iterator:
    """gamma([x]) - sum_i (-1)^(n-i) ad^(n)(x without x_i) gamma(x_i)."""
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    for x in canonical_tuples(d, n):
        res = _image_of_bracket(T, G, x)
        for i in range(n):
            res = res - (-1) ** (n - 1 - i) * _adn(_ad(T, _hat(x, i)), G[x[i]])
        yield {"x": x}, res


def _row_residuals(cb: Cobracket, row: int) -> Iterator:
    """gamma([x]) - sum_j (-1)^(n-j) slot_row(ad(x without x_j)) gamma(x_j)."""
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    for x in canonical_tuples(d, n):
        res = _image_of_bracket(T, G, x)
        for j in range(n):
            res = res - (-1) ** (n - 1 - j) * act_on_slot(_ad(T, _hat(x, j)), G[x[j]], row)
        yield {"x": x}, res


def _column_residuals(cb: Cobracket, col: int) -> Iterator:
    """gamma([x]) - sum_i (-1)^(n-col) slot_i(ad(x without x_col)) gamma(x_col).

    Not skew in x, so every ordered tuple is visited.
    """
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    for x in itertools.product(range(d), repeat=n):
        ad = _ad(T, _hat(x, col))
        res = _image_of_bracket(T, G, x) - (-1) ** (n - 1 - col) * _adn(ad, G[x[col]])
        yield {"x": x}, res


def _centroid_residuals(cb: Cobracket, reading: str) -> Iterator:
    """gamma([x1, ..., xn]) - [gamma(x1), x2, ..., xn].

    ``[z1 (x) ... (x) zn, x2, ..., xn]`` is read as
    ``(-1)^(n-1) ad(x2, ..., xn)`` acting on every slot ("all-slots") or on
    slot 1 only ("first-slot").  Skew in x2..xn; x1 ranges freely.
    """
    if reading not in CENTROID_READINGS:
        raise ValueError(f"reading must be one of {CENTROID_READINGS}")
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    sign = (-1) ** (n - 1)
    for x1 in range(d):
        for rest in canonical_tuples(d, n - 1):
            ad = _ad(T, rest)
            if reading == "all-slots":
                rhs = _adn(ad, G[x1])
            else:
                rhs = act_on_slot(ad, G[x1], 0)
            res = _image_of_bracket(T, G, (x1,) + rest) - sign * rhs
            yield {"x": (x1,) + rest}, res


def _last_slot_residuals(cb: Cobracket) -> Iterator:
    """(slot_j + slot_n)(ad(x2, ..., xn)) gamma(x1) for j = 1..n-1."""
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    for x1 in range(d):
        for rest in canonical_tuples(d, n - 1):
            ad = _ad(T, rest)
            last = act_on_slot(ad, G[x1], n - 1)
            for j in range(n - 1):
                res = act_on_slot(ad, G[x1], j) + last
                yield {"x": (x1,) + rest, "j": j + 1}, res


def _cross_slot_residuals(cb: Cobracket) -> Iterator:
    """slot_i(ad(x2..xn)) gamma(x1) + slot_k(ad(x2..x(n-1), x1)) gamma(xn), i != k.

    Skew in the middle block x2..x(n-1); x1 and xn range freely.
    """
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    for x1 in range(d):
        for mid in canonical_tuples(d, n - 2):
            for xn in range(d):
                a = _ad(T, mid + (xn,))
                b = _ad(T, mid + (x1,))
                left = [act_on_slot(a, G[x1], i) for i in range(n)]
                right = [act_on_slot(b, G[xn], k) for k in range(n)]
                for i in range(n):
                    for k in range(n):
                        if i != k:
                            yield {"x": (x1,) + mid + (xn,), "i": i + 1, "k": k + 1}, left[i] + right[k]


def _compatibility_residuals(alg: NLieAlgebra, gammas: Sequence[Cobracket]) -> Iterator:
    T = alg.tensor
    n, d = alg.arity, alg.dim
    for x in canonical_tuples(d, n):
        res = zeros((d,) * n)
        for j in range(n):
            ad = _ad(T, _hat(x, j))
            sign = (-1) ** (n - 1 - j)
            for i, g in enumerate(gammas):
                t = g.tensor[x[j]]
                for k in range(n):
                    if k != i:
                        res = res + sign * act_on_slot(ad, t, k)
        yield {"x": x}, res


def _scan(name: str, residuals: Iterable) -> CheckReport:
    scan = Scan(name)
    for where, res in residuals:
        scan.add(where, res)
    return scan.report()


# -- conditions (i) and (ii) -----------------------------------------------

def check_antisymmetry(cb: Cobracket) -> CheckReport:
    scan = Scan("antisymmetry")
    G = cb.tensor
    for x in range(cb.dim):
        t = G[x]
        for a, b in itertools.combinations(range(cb.arity), 2):
            scan.add({"source": (x,), "slots": [a + 1, b + 1]}, t + np.swapaxes(t, a, b))
    return scan.report()


def check_condition_i(cb: Cobracket) -> CheckReport:
    """Antisymmetric images and the Filippov-Jacobi identity for the dual bracket."""
    anti = check_antisymmetry(cb)
    if not anti.verdict:
        fji = _skip("dual-filippov-jacobi", "images are not antisymmetric")
    else:
        fji = check_filippov_jacobi(dual_bracket(cb))
        fji.name = "dual-filippov-jacobi"
    return CheckReport.combine("condition-i", {"antisymmetry": anti, "dual-filippov-jacobi": fji})


def check_cocycle(cb: Cobracket) -> CheckReport:
    """The 1-cocycle identity for gamma with values in the n-th tensor power."""
    return _scan("condition-ii", _cocycle_residuals(cb))


class BialgebraReport(CheckReport):
    """A CheckReport whose verdict is the conjunction of named required parts."""

    def __init__(self, name: str, parts: Mapping[str, CheckReport], required: Sequence[str], **extra):
        base = CheckReport.combine(name, {k: parts[k] for k in required})
        details = dict(parts)
        details.update(extra)
        super().__init__(
            name=name,
            verdict=base.verdict,
            checks_run=sum(p.checks_run for p in parts.values()),
            counterexample=base.counterexample,
            failures=base.failures,
            details=details,
        )
        self.required = tuple(required)
        self.parts = dict(parts)

    @property
    def condition_i(self) -> Optional[CheckReport]:
        return self.parts.get("condition-i")

    @property
    def condition_ii(self) -> Optional[CheckReport]:
        return self.parts.get("condition-ii")

    @property
    def extras(self) -> dict:
        return {k: v for k, v in self.parts.items() if k not in self.required}

    @property
    def failing(self) -> list[str]:
        return [k for k in self.required if not self.parts[k].verdict]

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["required"] = list(self.required)
        out["failing"] = self.failing
        return out


def check_bialgebra(cb: Cobracket) -> BialgebraReport:
    return BialgebraReport(
        "n-lie-bialgebra",
        {"condition-i": check_condition_i(cb), "condition-ii": check_cocycle(cb)},
        required=("condition-i", "condition-ii"),
    )


def _pairing_values(cb: Cobracket, x: tuple, s: tuple) -> tuple:
    """(direct, equ, equ2) residuals for <xi_s, .> at the tuple x.

    direct: the s-coefficient of the cocycle residual;
    equ:  <[xi]_*, [x]> - sum_ij (-1)^(i+j-1) <[xi without xi_i, ad*(x without x_j) xi_i]_*, x_j>;
    equ2: <[xi]_*, [x]> - sum_ij (-1)^(i+j) <ad*(x without x_j) xi_i, ad~*(xi without xi_i) x_j>.
    """
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    lhs = sum(T[x][w] * G[(w,) + s] for w in range(d))
    equ = lhs
    equ2 = lhs
    for i in range(n):
        s_hat = _hat(s, i)
        for j in range(n):
            adj = _ad(T, _hat(x, j))
            # ad*(X) f_si = -sum_k ad[si, k] f_k
            star = [-adj[s[i], k] for k in range(d)]
            # <[xi_hat, f_k]_*, x_j> = G[x_j, s_hat, k]
            br = sum(star[k] * G[(x[j],) + s_hat + (k,)] for k in range(d))
            equ -= (-1) ** (i + j + 1) * br  # 1-based exponent i+j-1 == 0-based i+j+1
            # ad~*(xi_hat) x_j = -sum_k G[x_j, s_hat, k] e_k
            tilde = [-G[(x[j],) + s_hat + (k,)] for k in range(d)]
            pairing = sum(star[k] * tilde[k] for k in range(d))
            equ2 -= (-1) ** (i + j) * pairing
    return scalar(equ), scalar(equ2)


def check_pairing_identity(cb: Cobracket) -> CheckReport:
    """The two pairing forms of the cocycle identity against the direct one.

    Pass iff, for every basis tuple x and dual-basis tuple xi, all three
    residuals vanish together or fail together.  Both sides of every form
    are skew in x; in xi they are skew when gamma is antisymmetric, and
    otherwise every ordered xi is visited.
    """
    n, d = cb.arity, cb.dim
    anti = _as_antisymmetric(cb)
    xis = canonical_tuples(d, n) if anti else list(itertools.product(range(d), repeat=n))
    direct = Scan("direct")
    equ = Scan("pairing-equ")
    equ2 = Scan("pairing-equ2")
    agree = Scan("agreement")
    for where, res in _cocycle_residuals(cb):
        x = where["x"]
        for s in xis:
            r0 = scalar(res[s])
            r1, r2 = _pairing_values(cb, x, s)
            w = {"x": x, "xi": s}
            direct.add(w, as_array(r0))
            equ.add(w, as_array(r1))
            equ2.add(w, as_array(r2))
            zs = {r0 == 0, r1 == 0, r2 == 0}
            agree.add(w, as_array([r0, r1, r2]) if len(zs) > 1 else zeros(3))
    rep = agree.report(
        direct=direct.report(), **{"pairing-equ": equ.report(), "pairing-equ2": equ2.report()}
    )
    rep.name = "pairing-agreement"
    if not anti:
        rep.details["note"] = "images not antisymmetric; all ordered dual tuples visited"
    return rep


def dual_bialgebra(cb: Cobracket) -> Cobracket:
    """The cobracket on the dual algebra given by the transposed bracket of g."""
    report = check_bialgebra(cb)
    if not report.verdict:
        raise ValueError(f"not an n-Lie bialgebra (failing: {', '.join(report.failing)})")
    dual_alg = dual_bracket(cb)
    G = np.moveaxis(cb.algebra.tensor, -1, 0)
    label = f"dual({cb.name})" if cb.name else ""
    return Cobracket(dual_alg, G, name=label)


# -- operad matrices -------------------------------------------------------

@dataclass(frozen=True)
class OperadEntry:
    """coef * slot_(slot+1)(ad) on the n-th tensor power."""

    coef: int
    slot: int
    ad: np.ndarray

    def apply(self, t: np.ndarray) -> np.ndarray:
        return self.coef * act_on_slot(self.ad, t, self.slot)

    def operator(self, n: int) -> np.ndarray:
        d = self.ad.shape[0]
        eye = np.eye(d, dtype=int).astype(object)
        out = np.array([[1]], dtype=object)
        for s in range(n):
            out = np.kron(out, self.ad if s == self.slot else eye)
        return normalize(self.coef * out)


class OperadMatrix:
    """The n x n grid h[i][j] = (-1)^(n-j) slot_i(ad(x without x_j)).

    Entries outside a restriction are ``None`` (zero operators).
    """

    def __init__(self, n: int, entries: list[list[Optional[OperadEntry]]]):
        self.n = n
        self.entries = entries

    def entry(self, i: int, j: int) -> Optional[OperadEntry]:
        return self.entries[i][j]

    def apply(self, column: Sequence[np.ndarray]) -> np.ndarray:
        """(1, ..., 1) A (t_1, ..., t_n)^T."""
        if len(column) != self.n:
            raise ValueError(f"operad matrix needs {self.n} tensors")
        out = zeros(np.asarray(column[0]).shape)
        for i in range(self.n):
            for j in range(self.n):
                e = self.entries[i][j]
                if e is not None:
                    out = out + e.apply(column[j])
        return out

    def operator(self, i: int, j: int, d: int) -> np.ndarray:
        e = self.entries[i][j]
        if e is None:
            return zeros((d ** self.n, d ** self.n))
        return e.operator(self.n)

    def restricted_to_row(self, row: int) -> "OperadMatrix":
        return OperadMatrix(self.n, [[e if i == row else None for e in r] for i, r in enumerate(self.entries)])

    def restricted_to_column(self, col: int) -> "OperadMatrix":
        return OperadMatrix(self.n, [[e if j == col else None for j, e in enumerate(r)] for r in self.entries])

    def __add__(self, other: "OperadMatrix") -> "OperadMatrix":
        """Entrywise sum of grids with disjoint supports (row/column pieces)."""
        grid = []
        for r1, r2 in zip(self.entries, other.entries):
            row = []
            for a, b in zip(r1, r2):
                if a is not None and b is not None:
                    raise ValueError("overlapping operad entries")
                row.append(a if a is not None else b)
            grid.append(row)
        return OperadMatrix(self.n, grid)

    def same_operators(self, other: "OperadMatrix", d: int) -> bool:
        return all(
            bool(np.all(self.operator(i, j, d) == other.operator(i, j, d)))
            for i in range(self.n)
            for j in range(self.n)
        )


def build_operad_matrix(alg: NLieAlgebra, x: Sequence) -> OperadMatrix:
    """Operad matrix at n arguments: basis indices or d-vectors."""
    n = alg.arity
    if len(x) != n:
        raise ValueError(f"operad matrix needs {n} arguments, got {len(x)}")
    if all(isinstance(v, (int, np.integer)) for v in x):
        ads = [_ad(alg.tensor, _hat(tuple(int(v) for v in x), j)) for j in range(n)]
    else:
        vecs = [as_array(v) for v in x]
        ads = [alg.ad(*_hat(tuple(vecs), j)) for j in range(n)]
    grid = [
        [OperadEntry((-1) ** (n - 1 - j), i, normalize(ads[j])) for j in range(n)]
        for i in range(n)
    ]
    return OperadMatrix(n, grid)


def check_cocycle_via_operad(cb: Cobracket) -> CheckReport:
    """gamma([x]) = (1..1) A (gamma(x_1), ..., gamma(x_n))^T via explicit
    Kronecker operators on the flattened tensor power."""
    T, G = cb.algebra.tensor, cb.tensor
    n, d = cb.arity, cb.dim
    scan = Scan("operad-cocycle")
    flat = [G[x].reshape(-1) for x in range(d)]
    for x in canonical_tuples(d, n):
        A = build_operad_matrix(cb.algebra, x)
        rhs = zeros(d ** n)
        for j in range(n):
            if is_zero(A.entries[0][j].ad):
                continue
            for i in range(n):
                rhs = rhs + A.operator(i, j, d).dot(flat[x[j]])
        lhs = _image_of_bracket(T, G, x).reshape(-1)
        scan.add({"x": x}, (lhs - rhs).reshape((d,) * n))
    return scan.report()


def _index_check(k: int, n: int, what: str) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"{what} must lie in 1..{n}, got {k}")


def check_Ri_operad(cb: Cobracket, i: int) -> BialgebraReport:
    """Condition (i) plus gamma([x]) = (1..1) A_Ri gamma(x); ``i`` is 1-based."""
    _index_check(i, cb.arity, "row index")
    eq = _scan(f"R{i}-equation", _row_residuals(cb, i - 1))
    return BialgebraReport(
        f"R{i}-operad", {"condition-i": check_condition_i(cb), f"R{i}-equation": eq},
        required=("condition-i", f"R{i}-equation"),
    )


def check_Cj_operad(cb: Cobracket, j: int) -> BialgebraReport:
    """Condition (i) plus gamma([x]) = (1..1) A_Cj gamma(x); ``j`` is 1-based."""
    _index_check(j, cb.arity, "column index")
    eq = _scan(f"C{j}-equation", _column_residuals(cb, j - 1))
    return BialgebraReport(
        f"C{j}-operad", {"condition-i": check_condition_i(cb), f"C{j}-equation": eq},
        required=("condition-i", f"C{j}-equation"),
    )


def _components(alg: NLieAlgebra, gammas: Sequence[Cobracket]) -> list[Cobracket]:
    gammas = list(gammas)
    if len(gammas) != alg.arity:
        raise ValueError(f"expected {alg.arity} components, got {len(gammas)}")
    for g in gammas:
        if g.algebra != alg:
            raise ValueError("component defined over a different algebra")
    return gammas


def _raw_sum(alg: NLieAlgebra, gammas: Sequence[Cobracket]) -> Cobracket:
    total = sum((g.tensor for g in gammas[1:]), gammas[0].tensor)
    return Cobracket(alg, total, antisymmetric=False)


def check_local_cocycle(alg: NLieAlgebra, gammas: Sequence[Cobracket]) -> BialgebraReport:
    """Each gamma_i satisfies the R_i equation; their sum satisfies condition (i)."""
    gammas = _components(alg, gammas)
    parts = {}
    for i, g in enumerate(gammas, start=1):
        parts[f"R{i}-equation"] = _scan(f"R{i}-equation", _row_residuals(g, i - 1))
    parts["sum-condition-i"] = check_condition_i(_raw_sum(alg, gammas))
    return BialgebraReport("local-cocycle", parts, required=tuple(parts))


def check_compatibility_sum(alg: NLieAlgebra, gammas: Sequence[Cobracket]) -> CheckReport:
    """sum over i != k and j of (-1)^(n-j) slot_k(ad(x without x_j)) gamma_i(x_j) = 0."""
    gammas = _components(alg, gammas)
    return _scan("compatibility-sum", _compatibility_residuals(alg, gammas))


def check_centroid(cb: Cobracket, reading: str = DEFAULT_CENTROID_READING) -> CheckReport:
    rep = _scan("centroid", _centroid_residuals(cb, reading))
    rep.details["reading"] = reading
    return rep


def check_local_operad_map(cb: Cobracket) -> CheckReport:
    return CheckReport.combine(
        "local-operad-map",
        {"last-slot": _scan("last-slot", _last_slot_residuals(cb)), "cross-slot": _scan("cross-slot", _cross_slot_residuals(cb))},
    )


def check_double_construction(cb: Cobracket, reading: str = DEFAULT_CENTROID_READING) -> BialgebraReport:
    """R_1-operad bialgebra whose cobracket is a centroid and a local operad map."""
    return BialgebraReport(
        "double-construction",
        {
            "R1-operad": check_Ri_operad(cb, 1),
            "centroid": check_centroid(cb, reading),
            "local-operad-map": check_local_operad_map(cb),
        },
        required=("R1-operad", "centroid", "local-operad-map"),
    )


# -- structure-constant forms ----------------------------------------------
# Each scalar evaluator returns the scalars that must vanish for one choice
# of the free indices.  The tensor slot indices s_1..s_n (and k) are summed
# out, so every form yields one or two scalars per free tuple.

def scalar_centroid(T: np.ndarray, C: np.ndarray, a: tuple) -> list:
    n = len(a)
    d = T.shape[-1]
    total = 0
    for s in itertools.product(range(d), repeat=n):
        for k in range(d):
            term = T[a][k] * C[(k,) + s]
            for i in range(n):
                term -= (-1) ** (n - 1) * T[a[1:] + (k,)][s[i]] * C[(a[0],) + _hat(s, i) + (k,)]
            total += term
    return [scalar(total)]


def scalar_last_slot(T: np.ndarray, C: np.ndarray, a: tuple, j: int) -> list:
    """``j`` is 0-based (j = 0..n-2)."""
    n = len(a)
    d = T.shape[-1]
    left = right = 0
    for s in itertools.product(range(d), repeat=n):
        c = C[(a[0],) + s]
        if not c:
            continue
        for k in range(d):
            left += T[a[1:] + (s[j],)][k] * c
            right += T[a[1:] + (s[n - 1],)][k] * c
    return [scalar(left), scalar(right)]


def scalar_cross_slot(T: np.ndarray, C: np.ndarray, a: tuple, i: int, k: int) -> list:
    """``i``, ``k`` are 0-based with i != k."""
    n = len(a)
    d = T.shape[-1]
    left = right = 0
    for s in itertools.product(range(d), repeat=n):
        c1 = C[(a[0],) + s]
        c2 = C[(a[n - 1],) + s]
        for j in range(d):
            if c1:
                left += T[a[1:] + (s[i],)][j] * c1
            if c2:
                right += T[a[:n - 1] + (s[k],)][j] * c2
    return [scalar(left), scalar(right)]


SCALAR_FORMS = {"centroid": scalar_centroid, "last-slot": scalar_last_slot, "cross-slot": scalar_cross_slot}


def check_structure_constants(
    cb: Cobracket,
    forms: Optional[Mapping[str, Callable]] = None,
    reading: str = DEFAULT_CENTROID_READING,
) -> CheckReport:
    """The three structure-constant identities, cross-checked per index tuple.

    For each identity the scalar form is evaluated with the structure
    constants T and C, and the tensor-level check (centroid, last-slot, cross-slot) is
    evaluated on the same free indices.  A tuple where exactly one of the
    two vanishes is a transcription flag; the first such tuple is reported.
    ``forms`` may override any evaluator (used to test the flag itself).
    The verdict is that of the scalar forms; ``flags`` in the details
    lists every identity whose verdicts disagree somewhere.
    """
    ev = dict(SCALAR_FORMS)
    if forms:
        unknown = set(forms) - set(SCALAR_FORMS)
        if unknown:
            raise ValueError(f"unknown evaluators: {sorted(unknown)}")
        ev.update(forms)
    T, C = cb.algebra.tensor, cb.tensor
    n = cb.arity

    def params(name: str, where: dict) -> tuple:
        if name == "last-slot":
            return (where["j"] - 1,)
        if name == "cross-slot":
            return (where["i"] - 1, where["k"] - 1)
        return ()

    tensor_level = {
        "centroid": _centroid_residuals(cb, reading),
        "last-slot": _last_slot_residuals(cb),
        "cross-slot": _cross_slot_residuals(cb),
    }
    parts: dict = {}
    flags = []
    for name, gen in tensor_level.items():
        scalar_scan = Scan(f"{name}-scalar")
        tensor_scan = Scan(f"{name}-tensor")
        agree = Scan(f"{name}-agreement")
        for where, res in gen:
            a = where["x"]
            vals = as_array(ev[name](T, C, a, *params(name, where)))
            ok_scalar = scalar_scan.add(where, vals)
            ok_tensor = tensor_scan.add(where, res)
            if ok_scalar == ok_tensor:
                agree.add(where, zeros(1))
            else:
                agree.add(where, vals if not ok_scalar else res)
        ag = agree.report()
        if not ag.verdict:
            flags.append({"identity": name, "first_disagreement": ag.counterexample.to_dict()["where"]})
        parts[name] = CheckReport.combine(
            name,
            {"scalar": scalar_scan.report(), "tensor": tensor_scan.report()},
        )
        parts[name].verdict = scalar_scan.first is None
        parts[name].counterexample = scalar_scan.first
        parts[name].details["agreement"] = ag
    report = CheckReport.combine("structure-constants", parts)
    report.details["flags"] = flags
    report.details["agree"] = not flags
    if n == 2:
        report.details["note"] = "cross-slot middle block is empty for n = 2"
    return report


# -- linear solution spaces ------------------------------------------------

def solution_space(alg: NLieAlgebra, residuals: Callable[[Cobracket], Iterable]) -> list[Cobracket]:
    """Basis of antisymmetric cobrackets whose residuals all vanish.

    ``residuals(cb)`` must be linear in the cobracket; it is sampled on the
    wedge basis and the kernel is found by exact elimination.
    """
    d, n = alg.dim, alg.arity
    coords = [(x, s) for x in range(d) for s in canonical_tuples(d, n)]
    columns = []
    for x, s in coords:
        unit = Cobracket.from_wedges(alg, {x: {s: 1}})
        col = []
        for _, res in residuals(unit):
            col.extend(np.asarray(res, dtype=object).reshape(-1))
        columns.append(col)
    nrows = len(columns[0]) if columns else 0
    rows = []
    for r in range(nrows):
        row = {c: scalar(columns[c][r]) for c in range(len(coords)) if columns[c][r] != 0}
        if row:
            rows.append(row)
    basis = []
    for vec in linalg.nullspace_sparse(rows, len(coords)):
        wedges: dict = {}
        for (x, s), v in zip(coords, vec):
            if v:
                wedges.setdefault(x, {})[s] = v
        basis.append(Cobracket.from_wedges(alg, wedges))
    return basis


def cocycle_space(alg: NLieAlgebra) -> list[Cobracket]:
    """Basis of the antisymmetric solutions of the cocycle identity."""
    return solution_space(alg, _cocycle_residuals)


def double_construction_space(alg: NLieAlgebra, reading: str = DEFAULT_CENTROID_READING) -> list[Cobracket]:
    """Antisymmetric solutions of the linear double-construction equations
    (R_1 equation, centroid, last-slot, cross-slot).  Condition (i) is quadratic and
    must be checked separately on each candidate."""

    def residuals(cb):
        yield from _row_residuals(cb, 0)
        yield from _centroid_residuals(cb, reading)
        yield from _last_slot_residuals(cb)
        yield from _cross_slot_residuals(cb)

    return solution_space(alg, residuals)


def combine(alg: NLieAlgebra, basis: Sequence[Cobracket], coeffs: Sequence[int], name: str = "") -> Cobracket:
    G = zeros((alg.dim,) * (alg.arity + 1))
    for c, b in zip(coeffs, basis):
        G = G + c * b.tensor
    return Cobracket(alg, G, name=name)


def random_candidates(alg: NLieAlgebra, count: int, seed: int) -> list[Cobracket]:
    """Seeded antisymmetric candidates: alternately a random cobracket with
    entries in {-2..2} and a random integer combination of the cocycle basis
    (so both verdicts occur)."""
    rng = random.Random(seed)
    basis = cocycle_space(alg)
    out = []
    for t in range(count):
        if t % 2 == 0 or not basis:
            out.append(Cobracket.random(alg, rng, density=0.5, name=f"random-{seed}-{t}"))
        else:
            coeffs = [rng.randint(-2, 2) for _ in basis]
            out.append(combine(alg, basis, coeffs, name=f"cocycle-{seed}-{t}"))
    return out
