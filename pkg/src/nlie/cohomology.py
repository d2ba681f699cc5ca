"""Representations, cochains and the coboundary operator.

A representation stores, for each increasing (n-1)-tuple of basis indices,
a sparse m x m matrix ``{row: {col: value}}``.  Cochains of degree k take
k-1 wedge blocks (each an increasing (n-1)-tuple, addressed by its position
in ``canonical_tuples(d, n-1)``) plus one free basis vector z, so their
values form an array of shape ``(N,) * (k-1) + (d, m)`` with N = C(d, n-1).
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Mapping, Optional

import numpy as np

from . import linalg
from .algebra import CheckReport, NLieAlgebra, Scan, check_filippov_jacobi
from .tensor import as_array, canonical_tuples, is_zero, normalize, scalar, sort_sign, zeros

__all__ = [
    "Representation",
    "Cochain",
    "adjoint_rep",
    "coadjoint_rep",
    "tensor_power_rep",
    "zero_rep",
    "check_representation",
    "coboundary",
    "is_cocycle",
    "coboundary_matrix",
    "solve_coboundary",
    "cohomology",
    "nontrivial_cocycle",
    "INSERTIONS",
]

INSERTIONS = ("in-place", "front")
DEFAULT_INSERTION = "in-place"


# -- sparse matrices as {row: {col: value}} -------------------------------

def _sm_from_dense(M) -> dict:
    M = np.asarray(M, dtype=object)
    out = {}
    for p in range(M.shape[0]):
        row = {q: scalar(M[p, q]) for q in range(M.shape[1]) if M[p, q] != 0}
        if row:
            out[p] = row
    return out


def _sm_to_dense(A: Mapping, m: int) -> np.ndarray:
    out = zeros((m, m))
    for p, row in A.items():
        for q, v in row.items():
            out[p, q] = v
    return out


def _sm_axpy(acc: dict, A: Mapping, c=1) -> None:
    """acc += c * A (in place)."""
    if not c:
        return
    for p, row in A.items():
        arow = acc.setdefault(p, {})
        for q, v in row.items():
            nv = arow.get(q, 0) + c * v
            if nv:
                arow[q] = nv
            else:
                arow.pop(q, None)
        if not arow:
            acc.pop(p, None)


def _sm_mul(A: Mapping, B: Mapping) -> dict:
    out: dict = {}
    for p, row in A.items():
        orow: dict = {}
        for q, a in row.items():
            brow = B.get(q)
            if not brow:
                continue
            for r, b in brow.items():
                orow[r] = orow.get(r, 0) + a * b
        orow = {r: v for r, v in orow.items() if v}
        if orow:
            out[p] = orow
    return out


def _sm_first_nonzero(A: Mapping, m: int):
    """Dense residual matrix if A is nonzero, else None."""
    if any(row for row in A.values()):
        return _sm_to_dense(A, m)
    return None


class Representation:
    """A linear map rho from (n-1)-wedges of an n-Lie algebra to gl(m).

    ``rho`` maps increasing 0-based (n-1)-tuples to m x m matrices (dense
    arrays or sparse ``{row: {col: value}}`` dicts); omitted tuples map to
    zero.  ``verified`` records whether the construction was certified
    when it was built (for instance, the adjoint of an algebra failing FJI
    is returned with ``verified=False``).
    """

    def __init__(self, algebra: NLieAlgebra, module_dim: int, rho: Mapping, name: str = "", verified: Optional[bool] = None):
        if module_dim < 1:
            raise ValueError("module dimension must be positive")
        self.algebra = algebra
        self.module_dim = module_dim
        self.name = name
        self.verified = verified
        n, d = algebra.arity, algebra.dim
        self.blocks = canonical_tuples(d, n - 1)
        self.block_index = {b: i for i, b in enumerate(self.blocks)}
        self._rho: list[dict] = [{} for _ in self.blocks]
        for key, mat in rho.items():
            key = tuple(key)
            if key not in self.block_index:
                raise ValueError(f"rho key {key} is not an increasing {n - 1}-tuple below {d}")
            if isinstance(mat, Mapping):
                sm = {p: {q: scalar(v) for q, v in row.items() if v} for p, row in mat.items()}
                sm = {p: r for p, r in sm.items() if r}
                for p, row in sm.items():
                    if not 0 <= p < module_dim or any(not 0 <= q < module_dim for q in row):
                        raise ValueError(f"rho{key} has an entry outside {module_dim} x {module_dim}")
            else:
                M = np.asarray(mat, dtype=object)
                if M.shape != (module_dim, module_dim):
                    raise ValueError(f"rho{key} has shape {M.shape}, expected {(module_dim, module_dim)}")
                sm = _sm_from_dense(M)
            self._rho[self.block_index[key]] = sm

    @property
    def arity(self) -> int:
        return self.algebra.arity

    def sparse(self, block: int) -> dict:
        """Sparse matrix for the block with position ``block``."""
        return self._rho[block]

    def matrix(self, idx) -> np.ndarray:
        """Dense matrix of rho on an arbitrary basis tuple (skew extension)."""
        s, srt = sort_sign(idx)
        if s == 0:
            return zeros((self.module_dim, self.module_dim))
        return s * _sm_to_dense(self._rho[self.block_index[srt]], self.module_dim)

    def signed(self, idx) -> tuple[int, dict]:
        s, srt = sort_sign(idx)
        if s == 0:
            return 0, {}
        return s, self._rho[self.block_index[srt]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.module_dim == other.module_dim
            and self._rho == other._rho
        )

    def __repr__(self) -> str:
        return f"<Representation {self.name or '?'} of {self.algebra!r} on F^{self.module_dim}>"


def adjoint_rep(alg: NLieAlgebra) -> Representation:
    T = alg.tensor
    rho = {b: T[b].T for b in canonical_tuples(alg.dim, alg.arity - 1)}
    ok = check_filippov_jacobi(alg).verdict
    return Representation(alg, alg.dim, rho, name="adjoint", verified=ok)


def coadjoint_rep(alg: NLieAlgebra) -> Representation:
    """rho*(X) = -ad(X)^T acting on coordinates in the dual basis."""
    T = alg.tensor
    rho = {b: normalize(-T[b]) for b in canonical_tuples(alg.dim, alg.arity - 1)}
    ok = check_filippov_jacobi(alg).verdict
    return Representation(alg, alg.dim, rho, name="coadjoint", verified=ok)


def zero_rep(alg: NLieAlgebra, module_dim: int = 1) -> Representation:
    return Representation(alg, module_dim, {}, name="zero", verified=True)


def tensor_power_rep(alg: NLieAlgebra, p: int) -> Representation:
    """ad^(p): sum of ad(X) acting on each of the p tensor slots.

    Basis of the p-th tensor power is flattened row-major, so the
    coordinate of e_{s1} (x) ... (x) e_{sp} sits at sum s_i d^(p-i).
    """
    if p < 1:
        raise ValueError("tensor power must be at least 1")
    d = alg.dim
    T = alg.tensor
    rho = {}
    strides = [d ** (p - 1 - s) for s in range(p)]
    others = list(itertools.product(range(d), repeat=p - 1))
    for b in canonical_tuples(d, alg.arity - 1):
        ad = T[b].T  # ad[r, c] = coefficient of e_r in [X, e_c]
        nz = [(r, c, scalar(ad[r, c])) for r in range(d) for c in range(d) if ad[r, c] != 0]
        sm: dict = {}
        for slot in range(p):
            for rest in others:
                base = sum(
                    v * strides[s if s < slot else s + 1] for s, v in enumerate(rest)
                )
                for r, c, val in nz:
                    row = base + r * strides[slot]
                    col = base + c * strides[slot]
                    acc = sm.setdefault(row, {})
                    acc[col] = acc.get(col, 0) + val
        sm = {r: {c: v for c, v in row.items() if v} for r, row in sm.items()}
        rho[b] = {r: row for r, row in sm.items() if row}
    ok = check_filippov_jacobi(alg).verdict
    return Representation(alg, d ** p, rho, name=f"tensor-power-{p}", verified=ok)


def check_representation(rep: Representation) -> CheckReport:
    """Both defining identities of a representation on basis tuples.

    The first identity is checked for increasing x (n-tuple) and increasing
    y (n-2)-tuple; the second for all pairs of increasing (n-1)-tuples.
    """
    alg = rep.algebra
    n, d, m = alg.arity, alg.dim, rep.module_dim
    T = alg.tensor

    first = Scan("representation-bracket")
    for x in canonical_tuples(d, n):
        for y in canonical_tuples(d, n - 2):
            acc: dict = {}
            for w in range(d):
                c = T[x][w]
                if c:
                    s, M = rep.signed((w,) + y)
                    _sm_axpy(acc, M, c * s)
            for i in range(n):
                s1, A = rep.signed(x[:i] + x[i + 1:])
                s2, B = rep.signed((x[i],) + y)
                if s1 and s2:
                    _sm_axpy(acc, _sm_mul(A, B), -((-1) ** (n - 1 - i)) * s1 * s2)
            res = _sm_first_nonzero(acc, m)
            first.add({"x": x, "y": y}, zeros((m, m)) if res is None else res)

    second = Scan("representation-commutator")
    blocks = rep.blocks
    for bx, X in enumerate(blocks):
        RX = rep.sparse(bx)
        for by, Y in enumerate(blocks):
            RY = rep.sparse(by)
            acc = _sm_mul(RX, RY)
            _sm_axpy(acc, _sm_mul(RY, RX), -1)
            TX = T[X]
            for i in range(n - 1):
                for w in range(d):
                    c = TX[Y[i]][w]
                    if c:
                        s, M = rep.signed(Y[:i] + (w,) + Y[i + 1:])
                        _sm_axpy(acc, M, -c * s)
            res = _sm_first_nonzero(acc, m)
            second.add({"x": X, "y": Y}, zeros((m, m)) if res is None else res)

    return CheckReport.combine(
        "representation",
        {"bracket-identity": first.report(), "commutator-identity": second.report()},
    )


class Cochain:
    """A k-cochain with values in the module of ``rep``."""

    def __init__(self, rep: Representation, degree: int, values):
        if degree < 1:
            raise ValueError("cochain degree must be at least 1")
        self.rep = rep
        self.degree = degree
        vals = as_array(values)
        if vals.shape != self.shape_for(rep, degree):
            raise ValueError(
                f"degree-{degree} cochain needs shape {self.shape_for(rep, degree)}, got {vals.shape}"
            )
        vals.flags.writeable = False
        self.values = vals

    @staticmethod
    def shape_for(rep: Representation, degree: int) -> tuple:
        N = len(rep.blocks)
        return (N,) * (degree - 1) + (rep.algebra.dim, rep.module_dim)

    @classmethod
    def zero(cls, rep: Representation, degree: int) -> "Cochain":
        return cls(rep, degree, zeros(cls.shape_for(rep, degree)))

    @classmethod
    def random(cls, rep: Representation, degree: int, rng: random.Random, low: int = -3, high: int = 3) -> "Cochain":
        shape = cls.shape_for(rep, degree)
        size = int(np.prod(shape))
        vals = np.array([rng.randint(low, high) for _ in range(size)], dtype=object).reshape(shape)
        return cls(rep, degree, vals)

    @classmethod
    def from_vector(cls, rep: Representation, degree: int, vec) -> "Cochain":
        return cls(rep, degree, np.array(list(vec), dtype=object).reshape(cls.shape_for(rep, degree)))

    def to_vector(self) -> list:
        return list(self.values.reshape(-1))

    def value(self, blocks: Iterable, z: int) -> np.ndarray:
        """Value on increasing (n-1)-tuples ``blocks`` and basis index ``z``."""
        pos = tuple(self.rep.block_index[tuple(b)] for b in blocks)
        return self.values[pos + (z,)]

    def is_zero(self) -> bool:
        return is_zero(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.values.shape == other.values.shape
            and bool(np.all(self.values == other.values))
        )

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree or other.rep is not self.rep and other.rep != self.rep:
            raise ValueError("cochains live in different spaces")
        return Cochain(self.rep, self.degree, self.values + other.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.rep, self.degree, -self.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __repr__(self) -> str:
        return f"<Cochain degree={self.degree} shape={self.values.shape}>"


def _apply_rho(sm: Mapping, arr: np.ndarray, axis: int) -> np.ndarray:
    """Apply a sparse matrix to ``arr`` along ``axis``."""
    out = zeros(arr.shape)
    lead = (slice(None),) * axis
    for p, row in sm.items():
        acc = out[lead + (p,)]
        for q, v in row.items():
            acc = acc + v * arr[lead + (q,)]
        out[lead + (p,)] = acc
    return out


def _wedge_action(alg: NLieAlgebra, blocks, block_index, insertion: str) -> list[list[dict]]:
    """act[a][b] = {c: coef}: sum over m of [X_a, x_m] wedged with the rest of X_b.

    ``in-place`` keeps [X_a, x_m] in slot m; ``front`` moves it to the
    first slot of the wedge, which costs (-1)^(m-1) (1-based m).
    """
    if insertion not in INSERTIONS:
        raise ValueError(f"insertion must be one of {INSERTIONS}")
    T = alg.tensor
    d = alg.dim
    act = []
    for A in blocks:
        TA = T[A]
        row = []
        for B in blocks:
            comb: dict = {}
            for m, xm in enumerate(B):
                rest = B[:m] + B[m + 1:]
                for w in range(d):
                    c = TA[xm][w]
                    if not c:
                        continue
                    if insertion == "in-place":
                        tup = B[:m] + (w,) + B[m + 1:]
                    else:
                        tup = (w,) + rest
                    s, srt = sort_sign(tup)
                    if s:
                        key = block_index[srt]
                        comb[key] = comb.get(key, 0) + s * c
            row.append({k: v for k, v in comb.items() if v})
        act.append(row)
    return act


def _coboundary_array(rep: Representation, k: int, u: np.ndarray, insertion: str) -> np.ndarray:
    """delta on raw values; ``u`` may carry extra trailing (batch) axes."""
    alg = rep.algebra
    n, d = alg.arity, alg.dim
    T = alg.tensor
    blocks = rep.blocks
    N = len(blocks)
    extra = u.shape[k + 1:]
    out = zeros((N,) * k + (d, rep.module_dim) + extra)
    full = (slice(None),)

    def at(pos_vals: dict, total: int) -> tuple:
        return tuple(pos_vals.get(p, slice(None)) for p in range(total))

    # first sum: (-1)^(i+1) rho(X_i) u(.., X_i omitted, .., z)
    for b in range(N):
        R = rep.sparse(b)
        if not R:
            continue
        moved = _apply_rho(R, u, k)  # module axis of u sits at position k
        for i in range(k):
            out[at({i: b}, k)] += (-1) ** i * moved

    # second sum: (-1)^(n+k-i+1) rho(x^k without x_i, z) u(X_1..X_{k-1}, x_i)
    for b, B in enumerate(blocks):
        for i in range(n - 1):
            sign0 = (-1) ** (n + k - (i + 1) + 1)
            head = B[:i] + B[i + 1:]
            ui = u[full * (k - 1) + (B[i],)]  # shape (N,)*(k-1) + (m,) + extra
            for z in range(d):
                s, R = rep.signed(head + (z,))
                if not s or not R:
                    continue
                out[at({k - 1: b, k: z}, k + 1)] += sign0 * s * _apply_rho(R, ui, k - 1)

    # third sum: (-1)^i u(.., X_i omitted, .., [X_i, z])
    for b, B in enumerate(blocks):
        TB = T[B]
        for z in range(d):
            comb = None
            for w in range(d):
                c = TB[z][w]
                if c:
                    term = c * u[full * (k - 1) + (w,)]
                    comb = term if comb is None else comb + term
            if comb is None:
                continue
            for i in range(k):
                out[at({i: b, k: z}, k + 1)] += (-1) ** (i + 1) * comb

    # fourth sum: i < j, X_j replaced by the derivation action of X_i on it
    if k >= 2:
        act = _wedge_action(alg, blocks, rep.block_index, insertion)
        for i in range(k):
            for j in range(i + 1, k):
                sign0 = (-1) ** (i + 1)
                for a in range(N):
                    for b in range(N):
                        comb = None
                        for c, coef in act[a][b].items():
                            term = coef * np.take(u, c, axis=j - 1)
                            comb = term if comb is None else comb + term
                        if comb is None:
                            continue
                        out[at({i: a, j: b}, k)] += sign0 * comb
    return normalize(out)


def coboundary(rep: Representation, u: Cochain, insertion: str = DEFAULT_INSERTION) -> Cochain:
    """The coboundary of a k-cochain, a (k+1)-cochain.

    In the last sum the bracket [X_i, x_m^j] replaces x_m^j inside block j
    (``insertion="in-place"``, the default); ``"front"`` instead places it
    first in the wedge.  Terms with i = j are omitted: they would evaluate
    u with block i both removed and modified.
    """
    if u.rep is not rep and u.rep != rep:
        raise ValueError("cochain belongs to a different representation")
    return Cochain(rep, u.degree + 1, _coboundary_array(rep, u.degree, u.values, insertion))


def is_cocycle(rep: Representation, u: Cochain, insertion: str = DEFAULT_INSERTION) -> bool:
    return coboundary(rep, u, insertion).is_zero()


def coboundary_matrix(rep: Representation, k: int, insertion: str = DEFAULT_INSERTION, chunk: int = 64) -> tuple[list[dict], int, int]:
    """Sparse rows of delta: C^k -> C^(k+1) in flattened coordinates.

    Returns ``(rows, nrows, ncols)``; only nonzero rows are materialized
    but ``rows`` has one (possibly empty) dict per output coordinate.
    """
    in_shape = Cochain.shape_for(rep, k)
    out_shape = Cochain.shape_for(rep, k + 1)
    ncols = int(np.prod(in_shape))
    nrows = int(np.prod(out_shape))
    rows: list[dict] = [dict() for _ in range(nrows)]
    for start in range(0, ncols, chunk):
        width = min(chunk, ncols - start)
        batch = zeros((ncols, width))
        for t in range(width):
            batch[start + t, t] = 1
        img = _coboundary_array(rep, k, batch.reshape(in_shape + (width,)), insertion)
        img = img.reshape(nrows, width)
        for r, t in zip(*np.nonzero(img != 0)):
            rows[int(r)][start + int(t)] = img[r, t]
    return rows, nrows, ncols


def solve_coboundary(rep: Representation, u: Cochain, insertion: str = DEFAULT_INSERTION) -> Optional[Cochain]:
    """Some v with delta(v) = u, or None when the exact system is inconsistent.

    Free variables are set to zero, so u = 0 yields v = 0.
    """
    if u.degree < 2:
        raise ValueError("only cochains of degree >= 2 can be coboundaries")
    rows, _, ncols = coboundary_matrix(rep, u.degree - 1, insertion)
    x = linalg.solve_sparse(rows, ncols, u.to_vector())
    if x is None:
        return None
    return Cochain.from_vector(rep, u.degree - 1, x)


def cohomology(rep: Representation, k: int, insertion: str = DEFAULT_INSERTION) -> dict:
    """Dimensions of k-cocycles, k-coboundaries and their quotient."""
    rows, _, ncols = coboundary_matrix(rep, k, insertion)
    cocycles = ncols - linalg.rank_sparse(rows, ncols)
    if k >= 2:
        prev, _, pcols = coboundary_matrix(rep, k - 1, insertion)
        boundaries = linalg.rank_sparse(prev, pcols)
    else:
        boundaries = 0
    return {"degree": k, "cocycles": cocycles, "coboundaries": boundaries, "dimension": cocycles - boundaries}


def nontrivial_cocycle(rep: Representation, k: int, insertion: str = DEFAULT_INSERTION) -> Optional[Cochain]:
    """A k-cocycle that is not a coboundary, if one exists (k >= 2)."""
    if k < 2:
        raise ValueError("degree must be at least 2")
    rows, _, ncols = coboundary_matrix(rep, k, insertion)
    kernel = linalg.nullspace_sparse(rows, ncols)
    prev, nprev, pcols = coboundary_matrix(rep, k - 1, insertion)
    # image of the previous map: columns of prev -> rows of its transpose
    image: list[dict] = [dict() for _ in range(pcols)]
    for r, row in enumerate(prev):
        for c, v in row.items():
            image[c][r] = v
    base = linalg.rank_sparse(image, nprev)
    for vec in kernel:
        cand = {i: v for i, v in enumerate(vec) if v}
        if linalg.rank_sparse(image + [cand], nprev) > base:
            return Cochain.from_vector(rep, k, vec)
    return None
