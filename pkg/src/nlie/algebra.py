"""n-Lie (Filippov) algebras given by structure constants, and axiom checks.

The structure tensor ``T`` has shape ``(d,) * n + (d,)`` with
``T[a1, ..., an, k]`` the coefficient of ``e_k`` in ``[e_a1, ..., e_an]``.
Python-side indices are 0-based; reports convert to 1-based.

All quantified checks iterate strictly increasing basis tuples for every
block of arguments in which the residual is multilinear and skew.  A
residual that is skew in a block vanishes on repeated indices and changes
only by a sign under reordering, so the increasing tuples cover every case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from .tensor import as_array, canonical_tuples, fmt, is_zero, normalize, sort_sign, zeros

__all__ = [
    "Counterexample",
    "CheckReport",
    "NLieAlgebra",
    "check_skew_symmetry",
    "check_filippov_jacobi",
    "check_pair_identity",
    "check_algebra",
]


@dataclass(frozen=True)
class Counterexample:
    """First failing case of a check.

    ``where`` maps argument-block names to 1-based index tuples (or to
    plain integer labels such as a slot number); ``residual`` is the
    nonzero exact residual.
    """

    where: dict
    residual: Any

    def to_dict(self) -> dict:
        where = {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.where.items()}
        return {"where": where, "residual": _render(self.residual)}

    def __str__(self) -> str:
        parts = ", ".join(
            f"{k}={v}" for k, v in self.where.items()
        )
        if not parts:
            return f"residual {_render(self.residual)}"
        return f"{parts}: residual {_render(self.residual)}"


def _render(residual):
    arr = np.asarray(residual, dtype=object)
    if arr.shape == ():
        return fmt(arr.item())
    return np.vectorize(fmt, otypes=[object])(arr).tolist()


@dataclass
class CheckReport:
    name: str
    verdict: bool
    checks_run: int = 0
    counterexample: Optional[Counterexample] = None
    failures: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict

    def __bool__(self) -> bool:
        return self.verdict

    @classmethod
    def combine(cls, name: str, parts: Mapping[str, "CheckReport"], **extra) -> "CheckReport":
        """Conjunction of sub-checks; the first failing part supplies the counterexample."""
        first = next((p for p in parts.values() if not p.verdict), None)
        details = dict(parts)
        details.update(extra)
        return cls(
            name=name,
            verdict=first is None,
            checks_run=sum(p.checks_run for p in parts.values()),
            counterexample=None if first is None else first.counterexample,
            failures=sum(p.failures for p in parts.values()),
            details=details,
        )

    def to_dict(self) -> dict:
        details = {}
        for k, v in self.details.items():
            if hasattr(v, "to_dict"):
                details[k] = v.to_dict()
            else:
                details[k] = v
        return {
            "name": self.name,
            "verdict": "pass" if self.verdict else "fail",
            "checks_run": self.checks_run,
            "failures": self.failures,
            "counterexample": None if self.counterexample is None else self.counterexample.to_dict(),
            "details": details,
        }

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        out = [f"{pad}{'PASS' if self.verdict else 'FAIL'} {self.name} ({self.checks_run} cases)"]
        if self.counterexample is not None and not self.verdict:
            out.append(f"{pad}  first counterexample: {self.counterexample}")
        for k, v in self.details.items():
            if isinstance(v, CheckReport):
                out.extend(v.lines(indent + 1))
            elif hasattr(v, "lines"):
                out.extend(v.lines(indent + 1))
            else:
                out.append(f"{pad}  {k}: {v}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


class Scan:
    """Accumulates residuals over an ordered case list into a CheckReport."""

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.failures = 0
        self.first: Optional[Counterexample] = None

    def add(self, where: Mapping[str, Any], residual) -> bool:
        self.count += 1
        if is_zero(residual):
            return True
        self.failures += 1
        if self.first is None:
            shown = {
                k: (tuple(i + 1 for i in v) if isinstance(v, tuple) else v)
                for k, v in where.items()
            }
            self.first = Counterexample(shown, normalize(residual))
        return False

    def report(self, **details) -> CheckReport:
        return CheckReport(
            name=self.name,
            verdict=self.first is None,
            checks_run=self.count,
            counterexample=self.first,
            failures=self.failures,
            details=details,
        )


class NLieAlgebra:
    """An n-ary skew bracket on F^d stored as a full structure tensor.

    ``brackets`` maps strictly increasing 0-based n-tuples to d-vectors
    (sequence or ``{k: coeff}`` mapping); everything else follows by
    skew-symmetry.  Use :meth:`from_dense` to load an arbitrary tensor
    whose signs are not trusted.
    """

    def __init__(self, arity: int, dim: int, brackets: Optional[Mapping] = None, name: str = ""):
        if arity < 2:
            raise ValueError("arity must be at least 2")
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.arity = arity
        self.dim = dim
        self.name = name
        self.dense_loaded = False
        T = zeros((dim,) * arity + (dim,))
        for idx, value in (brackets or {}).items():
            idx = tuple(idx)
            if len(idx) != arity:
                raise ValueError(f"bracket index {idx} has length {len(idx)}, expected {arity}")
            if any(not 0 <= i < dim for i in idx):
                raise ValueError(f"bracket index {idx} out of range for dimension {dim}")
            if any(idx[a] >= idx[a + 1] for a in range(arity - 1)):
                raise ValueError(f"bracket index {idx} is not strictly increasing")
            vec = self._vector(value)
            for perm in itertools.permutations(range(arity)):
                s, _ = sort_sign(perm)
                T[tuple(idx[p] for p in perm)] = s * vec
        self._set_tensor(T)

    def _vector(self, value) -> np.ndarray:
        if isinstance(value, Mapping):
            vec = zeros(self.dim)
            for k, c in value.items():
                if not 0 <= k < self.dim:
                    raise ValueError(f"basis index {k} out of range")
                vec[k] = c
            return as_array(vec)
        vec = as_array(value)
        if vec.shape != (self.dim,):
            raise ValueError(f"bracket value must be a {self.dim}-vector")
        return vec

    def _set_tensor(self, T: np.ndarray) -> None:
        T = normalize(T)
        T.flags.writeable = False
        self._T = T

    @classmethod
    def from_dense(cls, arity: int, dim: int, tensor, name: str = "") -> "NLieAlgebra":
        """Load a full ``(d,)*n + (d,)`` tensor as-is (signs unchecked)."""
        T = as_array(tensor)
        if T.shape != (dim,) * arity + (dim,):
            raise ValueError(f"dense tensor has shape {T.shape}")
        alg = cls(arity, dim, name=name)
        alg._set_tensor(T)
        alg.dense_loaded = True
        return alg

    @classmethod
    def abelian(cls, arity: int, dim: int) -> "NLieAlgebra":
        return cls(arity, dim, name=f"abelian:n{arity}:d{dim}")

    @property
    def tensor(self) -> np.ndarray:
        return self._T

    @property
    def structure(self) -> dict:
        """Nonzero brackets on increasing index tuples."""
        out = {}
        for idx in canonical_tuples(self.dim, self.arity):
            v = self._T[idx]
            if not is_zero(v):
                out[idx] = tuple(v)
        return out

    def canonical(self) -> "NLieAlgebra":
        """Rebuild from increasing tuples (drops any sign inconsistency)."""
        return NLieAlgebra(self.arity, self.dim, self.structure, name=self.name)

    def basis_bracket(self, idx) -> np.ndarray:
        return self._T[tuple(idx)]

    def bracket(self, *vectors) -> np.ndarray:
        if len(vectors) != self.arity:
            raise ValueError(f"bracket takes {self.arity} arguments, got {len(vectors)}")
        res = self._T
        for v in vectors:
            v = as_array(v)
            if v.shape != (self.dim,):
                raise ValueError(f"argument must be a {self.dim}-vector")
            res = np.tensordot(v, res, axes=([0], [0]))
        return res

    def ad_basis(self, idx) -> np.ndarray:
        """Matrix of y -> [e_i1, ..., e_i(n-1), y] for a basis tuple."""
        return self._T[tuple(idx)].T

    def ad(self, *vectors) -> np.ndarray:
        if len(vectors) != self.arity - 1:
            raise ValueError(f"ad takes {self.arity - 1} arguments, got {len(vectors)}")
        res = self._T
        for v in vectors:
            v = as_array(v)
            if v.shape != (self.dim,):
                raise ValueError(f"argument must be a {self.dim}-vector")
            res = np.tensordot(v, res, axes=([0], [0]))
        return res.T

    def __eq__(self, other) -> bool:
        if not isinstance(other, NLieAlgebra):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.dim == other.dim
            and bool(np.all(self._T == other._T))
        )

    def __hash__(self):
        return hash((self.arity, self.dim, tuple(self._T.flat)))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<NLieAlgebra{label} n={self.arity} d={self.dim} brackets={len(self.structure)}>"


def _slice_at(idx: tuple, pos: int) -> tuple:
    return idx[:pos] + (slice(None),) + idx[pos + 1:]


def check_skew_symmetry(alg: NLieAlgebra) -> CheckReport:
    """Compare every index order (lexicographic) with its sorted form."""
    scan = Scan("skew-symmetry")
    T = alg.tensor
    zero = zeros(alg.dim)
    for idx in itertools.product(range(alg.dim), repeat=alg.arity):
        s, srt = sort_sign(idx)
        expected = s * T[srt] if s else zero
        scan.add({"indices": idx}, T[idx] - expected)
    return scan.report()


def check_filippov_jacobi(alg: NLieAlgebra) -> CheckReport:
    """Residual [X, [y]] - sum_i [y_1, .., [X, y_i], .., y_n] on basis tuples."""
    scan = Scan("filippov-jacobi")
    T = alg.tensor
    n, d = alg.arity, alg.dim
    ys = canonical_tuples(d, n)
    for x in canonical_tuples(d, n - 1):
        Tx = T[x]  # Tx[y, k] = coefficient of e_k in [X, e_y]
        for y in ys:
            lhs = T[y].dot(Tx)
            rhs = zeros(d)
            for i in range(n):
                rhs = rhs + Tx[y[i]].dot(T[_slice_at(y, i)])
            scan.add({"x": x, "y": y}, lhs - rhs)
    return scan.report()


def check_pair_identity(alg: NLieAlgebra) -> CheckReport:
    """The two-sided identity obtained by applying FJI twice.

    The residual is skew in x_1..x_{n-1} and in y_1..y_{n-1} but not in
    y_n, so y_n ranges over all basis vectors.
    """
    scan = Scan("pair-identity")
    T = alg.tensor
    n, d = alg.arity, alg.dim
    heads = canonical_tuples(d, n - 1)
    for x in heads:
        Tx = T[x]
        for yh in heads:
            Ty = T[yh]
            for yn in range(d):
                y = yh + (yn,)
                res = zeros(d)
                for i in range(n - 1):
                    res = res + Tx[y[i]].dot(T[_slice_at(y, i)])
                for j in range(n - 1):
                    res = res + Ty[x[j]].dot(T[_slice_at(x + (yn,), j)])
                scan.add({"x": x, "y": y}, res)
    return scan.report()


def check_algebra(alg: NLieAlgebra) -> CheckReport:
    return CheckReport.combine(
        "n-lie-algebra",
        {
            "skew-symmetry": check_skew_symmetry(alg),
            "filippov-jacobi": check_filippov_jacobi(alg),
            "pair-identity": check_pair_identity(alg),
        },
    )
