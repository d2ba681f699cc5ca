"""Exact scalars, multi-indices, permutation signs and dense tensors.

Scalars are Python ``int`` whenever the value is integral and
``fractions.Fraction`` otherwise; both are exact ``numbers.Rational``
values and mix freely.  Floats are rejected everywhere.

Tensors are numpy arrays of ``dtype=object`` with shape ``(d,) * rank``.
All indices in this module are 0-based.
"""

from __future__ import annotations

import itertools
import math
import numbers
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "scalar",
    "as_array",
    "normalize",
    "zeros",
    "basis_vector",
    "is_zero",
    "perm_sign",
    "sort_sign",
    "canonical_tuples",
    "wedge",
    "pair",
    "antisymmetrize",
    "act_on_slot",
    "fmt",
]


def scalar(x) -> numbers.Rational:
    """Coerce ``x`` to an exact scalar (int if integral, else Fraction)."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, str):
        return scalar(Fraction(x.strip()))
    if isinstance(x, numbers.Rational):
        return scalar(Fraction(x.numerator, x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


_scalar_ufunc = np.frompyfunc(scalar, 1, 1)


def as_array(values) -> np.ndarray:
    """Object array of exact scalars built from nested sequences."""
    arr = np.array(values, dtype=object)
    if arr.shape == ():
        return np.array(scalar(arr.item()), dtype=object)
    return _scalar_ufunc(arr).astype(object)


def normalize(arr: np.ndarray) -> np.ndarray:
    """Return a copy with every entry in canonical scalar form."""
    arr = np.asarray(arr, dtype=object)
    if arr.shape == ():
        return np.array(scalar(arr.item()), dtype=object)
    return _scalar_ufunc(arr).astype(object)


def zeros(shape) -> np.ndarray:
    return np.zeros(shape, dtype=object)


def basis_vector(d: int, i: int) -> np.ndarray:
    v = zeros(d)
    v[i] = 1
    return v


def is_zero(arr) -> bool:
    arr = np.asarray(arr, dtype=object)
    return not bool(np.any(arr != 0))


def perm_sign(images: Sequence[int]) -> int:
    """Sign of the permutation ``i -> images[i]`` of ``{0, ..., k-1}``."""
    images = tuple(images)
    k = len(images)
    if sorted(images) != list(range(k)):
        raise ValueError(f"not a permutation of 0..{k - 1}: {images}")
    sign = 1
    seen = [False] * k
    for start in range(k):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple.

    The sign is 0 when ``seq`` has a repeated entry (degenerate index).
    """
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0, tuple(sorted(seq))
    inversions = sum(
        1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


def canonical_tuples(d: int, r: int) -> list[tuple[int, ...]]:
    """All strictly increasing r-tuples over range(d), lexicographic."""
    return list(itertools.combinations(range(d), r))


def _outer(vectors: Iterable[np.ndarray]) -> np.ndarray:
    vectors = list(vectors)
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def wedge(*vectors) -> np.ndarray:
    """Unnormalized wedge: sum over sigma of sgn(sigma) v_sigma(1) (x) ... .

    No 1/k! factor, so ``wedge(a, b) = a(x)b - b(x)a``.  This differs from
    ``antisymmetrize`` (the idempotent projector) by a factor of k!.
    """
    if not vectors:
        raise ValueError("wedge needs at least one vector")
    vs = [as_array(v) for v in vectors]
    d = vs[0].shape
    if any(v.ndim != 1 or v.shape != d for v in vs):
        raise ValueError("wedge: all vectors must have the same dimension")
    k = len(vs)
    out = zeros(d * k)
    for perm in itertools.permutations(range(k)):
        out = out + perm_sign(perm) * _outer(vs[p] for p in perm)
    return out


def pair(t, covectors) -> numbers.Rational:
    """Full contraction <xi_1 (x) ... (x) xi_k, t>."""
    t = np.asarray(t, dtype=object)
    covectors = [as_array(c) for c in covectors]
    if t.ndim != len(covectors):
        raise ValueError(f"rank {t.ndim} tensor paired with {len(covectors)} covectors")
    for axis, c in enumerate(covectors):
        if c.shape != (t.shape[axis],):
            raise ValueError("pair: covector dimension mismatch")
    res = t
    for c in covectors:
        res = np.tensordot(c, res, axes=([0], [0]))
    return scalar(np.asarray(res, dtype=object).item())


def antisymmetrize(t, slots: Sequence[int]) -> np.ndarray:
    """Normalized antisymmetrizer over the given slot positions (idempotent)."""
    t = np.asarray(t, dtype=object)
    slots = tuple(slots)
    if len(set(slots)) != len(slots) or any(not 0 <= s < t.ndim for s in slots):
        raise ValueError(f"invalid slots {slots} for rank {t.ndim}")
    k = len(slots)
    out = zeros(t.shape)
    for perm in itertools.permutations(range(k)):
        axes = list(range(t.ndim))
        for a, p in zip(slots, perm):
            axes[a] = slots[p]
        out = out + perm_sign(perm) * np.transpose(t, axes)
    return normalize(out * Fraction(1, math.factorial(k)))


def act_on_slot(matrix, t, slot: int) -> np.ndarray:
    """Apply ``matrix`` (acting on column vectors) to one tensor slot."""
    res = np.tensordot(matrix, t, axes=([1], [slot]))
    return np.moveaxis(res, 0, slot)


def fmt(x) -> str:
    """Rational as "p" or "p/q"."""
    x = Fraction(scalar(x))
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
