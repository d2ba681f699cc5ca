"""JSON documents for algebras, cobrackets and Manin triples.

A document is an object

    {"format": "nlie/1", "algebras": [...], "cobrackets": [...], "triples": [...]}

where every list is optional.  Basis indices are 1-based and every
coefficient is a string ``"p"`` or ``"p/q"``.  A bare algebra record is
also accepted wherever a document is expected.

Records::

    algebra    {"name", "arity", "dim", "brackets": [{"indices": [..], "value": [{"basis", "coeff"}]}]}
    cobracket  {"name", "over", "antisymmetric"?, "entries": [{"source", "tensor": [{"slots": [..], "coeff"}]}]}
    triple     {"name", "algebra", "form": [[..]], "g1": [[..]], "g2": [[..]]}

With ``antisymmetric`` true (the default) a cobracket lists only strictly
increasing slot tuples and the rest follows by antisymmetry; with false
every nonzero ordered tuple is listed.  Emission is canonical: sorted keys,
records sorted by name or index, lowest-term rationals, no zero entries.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Union

import numpy as np

from .algebra import NLieAlgebra
from .bialgebra import Cobracket
from .double import ManinTriple, MetricNLieAlgebra, Subspace
from .tensor import canonical_tuples, fmt, sort_sign, zeros

__all__ = [
    "FORMAT",
    "SchemaError",
    "Document",
    "parse_document",
    "parse_algebra",
    "parse_cobracket",
    "parse_triple",
    "emit_document",
    "emit_algebra",
    "emit_cobracket",
    "emit_triple",
    "document_of",
]

FORMAT = "nlie/1"
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class SchemaError(ValueError):
    """The input is not a valid document."""


@dataclass
class Document:
    algebras: dict = field(default_factory=dict)
    cobrackets: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)

    def get(self, name: str):
        for table in (self.algebras, self.cobrackets, self.triples):
            if name in table:
                return table[name]
        raise KeyError(name)

    def names(self) -> list[str]:
        return list(self.algebras) + list(self.cobrackets) + list(self.triples)


# ---------------------------------------------------------------- parsing


def _rational(value, where: str):
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise SchemaError(f"{where}: malformed rational {value!r} (expected a string \"p\" or \"p/q\")")
    try:
        q = Fraction(value)
    except ZeroDivisionError:
        raise SchemaError(f"{where}: zero denominator in {value!r}") from None
    if q == 0:
        raise SchemaError(f"{where}: zero coefficient (omit the entry instead)")
    return q.numerator if q.denominator == 1 else q


def _entry(value, where: str):
    # matrix entries in triples may be zero
    if value == "0":
        return 0
    return _rational(value, where)


def _object(rec, where: str, required: Iterable[str], optional: Iterable[str] = ()) -> dict:
    if not isinstance(rec, dict):
        raise SchemaError(f"{where}: expected an object")
    required, optional = set(required), set(optional)
    missing = sorted(required - set(rec))
    if missing:
        raise SchemaError(f"{where}: missing field(s) {', '.join(missing)}")
    extra = sorted(set(rec) - required - optional)
    if extra:
        raise SchemaError(f"{where}: unknown field(s) {', '.join(extra)}")
    return rec


def _int(value, where: str, low: int, high: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    if value < low or (high is not None and value > high):
        rng = f"[{low}, {high}]" if high is not None else f">= {low}"
        raise SchemaError(f"{where}: {value} out of range {rng}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return value


def _indices(value, where: str, length: int, dim: int, increasing: bool) -> tuple:
    vals = _list(value, where)
    if len(vals) != length:
        raise SchemaError(f"{where}: expected {length} indices, got {len(vals)}")
    idx = tuple(_int(v, where, 1, dim) for v in vals)
    if increasing and any(idx[a] >= idx[a + 1] for a in range(length - 1)):
        raise SchemaError(f"{where}: indices {list(idx)} are not strictly increasing")
    return tuple(i - 1 for i in idx)


def _name(rec, where: str) -> str:
    name = rec["name"]
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{where}: name must be a non-empty string")
    return name


def _algebra_record(rec, where: str) -> NLieAlgebra:
    _object(rec, where, ("name", "arity", "dim", "brackets"))
    name = _name(rec, where)
    where = f"algebra {name!r}"
    n = _int(rec["arity"], f"{where} arity", 2)
    d = _int(rec["dim"], f"{where} dim", 1)
    brackets = {}
    for r, br in enumerate(_list(rec["brackets"], f"{where} brackets")):
        here = f"{where} bracket record {r + 1}"
        _object(br, here, ("indices", "value"))
        idx = _indices(br["indices"], here, n, d, increasing=True)
        if idx in brackets:
            raise SchemaError(f"{here}: duplicate indices {[i + 1 for i in idx]}")
        vec = {}
        for t, term in enumerate(_list(br["value"], f"{here} value")):
            there = f"{here} term {t + 1}"
            _object(term, there, ("basis", "coeff"))
            k = _int(term["basis"], there, 1, d) - 1
            if k in vec:
                raise SchemaError(f"{there}: duplicate basis index {k + 1}")
            vec[k] = _rational(term["coeff"], there)
        if not vec:
            raise SchemaError(f"{here}: empty value (omit zero brackets)")
        brackets[idx] = vec
    return NLieAlgebra(n, d, brackets, name=name)


def _cobracket_record(rec, where: str, algebras: dict) -> Cobracket:
    _object(rec, where, ("name", "over", "entries"), ("antisymmetric",))
    name = _name(rec, where)
    where = f"cobracket {name!r}"
    over = rec["over"]
    if over not in algebras:
        raise SchemaError(f"{where}: unknown algebra {over!r}")
    alg = algebras[over]
    anti = rec.get("antisymmetric", True)
    if not isinstance(anti, bool):
        raise SchemaError(f"{where}: antisymmetric must be a boolean")
    n, d = alg.arity, alg.dim
    G = zeros((d,) * (n + 1))
    seen_sources = set()
    for r, entry in enumerate(_list(rec["entries"], f"{where} entries")):
        here = f"{where} entry {r + 1}"
        _object(entry, here, ("source", "tensor"))
        x = _int(entry["source"], f"{here} source", 1, d) - 1
        if x in seen_sources:
            raise SchemaError(f"{here}: duplicate source {x + 1}")
        seen_sources.add(x)
        seen = set()
        for t, term in enumerate(_list(entry["tensor"], f"{here} tensor")):
            there = f"{here} term {t + 1}"
            _object(term, there, ("slots", "coeff"))
            s = _indices(term["slots"], there, n, d, increasing=anti)
            if s in seen:
                raise SchemaError(f"{there}: duplicate slots {[i + 1 for i in s]}")
            seen.add(s)
            c = _rational(term["coeff"], there)
            if anti:
                for perm in itertools.permutations(range(n)):
                    sg, _ = sort_sign(perm)
                    G[(x,) + tuple(s[p] for p in perm)] = sg * c
            else:
                G[(x,) + s] = c
    try:
        return Cobracket(alg, G, antisymmetric=anti, name=name)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _matrix(value, where: str, cols: int) -> list:
    rows = _list(value, where)
    out = []
    for r, row in enumerate(rows):
        row = _list(row, f"{where} row {r + 1}")
        if len(row) != cols:
            raise SchemaError(f"{where} row {r + 1}: expected {cols} entries, got {len(row)}")
        out.append([_entry(v, f"{where} row {r + 1} entry {c + 1}") for c, v in enumerate(row)])
    return out


def _triple_record(rec, where: str, algebras: dict) -> ManinTriple:
    _object(rec, where, ("name", "algebra", "form", "g1", "g2"))
    name = _name(rec, where)
    where = f"triple {name!r}"
    if rec["algebra"] not in algebras:
        raise SchemaError(f"{where}: unknown algebra {rec['algebra']!r}")
    alg = algebras[rec["algebra"]]
    D = alg.dim
    form = _matrix(rec["form"], f"{where} form", D)
    if len(form) != D:
        raise SchemaError(f"{where} form: expected {D} rows")
    try:
        metric = MetricNLieAlgebra(alg, form)
        g1 = Subspace(D, _matrix(rec["g1"], f"{where} g1", D))
        g2 = Subspace(D, _matrix(rec["g2"], f"{where} g2", D))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    return ManinTriple(metric, g1, g2, name=name)


_KINDS = {"algebras", "cobrackets", "triples"}


def _load(text: Union[str, bytes]):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def parse_document(text: Union[str, bytes]) -> Document:
    data = _load(text)
    if not isinstance(data, dict):
        raise SchemaError("document must be a JSON object")
    if "format" not in data and not (_KINDS & set(data)):
        # a bare record
        if "brackets" in data:
            data = {"algebras": [data]}
        elif "entries" in data:
            raise SchemaError("a bare cobracket record needs its algebra; use a full document")
        else:
            raise SchemaError("unrecognized document")
    _object(data, "document", (), ("format",) + tuple(sorted(_KINDS)))
    if data.get("format", FORMAT) != FORMAT:
        raise SchemaError(f"unsupported format {data['format']!r}")
    doc = Document()
    taken = set()

    def claim(name: str, kind: str):
        if name in taken:
            raise SchemaError(f"duplicate object name {name!r} ({kind})")
        taken.add(name)

    for i, rec in enumerate(_list(data.get("algebras", []), "algebras")):
        alg = _algebra_record(rec, f"algebra record {i + 1}")
        claim(alg.name, "algebra")
        doc.algebras[alg.name] = alg
    for i, rec in enumerate(_list(data.get("cobrackets", []), "cobrackets")):
        cb = _cobracket_record(rec, f"cobracket record {i + 1}", doc.algebras)
        claim(cb.name, "cobracket")
        doc.cobrackets[cb.name] = cb
    for i, rec in enumerate(_list(data.get("triples", []), "triples")):
        t = _triple_record(rec, f"triple record {i + 1}", doc.algebras)
        claim(t.name, "triple")
        doc.triples[t.name] = t
    return doc


def _single(table: dict, kind: str, name: Optional[str]):
    if name is not None:
        if name not in table:
            raise SchemaError(f"no {kind} named {name!r}")
        return table[name]
    if len(table) != 1:
        raise SchemaError(f"expected exactly one {kind}, found {len(table)}; give a name")
    return next(iter(table.values()))


def parse_algebra(text, name: Optional[str] = None) -> NLieAlgebra:
    return _single(parse_document(text).algebras, "algebra", name)


def parse_cobracket(text, name: Optional[str] = None) -> Cobracket:
    return _single(parse_document(text).cobrackets, "cobracket", name)


def parse_triple(text, name: Optional[str] = None) -> ManinTriple:
    return _single(parse_document(text).triples, "triple", name)


# ---------------------------------------------------------------- emission


def _algebra_dict(alg: NLieAlgebra) -> dict:
    brackets = []
    for idx, vec in sorted(alg.structure.items()):
        value = [{"basis": k + 1, "coeff": fmt(c)} for k, c in enumerate(vec) if c != 0]
        brackets.append({"indices": [i + 1 for i in idx], "value": value})
    return {"name": alg.name, "arity": alg.arity, "dim": alg.dim, "brackets": brackets}


def _cobracket_dict(cb: Cobracket) -> dict:
    n, d = cb.arity, cb.dim
    G = cb.tensor
    tuples = canonical_tuples(d, n) if cb.antisymmetric else list(itertools.product(range(d), repeat=n))
    entries = []
    for x in range(d):
        tensor = [
            {"slots": [i + 1 for i in s], "coeff": fmt(G[(x,) + s])}
            for s in tuples
            if G[(x,) + s] != 0
        ]
        if tensor:
            entries.append({"source": x + 1, "tensor": tensor})
    out = {"name": cb.name, "over": cb.algebra.name, "entries": entries}
    if not cb.antisymmetric:
        out["antisymmetric"] = False
    return out


def _rows(M) -> list:
    return [[fmt(v) for v in row] for row in np.asarray(M, dtype=object)]


def _triple_dict(t: ManinTriple) -> dict:
    return {
        "name": t.name,
        "algebra": t.metric.algebra.name,
        "form": _rows(t.metric.form),
        "g1": _rows(t.g1.basis),
        "g2": _rows(t.g2.basis),
    }


def _check_named(obj, kind: str) -> None:
    if not obj.name:
        raise ValueError(f"cannot emit an unnamed {kind}")


def document_of(objects: Iterable) -> Document:
    """Collect objects (and the algebras they reference) into a document."""
    doc = Document()

    def put(table: dict, name: str, obj, kind: str):
        old = table.get(name)
        if old is not None and old is not obj and old != obj:
            raise ValueError(f"two different {kind}s named {name!r}")
        table[name] = obj

    for obj in objects:
        if isinstance(obj, NLieAlgebra):
            _check_named(obj, "algebra")
            put(doc.algebras, obj.name, obj, "algebra")
        elif isinstance(obj, Cobracket):
            _check_named(obj, "cobracket")
            _check_named(obj.algebra, "algebra")
            put(doc.algebras, obj.algebra.name, obj.algebra, "algebra")
            put(doc.cobrackets, obj.name, obj, "cobracket")
        elif isinstance(obj, ManinTriple):
            _check_named(obj, "triple")
            alg = obj.metric.algebra
            _check_named(alg, "algebra")
            put(doc.algebras, alg.name, alg, "algebra")
            put(doc.triples, obj.name, obj, "triple")
        else:
            raise TypeError(f"cannot emit {type(obj).__name__}")
    return doc


def _dump(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_document(doc: Union[Document, Iterable]) -> str:
    if not isinstance(doc, Document):
        doc = document_of(doc)
    data = {"format": FORMAT}
    if doc.algebras:
        data["algebras"] = [_algebra_dict(doc.algebras[k]) for k in sorted(doc.algebras)]
    if doc.cobrackets:
        data["cobrackets"] = [_cobracket_dict(doc.cobrackets[k]) for k in sorted(doc.cobrackets)]
    if doc.triples:
        data["triples"] = [_triple_dict(doc.triples[k]) for k in sorted(doc.triples)]
    return _dump(data)


def emit_algebra(alg: NLieAlgebra) -> str:
    return emit_document([alg])


def emit_cobracket(cb: Cobracket) -> str:
    return emit_document([cb])


def emit_triple(t: ManinTriple) -> str:
    return emit_document([t])
