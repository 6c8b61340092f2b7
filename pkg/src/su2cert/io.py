"""
Query files. Every document is a YAML mapping carrying ``schema: 1``;
unknown keys are rejected rather than ignored.
"""

from __future__ import annotations

import json
from fractions import Fraction

import yaml

from .algebra import AlgebraError, LaurentPoly
from .certify import RawQuery, SeifertQuery, SteinQuery, SurgeryQuery
from .operators import BasicClass, DonaldsonSeriesModel, ModelError
from .knots import KnotError, KnotTable, builtin_table, record_from_dict
from .seifert import SeifertData, SeifertError
from .slopes import Slope, SlopeError

SCHEMA = 1


class ParseError(ValueError):
    pass


_QUERY_KEYS = {
    "surgery": {"knot", "slope", "cyclically_finite", "lspace_at", "not_lspace_at"},
    "stein": {"components", "linking", "rotation_vectors", "cyclically_finite"},
    "seifert": {"data"},
    "raw": {"h1", "rank_lower", "rank_exact", "invariant_factors", "cyclically_finite"},
}

_LSPACE_KEYS = {"knot", "genus", "alexander", "nontrivial", "lspace_at", "not_lspace_at",
                "not_lspace_integers_from", "rank", "query"}


def load_document(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("a query file must be a mapping")
    if doc.get("schema") != SCHEMA:
        raise ParseError(f"unsupported or missing schema version {doc.get('schema')!r} (expected {SCHEMA})")
    return doc


def _reject_unknown(d: dict, allowed: set, where: str):
    unknown = set(d) - allowed
    if unknown:
        raise ParseError(f"unknown fields in {where}: {sorted(map(str, unknown))}")


def _slope(x) -> Slope:
    try:
        return Slope.parse(str(x))
    except SlopeError as exc:
        raise ParseError(str(exc)) from None


def _knot(x, table: KnotTable):
    try:
        if isinstance(x, str):
            return table[x]
        if isinstance(x, dict):
            return record_from_dict(x)
    except (KnotError, AlgebraError) as exc:
        raise ParseError(str(exc)) from None
    raise ParseError("knot must be a table name or an inline record")


def _int_list(x, where):
    if not isinstance(x, list) or not all(isinstance(v, int) for v in x):
        raise ParseError(f"{where} must be a list of integers")
    return x


def parse_query(d: dict, table: KnotTable | None = None):
    """One certify query (the mapping without the schema key)."""
    table = table if table is not None else builtin_table()
    if not isinstance(d, dict):
        raise ParseError("a query must be a mapping")
    kind = d.get("type")
    if kind not in _QUERY_KEYS:
        raise ParseError(f"query type must be one of {sorted(_QUERY_KEYS)}, got {kind!r}")
    _reject_unknown(d, _QUERY_KEYS[kind] | {"type", "schema"}, f"{kind} query")
    flag = d.get("cyclically_finite", False)
    if not isinstance(flag, bool):
        raise ParseError("cyclically_finite must be true or false")
    if kind == "surgery":
        if "knot" not in d or "slope" not in d:
            raise ParseError("surgery queries need 'knot' and 'slope'")
        return SurgeryQuery(_knot(d["knot"], table), _slope(d["slope"]), flag,
                            [_slope(s) for s in d.get("lspace_at") or []],
                            [_slope(s) for s in d.get("not_lspace_at") or []])
    if kind == "stein":
        comps = d.get("components")
        if not isinstance(comps, list) or not all(isinstance(c, list) and len(c) == 2 for c in comps):
            raise ParseError("components must be a list of [tb, rot] pairs")
        for c in comps:
            _int_list(c, "component")
        linking = d.get("linking") or [[0] * len(comps) for _ in comps]
        for row in linking:
            _int_list(row, "linking row")
        vecs = d.get("rotation_vectors") or []
        for v in vecs:
            _int_list(v, "rotation vector")
        return SteinQuery([tuple(c) for c in comps], linking, vecs, flag)
    if kind == "seifert":
        try:
            return SeifertQuery(SeifertData.parse(str(d.get("data", ""))))
        except (SeifertError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc)) from None
    if "h1" not in d or not isinstance(d["h1"], int):
        raise ParseError("raw queries need an integer 'h1'")
    for key in ("rank_lower", "rank_exact"):
        if d.get(key) is not None and not isinstance(d[key], int):
            raise ParseError(f"{key} must be an integer")
    inv = d.get("invariant_factors")
    return RawQuery(d["h1"], d.get("rank_lower"), d.get("rank_exact"),
                    tuple(_int_list(inv, "invariant_factors")) if inv is not None else None, flag)


def parse_query_file(text: str, table: KnotTable | None = None):
    doc = load_document(text)
    return parse_query(doc, table)


def parse_batch_file(text: str, table: KnotTable | None = None) -> list:
    doc = load_document(text)
    _reject_unknown(doc, {"schema", "queries"}, "batch file")
    qs = doc.get("queries")
    if not isinstance(qs, list):
        raise ParseError("a batch file needs a 'queries' list")
    return [parse_query(q, table) for q in qs]


def parse_lspace_doc(doc: dict, table: KnotTable | None = None) -> dict:
    """Normalised L-space problem: attributes, facts and query slopes."""
    table = table if table is not None else builtin_table()
    _reject_unknown(doc, _LSPACE_KEYS | {"schema"}, "lspace file")
    out = {"label": "K", "genus": None, "alexander": None, "nontrivial": None,
           "lspace_at": [], "not_lspace_at": [], "not_lspace_integers_from": None,
           "rank": [], "query": []}
    if doc.get("knot") is not None:
        k = _knot(doc["knot"], table)
        out.update(label=k.name, genus=k.genus, alexander=k.alexander, nontrivial=k.nontrivial)
    if doc.get("genus") is not None:
        out["genus"] = int(doc["genus"])
    if doc.get("alexander") is not None:
        try:
            out["alexander"] = LaurentPoly.parse(str(doc["alexander"]), "t")
        except (AlgebraError, ValueError) as exc:
            raise ParseError(str(exc)) from None
    if doc.get("nontrivial") is not None:
        out["nontrivial"] = bool(doc["nontrivial"])
    out["lspace_at"] = [_slope(s) for s in doc.get("lspace_at") or []]
    out["not_lspace_at"] = [_slope(s) for s in doc.get("not_lspace_at") or []]
    if doc.get("not_lspace_integers_from") is not None:
        out["not_lspace_integers_from"] = int(doc["not_lspace_integers_from"])
    for r in doc.get("rank") or []:
        if not isinstance(r, dict):
            raise ParseError("rank entries are mappings with slope, value, exact")
        _reject_unknown(r, {"slope", "value", "exact"}, "rank entry")
        out["rank"].append((_slope(r["slope"]), int(r["value"]), bool(r.get("exact", False))))
    out["query"] = [_slope(s) for s in doc.get("query") or []]
    return out


def parse_models_file(text: str) -> list:
    """A family of Donaldson series models sharing g and Q."""
    doc = load_document(text)
    _reject_unknown(doc, {"schema", "g", "Q", "models"}, "models file")
    if "g" not in doc or "models" not in doc:
        raise ParseError("a models file needs 'g' and 'models'")
    if not isinstance(doc["g"], int) or not isinstance(doc["models"], list):
        raise ParseError("g must be an integer and models a list")
    try:
        Q = Fraction(str(doc.get("Q", 0)))
        out = []
        for m in doc["models"]:
            if not isinstance(m, list):
                raise ParseError("each model is a list of basic classes")
            classes = []
            for c in m:
                if not isinstance(c, dict):
                    raise ParseError("basic classes are mappings with alpha, a, k")
                _reject_unknown(c, {"alpha", "a", "k"}, "basic class")
                classes.append(BasicClass(Fraction(str(c["alpha"])), Fraction(str(c["a"])),
                                          Fraction(str(c["k"]))))
            out.append(DonaldsonSeriesModel(doc["g"], Q, tuple(classes)))
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, (ParseError, ModelError)):
            raise
        raise ParseError(f"bad basic class: {exc}") from None
    return out


def to_json(record) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(record, sort_keys=True, indent=2, ensure_ascii=False)
