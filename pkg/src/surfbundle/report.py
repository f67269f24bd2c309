"""Report values shared by the JSON and table renderings."""

from __future__ import annotations

import json
import types
import typing
from dataclasses import asdict, dataclass, fields, is_dataclass
from typing import Any, Union

from .bounds import bounds_report
from .construction import SectionSumBundle, euler_char_total, fiber_genus
from .fibering import (
    CoverConstruction,
    all_certificates,
    check_descriptors,
    cover_euler_char,
    fiberings,
    verify_certificate,
)
from . import intlinalg as la
from .monodromy import (
    MODEL,
    generator_actions,
    generator_names,
    base_genus_of,
    invariant_lagrangian,
    is_torelli,
    preserves_lagrangian,
    signature,
)


@dataclass
class ConstructionSummary:
    kind: str
    vertices: int
    edges: int
    euler_characteristic: int
    surface_genus: int
    fiber_genus: int | None
    vertex_genera: list[int]
    group_orders: list[int]


@dataclass
class FiberingRow:
    id: str
    base_genus: int
    fiber_genus: int


@dataclass
class GeneratorAction:
    generator: str
    matrix: list[list[int]]
    torelli: bool
    symplectic: bool
    preserves_lagrangian: bool


@dataclass
class MonodromySummary:
    fibering: str
    model: str
    torelli: bool
    lagrangian_invariant: bool
    generators: list[GeneratorAction]


@dataclass
class SignatureRow:
    value: int
    flag: str


@dataclass
class CertificateRow:
    fibering1: str
    fibering2: str
    witness_vertex: str
    witness_class: int
    image_vector: list[int]
    verified: bool


@dataclass
class BoundsRow:
    d: int
    lower: int
    upper: int
    genus_pairs: list[list[int]]
    max_generators: int
    argmax: list[int]
    hom_count: int
    hillman: bool


@dataclass
class Report:
    construction: ConstructionSummary
    fiberings: list[FiberingRow]
    bounds: BoundsRow
    monodromy: list[MonodromySummary] | None = None
    signature: SignatureRow | None = None
    certificates: list[CertificateRow] | None = None


@dataclass
class BoundsTable:
    rows: list[BoundsRow]


# construction

def bounds_row(d: int, hillman: bool = False) -> BoundsRow:
    r = bounds_report(d, hillman)
    return BoundsRow(r.d, r.lower, r.upper, [list(p) for p in r.genus_pairs], r.max_generators,
                     list(r.argmax), r.hom_count, r.hillman)


def summarize(parent) -> ConstructionSummary:
    if isinstance(parent, SectionSumBundle):
        return ConstructionSummary("section-sum", parent.C, parent.D, euler_char_total(parent), parent.piece_genus,
                                   fiber_genus(parent), [parent.piece_genus] * parent.C,
                                   [parent.group.order] * parent.C)
    return ConstructionSummary("cover", parent.C, parent.D, cover_euler_char(parent), parent.base_genus, None,
                               [vd.genus for vd in parent.vertex_data],
                               [vd.action.group.order for vd in parent.vertex_data])


def monodromy_summary(parent, fid: str) -> MonodromySummary:
    lag = invariant_lagrangian(parent, fid)
    names = generator_names(base_genus_of(parent, fid))
    gens = []
    model = "exact"
    for name, a in zip(names, generator_actions(parent, fid)):
        if a.model == MODEL:
            model = MODEL
        gens.append(GeneratorAction(name, la.thaw(a.matrix), is_torelli(a), la.is_symplectic(a.matrix, a.space.form),
                                    preserves_lagrangian(a, lag)))
    return MonodromySummary(fid, model, all(g.torelli for g in gens), all(g.preserves_lagrangian for g in gens), gens)


def build_report(parent, certify: bool = False, with_monodromy: bool = False) -> Report:
    check_descriptors(parent)
    summary = summarize(parent)
    rows = [FiberingRow(f.id, f.base_genus, f.fiber_genus) for f in fiberings(parent)]
    rep = Report(summary, rows, bounds_row(summary.euler_characteristic // 4))
    if with_monodromy:
        rep.monodromy = [monodromy_summary(parent, r.id) for r in rows]
        s = signature(parent)
        rep.signature = SignatureRow(s.value, s.flag)
    if certify:
        rep.certificates = [
            CertificateRow(c.fibering1, c.fibering2, c.witness_vertex, c.witness_class, list(c.image_vector),
                           verify_certificate(parent, c))
            for c in all_certificates(parent)
        ]
    return rep


# serialization

def to_json(value: Any) -> str:
    return json.dumps(asdict(value), sort_keys=True, indent=2) + "\n"


def _decode(tp: Any, value: Any) -> Any:
    origin = typing.get_origin(tp)
    if origin in (Union, types.UnionType):
        if value is None:
            return None
        inner = [a for a in typing.get_args(tp) if a is not type(None)]
        return _decode(inner[0], value)
    if origin is list:
        (arg,) = typing.get_args(tp)
        return [_decode(arg, v) for v in value]
    if is_dataclass(tp):
        hints = typing.get_type_hints(tp)
        names = {f.name for f in fields(tp)}
        if set(value) != names:
            raise ValueError(f"{tp.__name__}: keys {sorted(value)} do not match {sorted(names)}")
        return tp(**{k: _decode(hints[k], value[k]) for k in names})
    return value


def from_json(text: str, cls: type = Report) -> Any:
    return _decode(cls, json.loads(text))


# tables

def _table(headers: list[str], rows: list[list[Any]]) -> list[str]:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
    return [fmt(cells[0]), fmt(["-" * w for w in widths])] + [fmt(r) for r in cells[1:]]


def _bounds_lines(rows: list[BoundsRow]) -> list[str]:
    return _table(["d", "lower", "upper", "pairs", "max_gen"],
                  [[r.d, r.lower, r.upper, len(r.genus_pairs), r.max_generators] for r in rows])


def render_table(value: Report | BoundsTable) -> str:
    if isinstance(value, BoundsTable):
        return "\n".join(_bounds_lines(value.rows)) + "\n"
    c = value.construction
    out = [f"construction: {c.kind}",
           f"  vertices C = {c.vertices}, edges D = {c.edges}, surface genus = {c.surface_genus}",
           f"  euler characteristic = {c.euler_characteristic}"]
    if c.fiber_genus is not None:
        out.append(f"  fiber genus = {c.fiber_genus}")
    out.append("")
    out.append(f"fiberings ({len(value.fiberings)}):")
    out += ["  " + line for line in _table(["id", "base", "fiber"],
                                           [[f.id, f.base_genus, f.fiber_genus] for f in value.fiberings])]
    if value.monodromy is not None:
        out.append("")
        out.append("monodromy:")
        out += ["  " + line for line in _table(
            ["fibering", "torelli", "lagrangian", "model", "non-identity generators"],
            [[m.fibering, m.torelli, m.lagrangian_invariant, m.model,
              " ".join(g.generator for g in m.generators if not g.torelli) or "-"] for m in value.monodromy])]
    if value.signature is not None:
        out.append(f"signature: {value.signature.value} ({value.signature.flag})")
    if value.certificates is not None:
        out.append("")
        out.append(f"certificates ({len(value.certificates)}):")
        out += ["  " + line for line in _table(
            ["pair", "vertex", "class", "image", "verified"],
            [[f"{x.fibering1}/{x.fibering2}", x.witness_vertex, x.witness_class,
              "[" + " ".join(map(str, x.image_vector)) + "]", x.verified] for x in value.certificates])]
    out.append("")
    out.append("bounds for d = chi/4:")
    out += ["  " + line for line in _bounds_lines([value.bounds])]
    return "\n".join(out) + "\n"
