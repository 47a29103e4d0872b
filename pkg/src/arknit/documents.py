"""JSON input documents (algebras, complexes), the analysis report and DOT output."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import jsonschema
import numpy as np

from . import __version__
from .algebra import Algebra, QuiverPresentation, build_algebra
from .complexes import ProjComplex, zero_block

TERM_SCHEMA = {
    "type": "object",
    "properties": {
        "coeff": {"type": "integer"},
        "path": {"type": "array", "items": {"type": "string"}},
        "vertex": {"type": "string"},
    },
    "required": ["coeff"],
    "additionalProperties": False,
}

ALGEBRA_SCHEMA = {
    "type": "object",
    "properties": {
        "characteristic": {"type": "integer", "minimum": 2},
        "vertices": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "arrows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "from": {"type": "string"},
                    "to": {"type": "string"},
                },
                "required": ["name", "from", "to"],
                "additionalProperties": False,
            },
        },
        "relations": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "coeff": {"type": "integer"},
                        "path": {"type": "array", "items": {"type": "string"}},
                    },
                    "required": ["coeff", "path"],
                    "additionalProperties": False,
                },
            },
        },
        "path_bound": {"type": "integer", "minimum": 1},
    },
    "required": ["characteristic", "vertices", "arrows"],
    "additionalProperties": False,
}

COMPLEX_SCHEMA = {
    "type": "object",
    "properties": {
        "degrees": {
            "type": "object",
            "patternProperties": {r"^-?\d+$": {"type": "array", "items": {"type": "string"}}},
            "additionalProperties": False,
        },
        "differentials": {
            "type": "object",
            "patternProperties": {
                r"^-?\d+$": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": TERM_SCHEMA}}}
            },
            "additionalProperties": False,
        },
    },
    "required": ["degrees"],
    "additionalProperties": False,
}


class DocumentError(ValueError):
    pass


def _load(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _validate(doc: dict, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise DocumentError(f"{what} document invalid at {where}: {exc.message}") from exc


def parse_presentation(source: Union[str, Path, dict]) -> tuple[QuiverPresentation, int]:
    doc = _load(source)
    _validate(doc, ALGEBRA_SCHEMA, "algebra")
    pres = QuiverPresentation(
        vertices=tuple(doc["vertices"]),
        arrows=tuple((a["name"], a["from"], a["to"]) for a in doc["arrows"]),
        relations=tuple(tuple((t["coeff"], tuple(t["path"])) for t in rel) for rel in doc.get("relations", [])),
        char=doc["characteristic"],
    )
    return pres, int(doc.get("path_bound", 10))


def load_algebra(source: Union[str, Path, dict]) -> Algebra:
    pres, bound = parse_presentation(source)
    return build_algebra(pres, bound)


def presentation_document(pres: QuiverPresentation, path_bound: Optional[int] = None) -> dict:
    doc = {
        "characteristic": pres.char,
        "vertices": list(pres.vertices),
        "arrows": [{"name": a, "from": s, "to": t} for a, s, t in pres.arrows],
        "relations": [[{"coeff": c, "path": list(path)} for c, path in rel] for rel in pres.relations],
    }
    if path_bound is not None:
        doc["path_bound"] = path_bound
    return doc


def _entry(A: Algebra, terms: list[dict], t: int, s: int, where: str) -> np.ndarray:
    out = np.zeros(A.dim, dtype=np.int64)
    for term in terms:
        if ("path" in term) == ("vertex" in term):
            raise DocumentError(f"{where}: each term needs exactly one of 'path' or 'vertex'")
        try:
            if "vertex" in term:
                out += term["coeff"] * A.reduce_path(A.vertex_index(term["vertex"]), ())
            else:
                idx = [A.arrow_index(a) for a in term["path"]]
                if not idx:
                    raise DocumentError(f"{where}: empty path")
                out += term["coeff"] * A.reduce_path(A.arrow_src[idx[0]], idx)
        except ValueError as exc:
            raise DocumentError(f"{where}: unknown label in {term}") from exc
    out %= A.p
    mask = np.zeros(A.dim, dtype=bool)
    mask[A.slice(t, s)] = True
    if out[~mask].any():
        raise DocumentError(f"{where}: entry is not a combination of paths from the row vertex to the column vertex")
    return out


def parse_complex(A: Algebra, source: Union[str, Path, dict]) -> ProjComplex:
    doc = _load(source)
    _validate(doc, COMPLEX_SCHEMA, "complex")
    terms = {}
    for deg, labels in doc["degrees"].items():
        try:
            terms[int(deg)] = tuple(A.vertex_index(v) for v in labels)
        except ValueError as exc:
            raise DocumentError(f"degree {deg}: unknown vertex label") from exc
    diffs = {}
    for deg, rows in doc.get("differentials", {}).items():
        n = int(deg)
        src, tgt = terms.get(n, ()), terms.get(n + 1, ())
        if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
            raise DocumentError(f"differential {n}: expected {len(tgt)} rows of {len(src)} entries")
        d = zero_block(A, len(tgt), len(src))
        for t, row in enumerate(rows):
            for s, entry in enumerate(row):
                d[t, s] = _entry(A, entry, tgt[t], src[s], f"differential {n} entry ({t}, {s})")
        diffs[n] = d
    return ProjComplex(A, terms, diffs)


def complex_document(X: ProjComplex) -> dict:
    A = X.algebra
    names = A.presentation.vertices
    degrees = {str(n): [names[t] for t in labs] for n, labs in X.terms.items()}
    diffs = {}
    for n, d in X.diffs.items():
        rows = []
        for t in range(d.shape[0]):
            row = []
            for s in range(d.shape[1]):
                entry = []
                for b in np.flatnonzero(d[t, s]):
                    start, arrows = A.basis[b]
                    term = {"coeff": int(d[t, s, b])}
                    if arrows:
                        term["path"] = [A.presentation.arrows[k][0] for k in arrows]
                    else:
                        term["vertex"] = names[start]
                    entry.append(term)
                row.append(entry)
            rows.append(row)
        diffs[str(n)] = rows
    return {"degrees": degrees, "differentials": diffs}


# ---------------------------------------------------------------- report


@dataclass
class ComponentSummary:
    nodes_in_window: int
    representatives: int
    tree_class: Optional[str]
    periodicity: list  # [rep, n, m] meaning tau^n R = R[m]
    sup_l_p: int
    sup_l_i: int
    complete: bool


@dataclass
class TriangleStatus:
    rep: int
    end: str
    tau: list  # [rep, shift]
    middle_parts: list  # [[rep, shift], ...]
    stripped_pairs: int
    verified: Optional[bool]
    failures: list = field(default_factory=list)


@dataclass
class ReportDocument:
    verdict: str
    tree: Optional[str]
    note: str
    evidence: dict
    components: list
    triangles: list
    metadata: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        raw = json.loads(text)
        raw["components"] = [ComponentSummary(**c) for c in raw["components"]]
        raw["triangles"] = [TriangleStatus(**t) for t in raw["triangles"]]
        return cls(**raw)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def build_report(g, verdict, verification: Optional[dict], budget: int) -> ReportDocument:
    A = g.algebra
    comp = ComponentSummary(
        nodes_in_window=len(g.window_nodes()),
        representatives=len(g.reps),
        tree_class=verdict.tree,
        periodicity=[[r, n, m] for r, (n, m) in sorted(g.periodicity.items())],
        sup_l_p=verdict.sup_l_p,
        sup_l_i=verdict.sup_l_i,
        complete=g.complete,
    )
    tris = []
    for r in g.processed:
        t = g.triangles[r]
        parts = [[a, k] for (a, k), _ in g.part_maps.get(r, [])]
        rep = verification.get(r) if verification is not None else None
        tris.append(TriangleStatus(
            rep=r,
            end=g.reps[r].describe(),
            tau=list(g.tau[r]),
            middle_parts=parts,
            stripped_pairs=len(t.stripped),
            verified=None if rep is None else rep.ok,
            failures=[] if rep is None else list(rep.failures),
        ))
    meta = {
        "tool": "arknit",
        "version": __version__,
        "characteristic": A.p,
        "vertices": list(A.presentation.vertices),
        "algebra_dim": A.dim,
        "budget": budget,
        "steps": g.steps,
        "window": list(g.window),
        "anomalies": list(g.anomalies),
    }
    return ReportDocument(
        verdict=verdict.label(),
        tree=verdict.tree,
        note=verdict.note,
        evidence=_jsonable(verdict.evidence),
        components=[comp],
        triangles=tris,
        metadata=meta,
    )


# ---------------------------------------------------------------- DOT


def node_name(node) -> str:
    r, s = node
    return f"n{r}_{'m' if s < 0 else ''}{abs(s)}"


def node_label(g, node) -> str:
    r, s = node
    A = g.algebra
    names = A.presentation.vertices
    X = g.reps[r]
    degs = []
    for n, labs in X.label_multisets().items():
        degs.append(f"{n - s}: " + " ".join("P" + names[t] for t in labs))
    return f"R{r}[{s}]\\n" + "\\n".join(degs)


def to_dot(g) -> str:
    nodes = g.window_nodes()
    present = set(nodes)
    lines = ["digraph AR {", "  rankdir=LR;", "  node [shape=box, fontsize=10];"]
    for node in nodes:
        lines.append(f'  {node_name(node)} [label="{node_label(g, node)}"];')
    for node in nodes:
        for src, mult in g.arrows_into(node):
            if src in present:
                extra = f' [label="{mult}"]' if mult > 1 else ""
                lines.append(f"  {node_name(src)} -> {node_name(node)}{extra};")
    for node in nodes:
        t = g.tau_node(node)
        if t is not None and t in present:
            lines.append(f"  {node_name(node)} -> {node_name(t)} [style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
