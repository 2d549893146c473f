"""Canonical JSON documents for every value the package reads or writes.

Output is always ``json.dumps(..., sort_keys=True)`` with lists in ascending id
order, so equal values serialize to identical bytes.
"""
from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from .adversary import AdversaryTranscript, StageRecord
from .classify import (BadPathWitness, BadStarWitness, FullnessCertificate, GreedyCertificate, LengthSet)
from .core import (Coloring, EdgeViolation, GraphError, HalfEdgeGraph, Incomplete, Lcl, Verdict, VertexViolation,
                   edge_key, make_graph, multiset)
from .homproblems import SimpleGraph
from .toast import Piece, Toast


class FormatError(ValueError):
    pass


class LclSyntaxError(FormatError):
    """Malformed JSON; carries the 1-based line and column."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


class SemanticError(FormatError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise LclSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def _need(doc: Any, keys: Iterable[str], what: str) -> dict:
    if not isinstance(doc, dict):
        raise SemanticError(f"{what} document must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise SemanticError(f"{what} document lacks {', '.join(missing)}")
    return doc


def _int(v: Any, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SemanticError(f"{what} must be an integer, got {v!r}")
    return v


def _list(v: Any, what: str) -> list:
    if not isinstance(v, list):
        raise SemanticError(f"{what} must be a list")
    return v


def _str(v: Any, what: str) -> str:
    if not isinstance(v, str):
        raise SemanticError(f"{what} must be a string, got {v!r}")
    return v


# -- lcl ---------------------------------------------------------------------


def lcl_to_doc(lcl: Lcl) -> dict:
    return {"delta": lcl.delta, "sigma": list(lcl.sigma),
            "vertex_constraints": [lcl.names(m) for m in lcl.vertex_constraints],
            "edge_constraints": [lcl.names(m) for m in lcl.edge_constraints]}


def lcl_from_doc(doc: Any) -> Lcl:
    _need(doc, ("delta", "sigma", "vertex_constraints", "edge_constraints"), "LCL")
    delta = _int(doc["delta"], "delta")
    sigma = [_str(s, "label") for s in _list(doc["sigma"], "sigma")]
    vcs = [[_str(s, "label") for s in _list(m, "vertex constraint")]
           for m in _list(doc["vertex_constraints"], "vertex_constraints")]
    ecs = [[_str(s, "label") for s in _list(m, "edge constraint")]
           for m in _list(doc["edge_constraints"], "edge_constraints")]
    try:
        return Lcl.from_names(delta, sigma, vcs, ecs)
    except (ValueError, KeyError) as exc:
        raise SemanticError(str(exc)) from None


def serialize_lcl(lcl: Lcl) -> str:
    return dumps(lcl_to_doc(lcl))


def parse_lcl(text: str) -> Lcl:
    return lcl_from_doc(loads(text))


# -- graphs and colorings ----------------------------------------------------


def graph_to_doc(graph: HalfEdgeGraph) -> dict:
    return {"delta": graph.delta, "vertices": list(graph.vertices),
            "edges": [{"id": e, "ends": sorted(graph.ends[e])} for e in graph.edges]}


def graph_from_doc(doc: Any) -> HalfEdgeGraph:
    _need(doc, ("delta", "vertices", "edges"), "graph")
    delta = _int(doc["delta"], "delta")
    vertices = [_int(v, "vertex id") for v in _list(doc["vertices"], "vertices")]
    records = []
    for rec in _list(doc["edges"], "edges"):
        _need(rec, ("id", "ends"), "edge")
        records.append((_str(rec["id"], "edge id"),
                        [_int(v, "endpoint") for v in _list(rec["ends"], "ends")]))
    try:
        return make_graph(vertices, records, delta)
    except GraphError as exc:
        raise SemanticError(str(exc)) from None


def serialize_graph(graph: HalfEdgeGraph) -> str:
    return dumps(graph_to_doc(graph))


def parse_graph(text: str) -> HalfEdgeGraph:
    return graph_from_doc(loads(text))


def coloring_to_doc(coloring: Mapping, lcl: Lcl) -> dict:
    items = sorted(coloring.items(), key=lambda kv: (kv[0][0], edge_key(kv[0][1])))
    return {"assignments": [{"vertex": x, "edge": e, "label": lcl.sigma[s]} for (x, e), s in items]}


def coloring_from_doc(doc: Any, lcl: Lcl) -> Coloring:
    _need(doc, ("assignments",), "coloring")
    out: Coloring = {}
    for rec in _list(doc["assignments"], "assignments"):
        _need(rec, ("vertex", "edge", "label"), "assignment")
        x = _int(rec["vertex"], "vertex")
        e = _str(rec["edge"], "edge")
        name = _str(rec["label"], "label")
        if name not in lcl.sigma:
            raise SemanticError(f"label {name!r} not in sigma")
        if (x, e) in out:
            raise SemanticError(f"half edge ({x}, {e}) assigned twice")
        out[x, e] = lcl.label(name)
    return out


def serialize_coloring(coloring: Mapping, lcl: Lcl) -> str:
    return dumps(coloring_to_doc(coloring, lcl))


def parse_coloring(text: str, lcl: Lcl) -> Coloring:
    return coloring_from_doc(loads(text), lcl)


# -- certificates and witnesses ----------------------------------------------


def _labels_from(names: Any, lcl: Lcl, what: str) -> tuple[int, ...]:
    out = []
    for n in _list(names, what):
        n = _str(n, what)
        if n not in lcl.sigma:
            raise SemanticError(f"label {n!r} not in sigma")
        out.append(lcl.label(n))
    return tuple(out)


def _vertex_multiset(names: Any, lcl: Lcl) -> tuple[int, ...]:
    m = multiset(_labels_from(names, lcl, "multiset"))
    if m not in lcl.vset:
        raise SemanticError(f"{lcl.names(m)} is not a vertex constraint")
    return m


def certificate_to_doc(cert, lcl: Lcl) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, FullnessCertificate):
        return {"v_prime": [lcl.names(m) for m in cert.v_prime], "l": cert.l}
    if isinstance(cert, GreedyCertificate):
        return {"sigma_prime": [lcl.sigma[s] for s in sorted(cert.sigma_prime)]}
    if isinstance(cert, BadPathWitness):
        g = cert.good
        return {"a": lcl.names(cert.a), "alpha": lcl.sigma[cert.alpha],
                "b": lcl.names(cert.b), "beta": lcl.sigma[cert.beta],
                "bad": {"preperiod": g.preperiod, "period": g.period,
                        "good_prefix": list(g.good_prefix), "good_residues": list(g.good_residues)}}
    if isinstance(cert, BadStarWitness):
        return {"k": cert.k, "alphas": [lcl.sigma[a] for a in cert.alphas]}
    raise TypeError(f"not a certificate: {cert!r}")


def certificate_from_doc(doc: Any, lcl: Lcl):
    if doc is None:
        return None
    if not isinstance(doc, dict):
        raise SemanticError("certificate must be a JSON object")
    keys = set(doc)
    if keys == {"v_prime", "l"}:
        vp = tuple(sorted({_vertex_multiset(m, lcl) for m in _list(doc["v_prime"], "v_prime")}))
        return FullnessCertificate(vp, _int(doc["l"], "l"))
    if keys == {"sigma_prime"}:
        return GreedyCertificate(tuple(sorted(set(_labels_from(doc["sigma_prime"], lcl, "sigma_prime")))))
    if keys == {"a", "alpha", "b", "beta", "bad"}:
        bad = _need(doc["bad"], ("preperiod", "period", "good_prefix", "good_residues"), "length set")
        good = LengthSet(_int(bad["preperiod"], "preperiod"), _int(bad["period"], "period"),
                         tuple(bool(v) for v in _list(bad["good_prefix"], "good_prefix")),
                         tuple(bool(v) for v in _list(bad["good_residues"], "good_residues")))
        alpha, = _labels_from([doc["alpha"]], lcl, "alpha")
        beta, = _labels_from([doc["beta"]], lcl, "beta")
        return BadPathWitness(_vertex_multiset(doc["a"], lcl), alpha,
                              _vertex_multiset(doc["b"], lcl), beta, good)
    if keys == {"k", "alphas"}:
        alphas = _labels_from(doc["alphas"], lcl, "alphas")
        k = _int(doc["k"], "k")
        if k != len(alphas):
            raise SemanticError("k must equal the number of alphas")
        return BadStarWitness(k, alphas)
    raise SemanticError(f"unrecognized certificate keys {sorted(keys)}")


def serialize_certificate(cert, lcl: Lcl) -> str:
    return dumps(certificate_to_doc(cert, lcl))


def parse_certificate(text: str, lcl: Lcl):
    return certificate_from_doc(loads(text), lcl)


# -- toasts ------------------------------------------------------------------


def toast_to_doc(toast: Toast) -> dict:
    return {"l": toast.l, "pieces": [{"id": p.id, "vertices": sorted(p.vertices), "stage": p.stage}
                                     for p in sorted(toast.pieces, key=lambda p: p.id)]}


def toast_from_doc(doc: Any) -> Toast:
    _need(doc, ("l", "pieces"), "toast")
    pieces = []
    for rec in _list(doc["pieces"], "pieces"):
        _need(rec, ("id", "vertices", "stage"), "piece")
        pieces.append(Piece(_int(rec["id"], "piece id"),
                            frozenset(_int(v, "vertex") for v in _list(rec["vertices"], "vertices")),
                            _int(rec["stage"], "stage")))
    return Toast(_int(doc["l"], "l"), tuple(sorted(pieces, key=lambda p: p.id)))


def serialize_toast(toast: Toast) -> str:
    return dumps(toast_to_doc(toast))


def parse_toast(text: str) -> Toast:
    return toast_from_doc(loads(text))


# -- simple graphs and homomorphisms -----------------------------------------


def simple_graph_to_doc(g: SimpleGraph) -> dict:
    order = {v: i for i, v in enumerate(g.vertices)}
    edges = sorted((sorted(e, key=order.__getitem__) for e in g.edges),
                   key=lambda e: (order[e[0]], order[e[1]]))
    return {"vertices": [str(v) for v in g.vertices], "edges": [[str(x), str(y)] for x, y in edges]}


def simple_graph_from_doc(doc: Any) -> SimpleGraph:
    _need(doc, ("vertices", "edges"), "simple graph")
    vertices = [_str(v, "vertex") for v in _list(doc["vertices"], "vertices")]
    edges = []
    for e in _list(doc["edges"], "edges"):
        e = [_str(v, "endpoint") for v in _list(e, "edge")]
        if len(e) != 2:
            raise SemanticError(f"edge {e} must have two endpoints")
        edges.append(e)
    try:
        return SimpleGraph.from_edges(vertices, edges)
    except ValueError as exc:
        raise SemanticError(str(exc)) from None


def serialize_simple_graph(g: SimpleGraph) -> str:
    return dumps(simple_graph_to_doc(g))


def parse_simple_graph(text: str) -> SimpleGraph:
    return simple_graph_from_doc(loads(text))


def serialize_hom(mapping: Mapping) -> str:
    return dumps({"map": {str(k): str(v) for k, v in mapping.items()}})


def parse_hom(text: str) -> dict[str, str]:
    doc = _need(loads(text), ("map",), "homomorphism")
    if not isinstance(doc["map"], dict):
        raise SemanticError("map must be an object")
    return {k: _str(v, "image") for k, v in doc["map"].items()}


# -- adversary transcripts ---------------------------------------------------


def _record_to_doc(rec: StageRecord) -> dict:
    out = {"type": "stage", "stage": rec.stage, "case": rec.case,
           "added_vertices": rec.added_vertices,
           "added_incidences": [[x, e] for x, e in rec.added_incidences],
           "N": rec.N, "tracked": rec.tracked, "interesting_count": rec.interesting_count,
           "pending": rec.pending}
    if rec.objects is not None:
        out["objects"] = rec.objects
    if rec.details:
        out["details"] = rec.details
    return out


def transcript_lines(t: AdversaryTranscript) -> list[str]:
    """One JSON line per stage, then the outcome line."""
    lines = [json.dumps({"type": "header", "mode": t.mode, "n0": t.n0, "max_stages": t.max_stages,
                         "lcl": lcl_to_doc(t.lcl)}, sort_keys=True)]
    lines += [json.dumps(_record_to_doc(r), sort_keys=True) for r in t.stages]
    o = t.outcome
    witness = o.witness
    if witness is not None:
        witness = {k: (verdict_to_doc(v, t.lcl) if isinstance(v, Verdict) else v) for k, v in witness.items()}
    lines.append(json.dumps({"type": "outcome", "kind": o.kind, "stage": o.stage, "witness": witness,
                             "pending": [[x, e] for x, e in o.pending]}, sort_keys=True))
    return lines


def serialize_transcript(t: AdversaryTranscript) -> str:
    return "\n".join(transcript_lines(t)) + "\n"


def parse_transcript(text: str) -> tuple[dict, list[StageRecord], dict]:
    """Header, stage records and outcome of a JSON-lines transcript."""
    header, records, outcome = None, [], None
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LclSyntaxError(exc.msg, n, exc.colno) from None
        kind = doc.get("type") if isinstance(doc, dict) else None
        if kind == "header":
            header = doc
        elif kind == "stage":
            records.append(StageRecord(doc["stage"], doc["case"], doc["added_vertices"],
                                       [tuple(h) for h in doc["added_incidences"]], doc["N"],
                                       doc["tracked"], doc["interesting_count"], doc["pending"],
                                       doc.get("objects"), doc.get("details", {})))
        elif kind == "outcome":
            outcome = doc
        else:
            raise SemanticError(f"line {n}: unknown record type {kind!r}")
    if header is None or outcome is None:
        raise SemanticError("transcript needs a header and an outcome line")
    return header, records, outcome


# -- verdicts ----------------------------------------------------------------


def verdict_to_doc(verdict: Verdict, lcl: Lcl) -> dict:
    out = []
    for v in verdict.violations:
        if isinstance(v, EdgeViolation):
            out.append({"kind": "edge", "edge": v.edge, "pair": lcl.names(v.pair)})
        elif isinstance(v, VertexViolation):
            out.append({"kind": "vertex", "vertex": v.vertex, "star": lcl.names(v.observed)})
        elif isinstance(v, Incomplete):
            out.append({"kind": "incomplete", "half_edges": [[x, e] for x, e in v.half_edges]})
    return {"ok": verdict.ok, "violations": out}
