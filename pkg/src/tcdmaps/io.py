"""
JSON documents for graphs, maps and move scripts.

Rationals are written as ``"p/q"`` strings and never as floats, so every
document round-trips exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .btb import BtbGraph
from .errors import InvalidGraph, InvalidMoveSite, NotTcdMap
from .moves import MoveSite
from .projective import Hyperplane, ProjPoint
from .tcd import TcdMap


def fraction_str(x) -> str:
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)


def parse_fraction(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an integer; floats are refused."""
    if isinstance(s, bool) or isinstance(s, float):
        raise ValueError("rationals must be strings or integers, got %r" % (s,))
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError("not a rational: %r" % (s,))
    try:
        f = Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError("not a rational: %r" % (s,)) from e
    if "." in s or "e" in s.lower():
        raise ValueError("decimal notation is not exact here: %r" % (s,))
    return f


def vector_strs(v) -> list:
    return [fraction_str(x) for x in v]


def parse_vector(v) -> list:
    if not isinstance(v, list):
        raise ValueError("expected a list of rational strings, got %r" % (v,))
    return [parse_fraction(x) for x in v]


# ---------------------------------------------------------------- graphs


def graph_to_document(g: BtbGraph) -> dict:
    whites, blacks, cactus = g.records()
    return {
        "n": g.n,
        "cactus": cactus,
        "whites": [{"id": w, "boundary": i, "nbrs": list(nb)} for w, i, nb in whites],
        "blacks": [{"id": b, "nbrs": list(nb)} for b, nb in blacks],
    }


def _require(doc: dict, key: str, kind: type, err=InvalidGraph):
    if not isinstance(doc, dict) or key not in doc:
        raise err("document is missing key %r" % key, key)
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise err("key %r has the wrong type" % key, {"key": key, "expected": kind.__name__})
    return val


def graph_from_document(doc: dict) -> BtbGraph:
    n = _require(doc, "n", int)
    whites = _require(doc, "whites", list)
    blacks = _require(doc, "blacks", list)
    cactus = doc.get("cactus")
    wrec, brec = [], []
    wids, bids = set(), set()
    for w in whites:
        wid = str(_require(w, "id", (str, int)))
        i = w.get("boundary")
        if i is not None and (not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= n):
            raise InvalidGraph("boundary index out of range", {"white": wid, "boundary": i})
        nb = [str(b) for b in _require(w, "nbrs", list)]
        if wid in wids:
            raise InvalidGraph("duplicate white id", wid)
        wids.add(wid)
        wrec.append((wid, i, nb))
    for b in blacks:
        bid = str(_require(b, "id", (str, int)))
        nb = [str(w) for w in _require(b, "nbrs", list)]
        if bid in bids or bid in wids:
            raise InvalidGraph("duplicate black id", bid)
        bids.add(bid)
        brec.append((bid, nb))
    for wid, _, nb in wrec:
        for b in nb:
            if b not in bids:
                raise InvalidGraph("white refers to an unknown black", {"white": wid, "black": b})
    for bid, nb in brec:
        for w in nb:
            if w not in wids:
                raise InvalidGraph("black refers to an unknown white", {"black": bid, "white": w})
    return BtbGraph.from_records(n, wrec, brec, cactus)


# ---------------------------------------------------------------- maps


@dataclass
class MapDocument:
    tmap: TcdMap
    hyperplane: Hyperplane | None = None
    seed: Any = None


def map_to_document(tmap: TcdMap, hyperplane: Hyperplane | None = None, seed=None,
                    graph_path: str | None = None) -> dict:
    doc = {
        "graph": graph_path if graph_path is not None else graph_to_document(tmap.graph),
        "d": tmap.d,
        "points": {w: vector_strs(p.coords) for w, p in tmap.points.items()},
    }
    if hyperplane is not None:
        doc["hyperplane"] = vector_strs(hyperplane.coords)
    if seed is not None:
        doc["seed"] = seed
    return doc


def map_from_document(doc: dict, base_dir: str | None = None) -> MapDocument:
    if not isinstance(doc, dict) or "graph" not in doc:
        raise NotTcdMap("map document is missing key 'graph'", "graph")
    gdoc = doc["graph"]
    if isinstance(gdoc, str):
        path = gdoc if base_dir is None or os.path.isabs(gdoc) else os.path.join(base_dir, gdoc)
        gdoc = load_json(path)
    g = graph_from_document(gdoc)
    d = _require(doc, "d", int, NotTcdMap)
    raw = _require(doc, "points", dict, NotTcdMap)
    try:
        pts = {str(w): ProjPoint(parse_vector(v)) for w, v in raw.items()}
        h = Hyperplane(parse_vector(doc["hyperplane"])) if doc.get("hyperplane") is not None else None
    except ValueError as e:
        raise NotTcdMap(str(e)) from e
    return MapDocument(TcdMap(g, d, pts), h, doc.get("seed"))


def hyperplane_from_arg(s: str, d: int) -> Hyperplane:
    """``"1,0,-1/2"`` or a JSON list of rational strings."""
    s = s.strip()
    vals = json.loads(s) if s.startswith("[") else s.split(",")
    h = Hyperplane(parse_vector([str(x).strip() for x in vals]))
    if h.dim != d:
        raise ValueError("hyperplane has %d coordinates, expected %d" % (h.dim + 1, d + 1))
    return h


# ---------------------------------------------------------------- scripts


def script_from_document(doc) -> list:
    if not isinstance(doc, list):
        raise InvalidMoveSite("move script must be a list", None)
    out = []
    for step in doc:
        if not isinstance(step, dict) or step.get("kind") not in ("resplit", "spider") or "target" not in step:
            raise InvalidMoveSite("malformed move script entry", step)
        out.append(MoveSite(step["kind"], str(step["target"])))
    return out


def script_to_document(sites) -> list:
    return [s.to_dict() for s in sites]


# ---------------------------------------------------------------- files


def to_jsonable(x):
    """Recursively turn fractions, points and tuples into JSON values."""
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, (ProjPoint, Hyperplane)):
        return vector_strs(x.coords)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    return x


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2)


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def save_json(obj, path: str):
    with open(path, "w") as fh:
        fh.write(dumps(obj) + "\n")


def load_graph(path: str) -> BtbGraph:
    doc = load_json(path)
    if isinstance(doc, dict) and "points" in doc:
        return map_from_document(doc, os.path.dirname(path)).tmap.graph
    return graph_from_document(doc)


def load_map(path: str) -> MapDocument:
    return map_from_document(load_json(path), os.path.dirname(path))
