"""JSON file formats.  Rationals are written as ``"num/den"`` strings
(``"num"`` when the denominator is 1)."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .adversary import AdversaryInstance, Check, build_chain
from .errors import InvalidInput
from .geometry import Line, Point, as_rational, format_rational
from .levels import LevelChain, ShallowLineClass
from .partition import CrossingCertificate, KPartition
from .treecolor import MultiColoredTree


def rat(s) -> Fraction:
    try:
        return as_rational(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidInput(f"not a rational: {s!r}") from exc


def point_to_json(p: Point) -> list[str]:
    return [format_rational(p.x), format_rational(p.y)]


def point_from_json(obj) -> Point:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise InvalidInput(f"bad point {obj!r}")
    return Point(rat(obj[0]), rat(obj[1]))


def line_to_json(ln: Line) -> dict:
    return {"slope": format_rational(ln.slope), "intercept": format_rational(ln.intercept)}


def line_from_json(obj) -> Line:
    return Line(rat(obj["slope"]), rat(obj["intercept"]))


def dump(obj, path) -> None:
    text = json.dumps(obj, indent=1, sort_keys=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


# instances

def instance_to_json(inst: AdversaryInstance) -> dict:
    return {
        "m": inst.m,
        "beta": inst.beta,
        "k": inst.k,
        "k_prime": inst.k_prime,
        "n_target": inst.n_target,
        "eps": format_rational(inst.eps),
        "lines": [dict(line_to_json(ln), j=j, t=t, c=c)
                  for ln, (j, t, c) in zip(inst.lines, inst.provenance)],
        "points": [point_to_json(p) for p in inst.points],
        "padding": [point_to_json(p) for p in inst.padding],
        "checks": [c.as_dict() for c in inst.checks],
    }


def instance_from_json(obj: dict) -> AdversaryInstance:
    try:
        lines = [line_from_json(d) for d in obj["lines"]]
        prov = [(int(d["j"]), int(d["t"]), int(d["c"])) for d in obj["lines"]]
        return AdversaryInstance(
            m=int(obj["m"]), beta=int(obj["beta"]), k=int(obj["k"]), k_prime=int(obj["k_prime"]),
            eps=rat(obj.get("eps", "1/8")), chain=build_chain(int(obj["m"])),
            lines=lines, provenance=prov,
            points=[point_from_json(p) for p in obj["points"]],
            padding=[point_from_json(p) for p in obj.get("padding", [])],
            n_target=obj.get("n_target"),
            checks=[Check(c["name"], bool(c["passed"]), c.get("detail", "")) for c in obj.get("checks", [])],
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed instance file: {exc}") from exc


# partitions

def partition_to_json(part: KPartition) -> dict:
    return {"parts": [list(p) for p in part.parts],
            "triangles": [[point_to_json(v) for v in tri] for tri in part.triangles]}


def partition_from_json(obj: dict) -> KPartition:
    try:
        parts = [[int(i) for i in p] for p in obj["parts"]]
        tris = []
        for tri in obj["triangles"]:
            if len(tri) != 3:
                raise InvalidInput("a triangle needs three vertices")
            tris.append(tuple(point_from_json(v) for v in tri))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed partition file: {exc}") from exc
    return KPartition(parts, tris)


def certificate_to_json(cert: CrossingCertificate) -> dict:
    return {"value": cert.value, "witness": line_to_json(cert.witness),
            "below_count": cert.below_count, "crossed": sorted(cert.crossed),
            "classes": cert.classes}


# trees

def tree_to_json(tree: MultiColoredTree) -> dict:
    return {"beta": tree.beta, "colors": [tree.node_colors(i) for i in range(tree.size)]}


def tree_from_json(obj: dict) -> MultiColoredTree:
    try:
        return MultiColoredTree(int(obj["beta"]), [list(c) for c in obj["colors"]])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed tree file: {exc}") from exc


# levels and classes

def level_to_json(level: LevelChain) -> dict:
    return {
        "k": level.k,
        "lines": [line_to_json(ln) for ln in level.lines],
        "polyline": [point_to_json(p) for p in level.polyline],
        "edge_lines": level.edge_lines,
        "hull": [point_to_json(p) for p in level.hull],
        "conflicts": {str(i): sorted(c) for i, c in sorted(level.conflicts.items())},
        "filtered": level.filtered,
        "clip": [format_rational(level.clip[0]), format_rational(level.clip[1])],
        "note": "first and last polyline points clip the unbounded rays at the clip abscissae",
    }


def classes_to_json(classes: list[ShallowLineClass]) -> list[dict]:
    return [{"representative": line_to_json(c.representative),
             "below_points": sorted(c.below_points),
             "sites_below": sorted(c.sites_below),
             "sites_on": sorted(c.sites_on)} for c in classes]


def points_from_json(obj) -> list[Point]:
    if isinstance(obj, dict):
        obj = obj.get("points", [])
    return [point_from_json(p) for p in obj]
