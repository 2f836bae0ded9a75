"""JSON encoding of every value kind; outputs are byte-deterministic."""

from __future__ import annotations

import json

import numpy as np

from .algebra import (
    AlgebraMorphism,
    NablaAlgebra,
    StrongAlgebraCandidate,
    build_algebra,
)
from .completion import CompletedAlgebra
from .errors import ShapeError
from .kripke import FrameMorphism, KripkeFrame, build_frame
from .lattice import FiniteLattice, build_lattice


def lattice_to_json(lat: FiniteLattice) -> dict:
    # meet/join are never serialized; they are derived on load
    return {
        "kind": "lattice",
        "n": lat.n,
        "leq": [[bool(v) for v in row] for row in lat.leq],
    }


def lattice_from_json(obj: dict) -> FiniteLattice:
    _expect_kind(obj, "lattice")
    return build_lattice(np.array(obj["leq"], dtype=bool))


def algebra_to_json(alg: NablaAlgebra) -> dict:
    return {
        "kind": "nabla-algebra",
        "lattice": lattice_to_json(alg.lat),
        "nabla": [int(v) for v in alg.nabla],
        "arrow": [[int(v) for v in row] for row in alg.arrow],
    }


def algebra_from_json(obj: dict) -> NablaAlgebra:
    _expect_kind(obj, "nabla-algebra")
    lat = lattice_from_json(obj["lattice"])
    return build_algebra(lat, np.array(obj["nabla"], dtype=np.int64),
                         np.array(obj["arrow"], dtype=np.int64))


def strong_candidate_to_json(cand: StrongAlgebraCandidate) -> dict:
    return {
        "kind": "strong-candidate",
        "lattice": lattice_to_json(cand.lat),
        "arrow": [[int(v) for v in row] for row in cand.arrow],
    }


def strong_candidate_from_json(obj: dict) -> StrongAlgebraCandidate:
    _expect_kind(obj, "strong-candidate")
    lat = lattice_from_json(obj["lattice"])
    arrow = np.array(obj["arrow"], dtype=np.int64)
    if arrow.shape != (lat.n, lat.n):
        raise ShapeError("arrow table has the wrong shape")
    return StrongAlgebraCandidate(lat=lat, arrow=arrow)


def frame_to_json(frame: KripkeFrame) -> dict:
    return {
        "kind": "kripke-frame",
        "n": frame.n,
        "leq": [[bool(v) for v in row] for row in frame.leq],
        "r": [[bool(v) for v in row] for row in frame.r],
    }


def frame_from_json(obj: dict) -> KripkeFrame:
    _expect_kind(obj, "kripke-frame")
    return build_frame(np.array(obj["leq"], dtype=bool).reshape(obj["n"], obj["n"]),
                       np.array(obj["r"], dtype=bool).reshape(obj["n"], obj["n"]))


def morphism_to_json(m) -> dict:
    if isinstance(m, AlgebraMorphism):
        src, tgt = algebra_to_json(m.source), algebra_to_json(m.target)
        extra = {"heyting": bool(m.preserves_heyting)}
    else:
        src, tgt = frame_to_json(m.source), frame_to_json(m.target)
        extra = {"heyting": bool(m.heyting)}
    return {"kind": "morphism", "map": [int(v) for v in m.map],
            "source": src, "target": tgt, **extra}


def morphism_from_json(obj: dict, loader=None):
    """Source and target may be inline objects or path strings resolved by ``loader``."""
    _expect_kind(obj, "morphism")

    def resolve(value):
        if isinstance(value, str):
            if loader is None:
                raise ShapeError("morphism references a path but no loader was given")
            return loader(value)
        return value

    src = resolve(obj["source"])
    tgt = resolve(obj["target"])
    heyting = bool(obj.get("heyting", False))
    mapping = tuple(int(v) for v in obj["map"])
    kinds = (src.get("kind"), tgt.get("kind"))
    if kinds == ("nabla-algebra", "nabla-algebra"):
        return AlgebraMorphism(source=algebra_from_json(src),
                               target=algebra_from_json(tgt),
                               map=mapping, preserves_heyting=heyting)
    if kinds == ("kripke-frame", "kripke-frame"):
        return FrameMorphism(source=frame_from_json(src),
                             target=frame_from_json(tgt),
                             map=mapping, heyting=heyting)
    raise ShapeError(f"morphism endpoints must both be algebras or both frames, got {kinds}")


def completed_to_json(comp: CompletedAlgebra) -> dict:
    out = algebra_to_json(comp.algebra)
    out["embedding"] = [int(v) for v in comp.embedding]
    return out


def value_from_json(obj: dict, loader=None):
    kind = obj.get("kind")
    if kind == "lattice":
        return lattice_from_json(obj)
    if kind == "nabla-algebra":
        return algebra_from_json(obj)
    if kind == "kripke-frame":
        return frame_from_json(obj)
    if kind == "strong-candidate":
        return strong_candidate_from_json(obj)
    if kind == "morphism":
        return morphism_from_json(obj, loader=loader)
    raise ShapeError(f"unknown kind {kind!r}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _expect_kind(obj, kind: str) -> None:
    if not isinstance(obj, dict) or obj.get("kind") != kind:
        raise ShapeError(f"expected a {kind} object")
