"""Canonical JSON forms for every shared type.

Vector literal: {"field":"gf3","coeffs":[[0,"1"],[1,"2"]]} with indices
ascending and scalars as decimal strings ("a/b" for rationals).  Field names
are "gf<p>" for prime fields and "q<h>" for the rationals with enumeration
height h.  The same forms are used by files, reports, and transcripts.
"""

from __future__ import annotations

from typing import Any

from .algebra import FieldSpec, Vector, gf, rationals
from .blockseq import BlockSeq, Interval
from .fin import FinBlockSeq, FinSet, fin_set
from .filters import FilterBase, FinitePartition, IntervalSeq
from .games import GameKind, GameTranscript, Move, block_move, nat_move, vector_move

__all__ = [
    "encode_field",
    "decode_field",
    "encode_vector",
    "decode_vector",
    "encode_blockseq",
    "decode_blockseq",
    "encode_finset",
    "decode_finset",
    "encode_finblockseq",
    "decode_finblockseq",
    "encode_filterbase",
    "decode_filterbase",
    "encode_intervalseq",
    "decode_intervalseq",
    "encode_partition",
    "decode_partition",
    "encode_move",
    "decode_move",
    "encode_transcript",
    "decode_transcript",
]


def encode_field(f: FieldSpec) -> str:
    return f.name


def decode_field(name: str) -> FieldSpec:
    if name.startswith("gf"):
        return gf(int(name[2:]))
    if name.startswith("q"):
        return rationals(int(name[1:]) if len(name) > 1 else 2)
    raise ValueError(f"unknown field name {name!r}")


def encode_vector(v: Vector) -> dict:
    return {
        "field": encode_field(v.field),
        "coeffs": [[i, v.field.format_scalar(c)] for i, c in v.coeffs],
    }


def decode_vector(obj: dict, f: FieldSpec | None = None) -> Vector:
    f = decode_field(obj["field"]) if "field" in obj else f
    if f is None:
        raise ValueError("vector literal without a field")
    pairs = tuple((int(i), f.parse_scalar(str(s))) for i, s in obj["coeffs"])
    return Vector(f, pairs)


def encode_blockseq(X: BlockSeq) -> dict:
    return {
        "field": encode_field(X.field),
        "entries": [encode_vector(v) for v in X],
    }


def decode_blockseq(obj: dict) -> BlockSeq:
    f = decode_field(obj["field"])
    return BlockSeq(f, tuple(decode_vector(e, f) for e in obj["entries"]))


def encode_finset(s: FinSet) -> list[int]:
    return list(s.elements)


def decode_finset(obj: list) -> FinSet:
    return fin_set(int(e) for e in obj)


def encode_finblockseq(A: FinBlockSeq) -> list[list[int]]:
    return [encode_finset(a) for a in A]


def decode_finblockseq(obj: list) -> FinBlockSeq:
    return FinBlockSeq(tuple(decode_finset(a) for a in obj))


def encode_filterbase(B: FilterBase) -> dict:
    return {
        "field": encode_field(B.field),
        "truncation": B.truncation,
        "min_tail": B.min_tail,
        "generators": [encode_blockseq(g) for g in B.generators],
    }


def decode_filterbase(obj: dict) -> FilterBase:
    return FilterBase(
        field=decode_field(obj["field"]),
        truncation=int(obj["truncation"]),
        generators=tuple(decode_blockseq(g) for g in obj["generators"]),
        min_tail=int(obj.get("min_tail", 1)),
    )


def encode_intervalseq(I: IntervalSeq) -> dict:
    return {"intervals": [[J.lo, J.hi] for J in I]}


def decode_intervalseq(obj) -> IntervalSeq:
    pairs = obj["intervals"] if isinstance(obj, dict) else obj
    return IntervalSeq(tuple(Interval(int(lo), int(hi)) for lo, hi in pairs))


def encode_partition(P: FinitePartition) -> dict:
    return {"n": P.n, "cells": [list(c) for c in P.cells]}


def decode_partition(obj: dict) -> FinitePartition:
    return FinitePartition(
        n=int(obj["n"]),
        cells=tuple(tuple(sorted(int(e) for e in c)) for c in obj["cells"]),
    )


def encode_move(m: Move) -> dict:
    if m.n is not None:
        return {"side": "I", "n": m.n}
    if m.Y is not None:
        return {"side": "I", "Y": encode_blockseq(m.Y)}
    return {"side": "II", "v": encode_vector(m.v)}


def decode_move(obj: dict, f: FieldSpec) -> Move:
    if obj["side"] == "I":
        if "n" in obj:
            return nat_move(int(obj["n"]))
        return block_move(decode_blockseq(obj["Y"]))
    return vector_move(decode_vector(obj["v"], f))


def encode_transcript(t: GameTranscript) -> dict:
    out: dict[str, Any] = {
        "kind": t.kind.value,
        "ambient": encode_blockseq(t.ambient),
        "moves": [encode_move(m) for m in t.moves],
    }
    if t.base is not None:
        out["base"] = encode_filterbase(t.base)
    return out


def decode_transcript(obj: dict) -> GameTranscript:
    ambient = decode_blockseq(obj["ambient"])
    base = decode_filterbase(obj["base"]) if "base" in obj else None
    moves = tuple(decode_move(m, ambient.field) for m in obj["moves"])
    return GameTranscript(GameKind(obj["kind"]), ambient, moves, base)
