"""JSON encodings of every input and output type.

Rationals are written as ``"p/q"`` strings (integers as plain strings of
digits), infinity as ``"inf"``.  Decoders accept ints and such strings.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import PreconditionError
from .johnstone import OMEGA, JOpen, JPoint, NcofOpen, jpoint
from .poset import ClosedSetFin, FinitePoset, UpSetFin, covers, parse_poset
from .scalar import INF, fmt, rational, scalar
from .smyth import (AscendingChain, ChainRl, CompactCandidate, CompactnessVerdict, FiniteBlock,
                    MissingInfimum, SmythElem, SmythOpen)
from .sorgenfrey import CountableRlOpen, RlOpen, TailFamily, normalize
from .valuation import DiscreteDeclared, SPACE_J, SPACE_NCOF


class ParseError(PreconditionError):
    pass


_BARE = re.compile(r'(?<!["\w/])(-?\d+/\d+)(?!["\w/])')
_BARE_WORD = re.compile(r'(?<!["\w])(inf|w|omega)(?!["\w])')


def loads(text: str):
    """``json.loads`` that also accepts bare ``p/q`` rationals and bare ``inf`` / ``w``."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    fixed = _BARE_WORD.sub(r'"\1"', _BARE.sub(r'"\1"', text))
    try:
        return json.loads(fixed)
    except json.JSONDecodeError as exc:
        raise ParseError(f"cannot parse input as JSON: {exc}") from None


def dumps(obj, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=False)


def q(x) -> str:
    return fmt(x)


def read_scalar(x):
    try:
        return scalar(x)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def read_rational(x) -> Fraction:
    try:
        return rational(x)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


# -- finite posets ----------------------------------------------------------

def poset_to_json(P: FinitePoset) -> dict:
    return {"points": [str(x) for x in P.elements],
            "leq": [[str(a), str(b)] for a, b in covers(P)]}


def poset_from_json(obj, max_points: int = 16) -> FinitePoset:
    if isinstance(obj, str):
        return parse_poset(obj, max_points=max_points)
    try:
        pts = [str(x) for x in obj["points"]]
        leq = [(str(a), str(b)) for a, b in obj.get("leq", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad poset: {exc}") from None
    return FinitePoset(pts, leq, max_points=max_points)


def points_to_json(P: FinitePoset, mask: int) -> list:
    return [str(x) for x in P.elements if mask >> P.index[x] & 1]


def upset_to_json(U: UpSetFin) -> list:
    return points_to_json(U.space, U.mask)


def closed_to_json(C: ClosedSetFin) -> list:
    return points_to_json(C.space, C.mask)


# -- Johnstone's dcpo and the cofinite naturals --------------------------------

def jpoint_to_json(p: JPoint) -> list:
    return [p.col, "w" if p.height is OMEGA else p.height]


def jpoint_from_json(obj) -> JPoint:
    try:
        c, h = obj
        return jpoint(int(c), h if isinstance(h, str) else int(h))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad J point {obj!r}: {exc}") from None


def _thr_out(t):
    return "x" if t is None else t


def _thr_in(t):
    return None if t is None or t == "x" else int(t)


def jopen_to_json(U: JOpen) -> dict:
    """``{"overrides": [[col, thr|"x"], ...], "cutoff": n, "tail": thr|"x"}``."""
    return {"overrides": [[c, _thr_out(t)] for c, t in U.overrides], "cutoff": U.cutoff,
            "tail": _thr_out(U.tail)}


def jopen_from_json(obj) -> JOpen:
    try:
        ov = obj.get("overrides", [])
        pairs = ov.items() if isinstance(ov, dict) else ov
        U = JOpen.make({int(c): _thr_in(t) for c, t in pairs}, _thr_in(obj.get("tail")))
    except (AttributeError, TypeError, ValueError) as exc:
        raise ParseError(f"bad J open: {exc}") from None
    if "cutoff" in obj and int(obj["cutoff"]) < U.cutoff:
        # cutoff only bounds the override columns; a larger one is harmless
        raise ParseError("cutoff smaller than the largest override column")
    return U


def ncof_to_json(U: NcofOpen):
    return None if U.is_empty() else {"excluded": sorted(U.excluded)}


def ncof_from_json(obj) -> NcofOpen:
    if obj is None:
        return NcofOpen.empty()
    return NcofOpen.cofinite(int(i) for i in obj.get("excluded", []))


def discrete_to_json(nu: DiscreteDeclared) -> list:
    if nu.space == SPACE_J:
        items = sorted(nu.as_dict().items(), key=lambda kv: (kv[0].is_maximal, kv[0].col,
                                                          0 if kv[0].is_maximal else kv[0].height))
        return [[jpoint_to_json(p), q(c)] for p, c in items]
    return [[i, q(c)] for i, c in sorted(nu.as_dict().items())]


def discrete_j_from_json(obj) -> DiscreteDeclared:
    terms = [(read_scalar(c), jpoint_from_json(p)) for p, c in obj]
    return DiscreteDeclared([(c, p) for c, p in terms if c != 0], SPACE_J)


def discrete_ncof_from_json(obj) -> DiscreteDeclared:
    terms = [(read_scalar(c), int(i)) for i, c in obj]
    return DiscreteDeclared([(c, i) for c, i in terms if c != 0], SPACE_NCOF)


# -- Sorgenfrey line and Smyth powerdomain -------------------------------------

def rlopen_to_json(U: RlOpen) -> list:
    return [[q(a), q(b)] for a, b in U.intervals]


def rlopen_from_json(obj) -> RlOpen:
    try:
        pairs = [(read_rational(a), read_rational(b)) for a, b in obj]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad Sorgenfrey open: {exc}") from None
    for a, b in pairs:
        if not a < b:
            raise ParseError(f"interval [{a},{b}[ needs a < b")
    return normalize(pairs)


def chain_to_json(ch: ChainRl) -> dict:
    return {"limit": q(ch.limit), "c": q(ch.c), "q": q(ch.q), "dir": ch.direction,
            "include_limit": ch.include_limit, "prefix": [q(x) for x in ch.prefix]}


def chain_from_json(obj) -> ChainRl:
    try:
        return ChainRl(read_rational(obj["limit"]), read_rational(obj["c"]), read_rational(obj["q"]),
                       obj.get("dir", "descending"), bool(obj.get("include_limit", True)),
                       tuple(read_rational(x) for x in obj.get("prefix", [])))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad chain: {exc}") from None


def candidate_to_json(cand: CompactCandidate) -> dict:
    blocks = []
    for blk in cand.blocks:
        if isinstance(blk, FiniteBlock):
            blocks.append({"finite": [q(x) for x in blk.points]})
        else:
            blocks.append({"chain": chain_to_json(blk)})
    return {"blocks": blocks}


def candidate_from_json(obj) -> CompactCandidate:
    if isinstance(obj, list):
        obj = {"blocks": [{"finite": obj}]}
    blocks = []
    for b in obj.get("blocks", []):
        if "finite" in b:
            blocks.append(FiniteBlock(tuple(read_rational(x) for x in b["finite"])))
        elif "chain" in b:
            blocks.append(chain_from_json(b["chain"]))
        else:
            raise ParseError(f"unknown block {b!r}")
    return CompactCandidate(tuple(blocks))


def smyth_from_json(obj) -> SmythElem:
    return SmythElem(candidate_from_json(obj))


def smyth_open_to_json(W: SmythOpen) -> list:
    return [rlopen_to_json(U) for U in W.boxes]


def smyth_open_from_json(obj) -> SmythOpen:
    return SmythOpen.of(rlopen_from_json(U) for U in obj)


def countable_to_json(V: CountableRlOpen) -> dict:
    return {"finite": rlopen_to_json(V.finite_part),
            "tails": [{"chain": chain_to_json(tf.chain), "start": tf.start, "scale": q(tf.scale),
                       "stride": tf.stride, "sum": q(tf.total())} for tf in V.tails]}


def countable_from_json(obj) -> CountableRlOpen:
    tails = tuple(TailFamily(chain_from_json(t["chain"]), int(t["start"]), read_rational(t["scale"]),
                             int(t.get("stride", 1))) for t in obj.get("tails", []))
    return CountableRlOpen(rlopen_from_json(obj.get("finite", [])), tails)


def verdict_to_json(v: CompactnessVerdict, cover_pieces: int = 4) -> dict:
    out = {"status": v.status}
    r = v.reason
    if isinstance(r, MissingInfimum):
        out["reason"] = {"kind": "MissingInfimum", "chain_index": r.chain_index, "limit": q(r.limit)}
    elif isinstance(r, AscendingChain):
        pieces = [[None if a is None else q(a), None if b is None else q(b)]
                  for a, b in r.cover.pieces(cover_pieces)]
        out["reason"] = {"kind": "AscendingChain", "chain_index": r.chain_index,
                         "cover": {"left": pieces[0], "middle_first": pieces[1:-1],
                                   "middle_rule": "[r_n, r_(n+1)[ for every n >= 0",
                                   "right": pieces[-1]}}
    return out


def scalar_to_json(x) -> str:
    return "inf" if x is INF else q(x)
