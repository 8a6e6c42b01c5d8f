"""Command-line front end: one subcommand per algorithm, JSON reports on stdout.

Every report has the keys ``command``, ``inputs`` (the parsed inputs,
re-serialized), ``result``, ``checks`` (named postconditions with their
outcome) and ``version``.  Exit status is 0 when every check passes, 1 when
one fails and 2 on parse or precondition errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from . import serial as S
from .errors import PreconditionError, ValsepError, VerificationFailed
from .integration import fubini_check
from .johnstone import BETA, MU, decompose_johnstone, decompose_ncof, escape_falsifier
from .poset import FinitePoset, UpSetFin, is_irreducible, sober_check
from .ring import Leaf, Op, to_ring_element
from .sampling import dominated_family, random_smyth_inside, random_theta, random_unit, rng_of
from .scalar import INF
from .smyth import AscendingChain, consonance_refuter, is_compact, refute_point_continuity
from .sorgenfrey import interval, lambda_eval
from .tix import ValuationTable, split_infinite, tix_decompose
from .valuation import SPACE_J, SPACE_NCOF, LinComb, Simple, Zero, black_box


def _report(command, inputs, result, checks) -> dict:
    return {"command": command, "inputs": inputs, "result": result,
            "checks": [{"name": n, "pass": bool(ok)} for n, ok in checks],
            "version": __version__}


def _combo(disc, r, base, space):
    parts = []
    if disc.terms:
        parts.append((1, disc))
    if r:
        parts.append((r, base))
    return LinComb(parts) if parts else Zero(space)


# -- finite posets ----------------------------------------------------------

def _table_from_json(obj, P: FinitePoset) -> ValuationTable:
    if "values" in obj:
        vals = {}
        for pts, v in obj["values"]:
            vals[P.mask_of(str(x) for x in pts)] = S.read_scalar(v)
        return ValuationTable(P, vals)
    if "valuation" in obj:
        nu = Simple([(S.read_scalar(c), str(x)) for x, c in obj["valuation"]], P)
        return ValuationTable.of(nu, P)
    raise S.ParseError("tix-decompose input needs 'values' or 'valuation'")


def _tix_terms(dec, P, sober):
    out, checks = [], []
    for a, C in dec.terms:
        irr = is_irreducible(P, C)
        out.append({"coefficient": S.q(a), "closed": S.closed_to_json(C), "irreducible": irr,
                    "principal": C.is_principal()})
        checks.append((f"closed set {S.closed_to_json(C)} irreducible", irr))
        if sober:
            checks.append((f"closed set {S.closed_to_json(C)} principal on a sober poset",
                           C.is_principal()))
    return out, checks


def cmd_tix(obj, args):
    P = S.poset_from_json(obj["poset"], max_points=args.max_points)
    nu = _table_from_json(obj, P)
    inputs = {"poset": S.poset_to_json(P),
              "values": [[S.upset_to_json(U), S.scalar_to_json(v)] for U, v in nu.items()]}
    sober = bool(sober_check(P))
    if nu.is_bounded():
        dec = tix_decompose(nu, verify=False)
        terms, checks = _tix_terms(dec, P, sober)
        rebuilt = {m: sum((a for a, C in dec.terms if m & C.mask), Fraction(0))
                   for m in P.upset_masks()}
        checks.insert(0, ("re-evaluates to the input on every upset",
                          all(rebuilt[m] == nu.values[m] for m in P.upset_masks())))
        return inputs, {"sober": sober, "terms": terms}, checks
    split = split_infinite(nu)
    dec = tix_decompose(split.finite_part, verify=False)
    terms, checks = _tix_terms(dec, P, sober)
    ok = all(split.finite_part.values[m] + split.infinite_part.values[m] == nu.values[m]
             for m in P.upset_masks())
    result = {"sober": sober, "s": S.q(split.s), "u_s": S.upset_to_json(split.u_s),
              "c_infinity": S.closed_to_json(split.c_infinity), "finite_terms": terms}
    return inputs, result, [("finite and infinite parts recombine", ok)] + checks


# -- Johnstone's dcpo ---------------------------------------------------------

def _theta_r(obj, args):
    rng = rng_of(args.seed)
    theta = S.discrete_j_from_json(obj["theta"]) if "theta" in obj else random_theta(rng)
    r = S.read_scalar(obj["r"]) if "r" in obj else random_unit(rng)
    if r is INF:
        raise PreconditionError("r must be finite")
    return theta, r, rng


def cmd_johnstone(obj, args):
    theta, r, _ = _theta_r(obj, args)
    hint = [S.jpoint_from_json(p) for p in obj["hint"]] if "hint" in obj else theta.support
    nu = black_box(_combo(theta, r, MU, SPACE_J), "theta + r*mu")
    got_theta, got_r = decompose_johnstone(nu, hint)
    inputs = {"theta": S.discrete_to_json(theta), "r": S.q(r),
              "hint": [S.jpoint_to_json(p) for p in hint]}
    result = {"theta": S.discrete_to_json(got_theta), "r": S.q(got_r)}
    checks = [("theta recovered", got_theta.as_dict() == theta.as_dict()), ("r recovered", got_r == r)]
    return inputs, result, checks


def cmd_ncof(obj, args):
    rng = rng_of(args.seed)
    from .sampling import random_alpha
    alpha = S.discrete_ncof_from_json(obj["alpha"]) if "alpha" in obj else random_alpha(rng)
    r = S.read_scalar(obj["r"]) if "r" in obj else random_unit(rng)
    hint = [int(i) for i in obj["hint"]] if "hint" in obj else alpha.support
    nu = black_box(_combo(alpha, r, BETA, SPACE_NCOF), "alpha + r*beta")
    got_alpha, got_r = decompose_ncof(nu, hint)
    inputs = {"alpha": S.discrete_to_json(alpha), "r": S.q(r), "hint": sorted(hint)}
    result = {"alpha": S.discrete_to_json(got_alpha), "r": S.q(got_r)}
    checks = [("alpha recovered", got_alpha.as_dict() == alpha.as_dict()), ("r recovered", got_r == r)]
    return inputs, result, checks


def cmd_escape(obj, args):
    theta, r, rng = _theta_r(obj, args)
    if "family" in obj:
        fam = [S.discrete_j_from_json(f) for f in obj["family"]]
    else:
        fam = dominated_family(rng, theta, r)
    res = escape_falsifier(theta, r, fam)
    inputs = {"theta": S.discrete_to_json(theta), "r": S.q(r),
              "family": [S.discrete_to_json(f) for f in fam]}
    result = {"k": res.k, "witness": S.jopen_to_json(res.witness), "gap": S.q(res.gap),
              "target": S.q(res.target), "family_values": [S.q(v) for v in res.family_values]}
    checks = [("gap at least r", res.gap >= r),
              ("witness misses every support point",
               not any(p in res.witness for f in fam + [theta] for p in f.support))]
    return inputs, result, checks


# -- Sorgenfrey line and Smyth powerdomain -------------------------------------

def cmd_rl_measure(obj, args):
    U = S.rlopen_from_json(obj)
    lam = lambda_eval(U)
    lengths = sum((Fraction(b) - Fraction(a) for a, b in S.rlopen_to_json(U)), Fraction(0))
    return S.rlopen_to_json(U), {"lambda": S.q(lam), "normal_form": S.rlopen_to_json(U)}, [
        ("lambda equals the summed lengths of the normal form", lam == lengths)]


def _expr_from_json(obj, leaf):
    if isinstance(obj, dict) and "op" in obj:
        op = {"union": "union", "|": "union", "inter": "inter", "&": "inter",
              "diff": "diff", "-": "diff"}.get(obj["op"])
        if op is None or len(obj.get("args", [])) != 2:
            raise S.ParseError(f"bad expression node {obj!r}")
        a, b = obj["args"]
        return Op(op, _expr_from_json(a, leaf), _expr_from_json(b, leaf))
    return Leaf(leaf(obj))


def _expr_to_json(e, leaf):
    if isinstance(e, Leaf):
        return leaf(e.open)
    return {"op": e.op, "args": [_expr_to_json(e.left, leaf), _expr_to_json(e.right, leaf)]}


def cmd_ring(obj, args):
    space = obj.get("space", "Rl")
    if space == "Rl":
        read, write = S.rlopen_from_json, S.rlopen_to_json
        extra = {}
    elif space == "finite":
        P = S.poset_from_json(obj["poset"], max_points=args.max_points)

        def read(pts):
            mask = P.mask_of(str(x) for x in pts)
            if not P.is_up_mask(mask):
                raise S.ParseError(f"{pts!r} is not an upset")
            return UpSetFin(P, mask)

        write = S.upset_to_json
        extra = {"poset": S.poset_to_json(P)}
    else:
        raise S.ParseError(f"ring-normalize supports spaces 'Rl' and 'finite', not {space!r}")
    expr = _expr_from_json(obj["expr"], read)
    R = to_ring_element(expr)
    alt = expr.by_ring_ops()
    cs = list(R)
    disjoint = all(a.disjoint(b) for i, a in enumerate(cs) for b in cs[i + 1:])
    inputs = dict(space=space, expr=_expr_to_json(expr, write), **extra)
    result = {"crescents": [{"outer": write(c.outer), "inner": write(c.inner)} for c in cs]}
    return inputs, result, [("crescents pairwise disjoint", disjoint),
                            ("same set as direct ring operations", R.same_set(alt))]


def cmd_compactness(obj, args):
    cand = S.candidate_from_json(obj)
    v = is_compact(cand)
    checks = []
    if isinstance(v.reason, AscendingChain):
        cov = v.reason.cover
        ch = cand.blocks[v.reason.chain_index]
        idx = [cov.piece_of(ch.point(j)) for j in range(12)]
        checks.append(("each chain point sits in its own middle piece of the cover", idx == list(range(12))))
    elif v.reason is not None:
        checks.append(("named limit is absent from the set", v.reason.limit not in cand))
    return S.candidate_to_json(cand), S.verdict_to_json(v), checks


def _pc_inputs(obj, args):
    rng = rng_of(args.seed)
    U = S.rlopen_from_json(obj["U"]) if "U" in obj else interval(0, 1)
    r = S.read_rational(obj["r"]) if "r" in obj else Fraction(1, 2)
    if "A" in obj:
        A = [S.smyth_from_json(a) for a in obj["A"]]
    else:
        A = [random_smyth_inside(rng, U) for _ in range(rng.randint(1, 5))]
    return U, r, A


def _pc_result(cert):
    return {"V": S.countable_to_json(cert.V), "bound": S.q(cert.bound),
            "containments": [{"element": p.element, "finite_points": [S.q(x) for x in p.finite_points],
                              "chains": [{"chain": k, "threshold": T, "tail": t} for k, T, t in p.chains]}
                             for p in cert.containments]}


def cmd_refute_pc(obj, args):
    U, r, A = _pc_inputs(obj, args)
    cert = refute_point_continuity(U, r, A)
    inputs = {"U": S.rlopen_to_json(U), "r": S.q(r), "A": [S.candidate_to_json(Q.rep) for Q in A]}
    return inputs, _pc_result(cert), list(cert.checks)


def cmd_consonance(obj, args):
    Q = S.smyth_from_json(obj["Q"])
    r = S.read_rational(obj["r"])
    cert = consonance_refuter(Q, r)
    inputs = {"Q": S.candidate_to_json(Q.rep), "r": S.q(r)}
    return inputs, {"V": S.countable_to_json(cert.V), "bound": S.q(cert.bound)}, list(cert.checks)


def cmd_lambda_bar(obj, args):
    W = S.smyth_open_from_json(obj)
    val = lambda_eval(W.trace())
    nonred = all(not (U != V and U.issubset(V)) for U in W.boxes for V in W.boxes)
    return S.smyth_open_to_json(W), {"lambda_bar": S.q(val), "boxes": S.smyth_open_to_json(W)}, [
        ("box family non-redundant", nonred)]


def cmd_fubini(obj, args):
    P = S.poset_from_json(obj["P"], max_points=args.max_points)
    Q = S.poset_from_json(obj["Q"], max_points=args.max_points)
    h = {(str(x), str(y)): S.read_scalar(v) for x, y, v in obj["h"]}
    nu = Simple([(S.read_scalar(c), str(x)) for x, c in obj["nu"]], P)
    xi = Simple([(S.read_scalar(c), str(y)) for y, c in obj["xi"]], Q)
    v = fubini_check(h, nu, xi, P, Q)
    inputs = {"P": S.poset_to_json(P), "Q": S.poset_to_json(Q),
              "h": [[x, y, S.q(h[(x, y)])] for x in P.elements for y in Q.elements],
              "nu": [[x, S.q(c)] for c, x in nu.terms], "xi": [[y, S.q(c)] for c, y in xi.terms]}
    return inputs, {"lhs": S.q(v.lhs), "rhs": S.q(v.rhs), "equal": v.equal}, [
        ("iterated integrals agree", v.equal)]


def cmd_demo(obj, args):
    rng = rng_of(args.seed)
    theta = random_theta(rng, rng.randint(1, 6))
    r = Fraction(rng.randint(1, 4), 4)
    nu = black_box(_combo(theta, r, MU, SPACE_J), "theta + r*mu")
    got_theta, got_r = decompose_johnstone(nu, theta.support)
    fam = dominated_family(rng, theta, r)
    esc = escape_falsifier(got_theta, got_r, fam)
    part_a = {
        "theta": S.discrete_to_json(theta), "r": S.q(r), "family_size": len(fam),
        "k": esc.k, "witness": S.jopen_to_json(esc.witness), "gap": S.q(esc.gap),
        "summary": (f"theta + {S.q(r)}*mu is point-continuous, yet every dominated discrete "
                    f"family misses it by {S.q(esc.gap)} >= r on the witness open, so it is "
                    f"not reached from the simple valuations"),
    }
    U, rr = interval(0, 1), Fraction(1, 2)
    certs = []
    for _ in range(3):
        A = [random_smyth_inside(rng, U) for _ in range(rng.randint(1, 5))]
        certs.append(refute_point_continuity(U, rr, A))
    part_b = {
        "U": S.rlopen_to_json(U), "r": S.q(rr),
        "certificates": [dict(A_size=len(c.A), **_pc_result(c)) for c in certs],
        "summary": ("for each sampled finite A inside Box U an open neighbourhood of A has "
                    "measure at most 1/2 < lambda(U) = 1, so lambda-bar is not point-continuous"),
    }
    checks = [("decomposition recovers theta and r",
               got_theta.as_dict() == theta.as_dict() and got_r == r),
              ("escape gap at least r", esc.gap >= r)]
    for i, c in enumerate(certs):
        checks += [(f"certificate {i}: {name}", ok) for name, ok in c.checks]
    return {"seed": args.seed}, {"johnstone": part_a, "sorgenfrey": part_b}, checks


COMMANDS = {
    "tix-decompose": (cmd_tix, "decompose a valuation table on a finite poset"),
    "decompose-johnstone": (cmd_johnstone, "recover theta and r from theta + r*mu on J"),
    "decompose-ncof": (cmd_ncof, "recover alpha and r from alpha + r*beta on the cofinite naturals"),
    "escape-falsify": (cmd_escape, "witness open separating theta + r*mu from a dominated family"),
    "rl-measure": (cmd_rl_measure, "Lebesgue measure of a Sorgenfrey open"),
    "ring-normalize": (cmd_ring, "normal form of a set expression as disjoint crescents"),
    "compactness": (cmd_compactness, "decide compactness of a candidate subset of the Sorgenfrey line"),
    "refute-pc": (cmd_refute_pc, "small neighbourhood of a finite family of compact sets"),
    "consonance": (cmd_consonance, "small open around one compact set"),
    "lambda-bar": (cmd_lambda_bar, "measure of a union of Box opens"),
    "fubini-check": (cmd_fubini, "compare both iterated integrals on a product of finite posets"),
    "demo-separation": (cmd_demo, "run both counterexample pipelines end to end"),
}
NO_INPUT = {"demo-separation"}
OPTIONAL_INPUT = {"decompose-johnstone", "decompose-ncof", "escape-falsify", "refute-pc"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="machine-readable JSON output (default)")
    out.add_argument("--pretty", action="store_true", help="aligned human-readable tables")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    common.add_argument("--max-points", type=int, default=16, help="bound on finite poset size")
    common.add_argument("--file", help="read the input JSON from this path")
    parser = argparse.ArgumentParser(prog="valsep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name not in NO_INPUT:
            p.add_argument("input", nargs="?", help="input JSON (bare p/q rationals allowed)")
    return parser


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj) and len(obj) <= 50:
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, S.dumps(obj) if not isinstance(obj, str) else obj))


def render_pretty(report: dict) -> str:
    rows: list = []
    _flatten("", report["result"], rows)
    width = max((len(k) for k, _ in rows), default=0)
    lines = [f"{report['command']}  (valsep {report['version']})", ""]
    lines += [f"  {k.ljust(width)}  {v}" for k, v in rows]
    if report["checks"]:
        cw = max(len(c["name"]) for c in report["checks"])
        lines += ["", "  checks:"]
        lines += [f"    {c['name'].ljust(cw)}  {'pass' if c['pass'] else 'FAIL'}" for c in report["checks"]]
    return "\n".join(lines)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, _ = COMMANDS[args.command]
    try:
        if args.command in NO_INPUT:
            obj = {}
        else:
            text = args.input
            if args.file:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            if text is None:
                if args.command not in OPTIONAL_INPUT:
                    raise S.ParseError("missing input: pass JSON as an argument or use --file")
                obj = {}
            else:
                obj = S.loads(text)
        inputs, result, checks = fn(obj, args)
    except VerificationFailed as exc:
        print(f"valsep {args.command}: verification failed: {exc}", file=stderr)
        return 2
    except (ValsepError, KeyError, TypeError, ValueError, OSError) as exc:
        kind = "parse error" if isinstance(exc, (S.ParseError, KeyError, OSError)) else "precondition violated"
        print(f"valsep {args.command}: {kind}: {exc}", file=stderr)
        return 2
    report = _report(args.command, inputs, result, checks)
    print(render_pretty(report) if args.pretty else S.dumps(report), file=stdout)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def main():
    sys.exit(run())
