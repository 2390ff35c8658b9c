"""Command-line interface.

Column and coordinate indices are 1-based on the command line and in all
output; the library itself is 0-based.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import charcycle, gevrey, polyhedra, semigroup, umbrella
from .errors import (GKZError, HypothesisFailure, InvalidWeight, NotAFace, NotPointed,
                     UnsupportedConfiguration)
from .lattice import IntMatrix, invariant_factors, rank_q
from .perturbed import PerturbedScalar
from .polyhedra import Polytope, normalized_volume
from .semigroup import Parameter, SemigroupView

EXIT_OK, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_UNSUPPORTED = 0, 1, 2, 3

COMMANDS = ("umbrella", "cycle", "mult", "jump", "rank", "slopes", "gevrey", "scan", "check")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gkzcc", description="Combinatorial invariants of A-hypergeometric systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="JSON problem file")
    p.add_argument("--matrix", help='rows separated by ";", entries by spaces or commas')
    p.add_argument("--weight", help='"F", "L(s)", "L(s,j)", "Lx=..;Ld=.." or "Ld=..;c=.."')
    p.add_argument("--beta", help='"1,2", "generic" or "stratum:b=1,0,0;face=3,4"')
    p.add_argument("--tau", help='umbrella face as column indices, e.g. "1,2" or "" for the empty face')
    p.add_argument("--hyperplane", type=int, help="column index j of the hyperplane x_j = 0")
    p.add_argument("--order", help="Gevrey order s (rational, > 1)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--table", dest="fmt", action="store_const", const="table")
    p.add_argument("--bound", type=int, help="override the semigroup search bound (columns used)")
    p.set_defaults(fmt="json")
    return p


# ---------------------------------------------------------------------------
# parsing


def _rationals(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [Fraction(t) for t in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse rational list {text!r}") from exc


def _indices(items, n: int | None = None) -> frozenset:
    if isinstance(items, str):
        items = [int(x) for x in _rationals(items)]
    out = set()
    for i in items:
        i = int(i)
        if i < 1 or (n is not None and i > n):
            raise UsageError(f"column index {i} out of range 1..{n}")
        out.add(i - 1)
    return frozenset(out)


def parse_matrix(spec) -> IntMatrix:
    if isinstance(spec, str):
        rows = [r for r in spec.split(";") if r.strip()]
        spec = [[x for x in _rationals(r)] for r in rows]
    try:
        rows = []
        for r in spec:
            row = []
            for x in r:
                f = Fraction(x)
                if f.denominator != 1:
                    raise UsageError("matrix entries must be integers")
                row.append(int(f))
            rows.append(tuple(row))
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise UsageError("matrix must be a nonempty rectangular array")
        return IntMatrix(tuple(rows))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot parse matrix: {exc}") from exc


def _weight_from_dict(spec: dict, n: int, hyperplane):
    if "L_x" in spec or "L_d" in spec:
        return umbrella.WeightSpec(tuple(Fraction(x) for x in spec["L_x"]),
                                   tuple(Fraction(x) for x in spec["L_d"]))
    if "s" in spec:
        j = spec.get("hyperplane", hyperplane)
        if j is None:
            raise UsageError("L(s) weight needs a hyperplane index")
        return umbrella.WeightSpec.L_s(n, int(j) - 1, Fraction(spec["s"]))
    raise UsageError(f"unrecognized weight {spec!r}")


def parse_weight(spec, n: int, hyperplane=None) -> umbrella.WeightSpec:
    if spec is None or spec == "F":
        return umbrella.WeightSpec.F(n)
    if isinstance(spec, dict):
        w = _weight_from_dict(spec, n, hyperplane)
    else:
        text = spec.strip().replace(" ", "")
        if text.startswith("L(") and text.endswith(")"):
            args = text[2:-1].split(",")
            s = Fraction(args[0])
            j = int(args[1]) if len(args) > 1 else hyperplane
            if j is None:
                raise UsageError("L(s) weight needs a hyperplane index (L(s,j) or --hyperplane)")
            if not 1 <= j <= n:
                raise UsageError(f"hyperplane index {j} out of range 1..{n}")
            w = umbrella.WeightSpec.L_s(n, j - 1, s)
        else:
            parts = dict(kv.split("=", 1) for kv in text.split(";") if kv)
            if "Lx" in parts and "Ld" in parts:
                w = umbrella.WeightSpec(tuple(_rationals(parts["Lx"])), tuple(_rationals(parts["Ld"])))
            elif "Ld" in parts:
                c = Fraction(parts["c"]) if "c" in parts else None
                w = umbrella.WeightSpec.from_partial(_rationals(parts["Ld"]), c)
            else:
                raise UsageError(f"unrecognized weight {spec!r}")
    if w.n != n:
        raise UsageError(f"weight has {w.n} entries but the matrix has {n} columns")
    return w


def parse_beta(spec, A: IntMatrix) -> Parameter:
    if spec is None or spec == "generic":
        return Parameter.generic(A.d, A)
    if isinstance(spec, dict):
        st = spec.get("stratum", spec)
        b, face = st["b"], st.get("face", [])
        param = Parameter.stratum([int(Fraction(x)) for x in b], _indices(face, A.n))
    elif isinstance(spec, str) and spec.startswith("stratum:"):
        parts = dict(kv.split("=", 1) for kv in spec[len("stratum:"):].split(";") if kv)
        param = Parameter.stratum([int(x) for x in _rationals(parts.get("b", ""))],
                                  _indices(parts.get("face", ""), A.n))
    elif isinstance(spec, str):
        param = Parameter.point(_rationals(spec))
    else:
        param = Parameter.point([Fraction(x) for x in spec])
    vec = param.b if param.is_stratum else param.beta
    if len(vec) != A.d:
        raise UsageError(f"parameter has {len(vec)} coordinates but the matrix has {A.d} rows")
    return param


# ---------------------------------------------------------------------------
# output


def _j(x):
    """JSON-ready value: rationals as strings, faces as 1-based lists."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, PerturbedScalar):
        return str(x)
    if isinstance(x, frozenset):
        return sorted(i + 1 for i in x)
    if isinstance(x, dict):
        return {str(k): _j(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_j(v) for v in x]
    return str(x)


def _face(f) -> list:
    return sorted(i + 1 for i in f)


def _param_json(p: Parameter):
    if p.is_stratum:
        return {"stratum": {"b": list(p.b), "face": _face(p.face)}}
    return [_j(x) for x in p.beta]


def _table(result) -> str:
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, w in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), w)
        elif isinstance(v, list) and v and all(isinstance(w, dict) for w in v):
            for i, w in enumerate(v):
                walk(f"{prefix}[{i}]", w)
        else:
            rows.append((prefix, json.dumps(v)))

    walk("", result)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


# ---------------------------------------------------------------------------
# commands


def _check_hypotheses(A: IntMatrix):
    if rank_q(A.columns) != A.d or any(f != 1 for f in invariant_factors(A.rows)):
        raise HypothesisFailure("the columns of A do not generate Z^d")
    polyhedra.pointedness_certificate(A)


def _require_tau(ctx):
    if ctx["tau"] is None:
        raise UsageError("this command needs --tau (use --tau '' for the empty face)")
    return ctx["tau"]


def cmd_umbrella(ctx):
    A, L = ctx["A"], ctx["L"]
    U = umbrella.compute_umbrella(A, L)
    faces = [{"tau": _face(f), "dim": U.dim(f), "F_homogeneous": umbrella.is_F_homogeneous(A, f)}
             for f in U.sorted_faces()]
    return {"faces": faces, "facets": [_face(f) for f in U.facets]}


def cmd_cycle(ctx):
    A, L, beta, S = ctx["A"], ctx["L"], ctx["beta"], ctx["S"]
    comps = charcycle.char_cycle(A, L, beta, S)
    return {"components": [{"tau": _face(c.tau), "multiplicity": c.multiplicity, "generic": c.generic}
                           for c in comps]}


def cmd_mult(ctx):
    A, L = ctx["A"], ctx["L"]
    tau = _require_tau(ctx)
    return {"tau": _face(tau), "multiplicity": charcycle.generic_mult(A, L, tau)}


def _jump_json(rep):
    out = {"tau": _face(rep.tau), "generic": rep.generic, "case": rep.case}
    if rep.jump is None:
        out["jump"] = {"status": "unsupported", "reason": rep.reason}
    else:
        out["jump"] = rep.jump
        out["multiplicity"] = rep.total
    if rep.C_beta is not None:
        out["C_beta"] = rep.C_beta
    if rep.faces:
        out["faces"] = [_face(f) for f in rep.faces]
    return out


def cmd_jump(ctx):
    tau = _require_tau(ctx)
    rep = charcycle.jump(ctx["A"], ctx["L"], tau, ctx["beta"], ctx["S"])
    out = _jump_json(rep)
    if rep.jump is None:
        ctx["unsupported"] = rep.reason
    return out


def cmd_rank(ctx):
    A, beta, S = ctx["A"], ctx["beta"], ctx["S"]
    rep = charcycle.jump(A, umbrella.WeightSpec.F(A.n), (), beta, S)
    if rep.jump is None:
        ctx["unsupported"] = rep.reason
        return {"status": "unsupported", "reason": rep.reason}
    return {"rank": rep.total, "volume": rep.generic, "jump": rep.jump, "case": rep.case}


def cmd_slopes(ctx):
    A = ctx["A"]
    js = [ctx["hyperplane"] - 1] if ctx["hyperplane"] is not None else range(A.n)
    out = []
    for j in js:
        rep = gevrey.slopes_along(A, j)
        out.append({"hyperplane": j + 1,
                    "slopes": [{"s": _j(s), "normal": _j(list(h)), "offset": _j(c)} for s, (h, c) in rep.slopes]})
    return {"slopes": out}


def _need_j_s(ctx):
    if ctx["hyperplane"] is None:
        raise UsageError("this command needs --hyperplane")
    if ctx["order"] is None:
        raise UsageError("this command needs --order")
    s = ctx["order"]
    if s <= 1:
        raise UsageError("--order must exceed 1")
    return ctx["hyperplane"] - 1, s


def cmd_gevrey(ctx):
    A = ctx["A"]
    j, s = _need_j_s(ctx)
    rep = gevrey.irregularity_at(A, j, s, ctx["beta"], ctx["S"])
    ctx["warnings"].extend(rep.warnings)
    out = {"hyperplane": j + 1, "s": _j(s), "generic": rep.generic, "terms": rep.terms, "route": rep.route}
    if rep.value is None:
        out["value"] = {"status": "unsupported", "reason": rep.reason}
        ctx["unsupported"] = rep.reason
    else:
        out["value"] = rep.value
    return out


def candidate_strata(A: IntMatrix, seed: Parameter, S: SemigroupView) -> list:
    J = semigroup.ranking_data(S, seed)
    strata = [Parameter.generic(A.d, A)]
    for G, b in J.pairs:
        p = Parameter.stratum(b, G)
        if p not in strata:
            strata.append(p)
    if seed not in strata:
        strata.append(seed)
    return strata


def cmd_scan(ctx):
    A, L, S = ctx["A"], ctx["L"], ctx["S"]
    strata = candidate_strata(A, ctx["beta"], S)
    rows = []
    values = []
    for p in strata:
        rep = charcycle.jump(A, L, (), p, S)
        rows.append({"parameter": _param_json(p), **_jump_json(rep)})
        values.append((p, rep.total))
    for p1, v1 in values:
        for p2, v2 in values:
            if p1 is p2 or v1 is None or v2 is None:
                continue
            if gevrey._in_closure(p1, p2, A) and v1 > v2:
                ctx["warnings"].append(f"FINDING: multiplicity {v1} at {p1.describe()} exceeds {v2} "
                                       f"at its specialization {p2.describe()}")
    out = {"strata": rows}
    if ctx["hyperplane"] is not None:
        j = ctx["hyperplane"] - 1
        scan = gevrey.semicontinuity_scan(A, j, strata, ctx["order"], S=S)
        out["gevrey"] = [{"slope": _j(e["slope"]), "hypothesis": e["hypothesis"],
                          "values": [{"parameter": _param_json(p), "d": v} for p, v in e["values"]]}
                         for e in scan]
        for e in scan:
            ctx["warnings"].extend(f"FINDING at slope {_j(e['slope'])}: {f}" for f in e["findings"])
    return out


def run_checks(A: IntMatrix, L, beta: Parameter, S: SemigroupView) -> list:
    """Invariant suite on one instance; each entry is (name, ok, detail)."""
    results = []
    U = umbrella.compute_umbrella(A, L)
    vol = charcycle.generic_mult(A, umbrella.WeightSpec.F(A.n), ())
    J = semigroup.ranking_data(S, beta)
    for tau in U.sorted_faces():
        rep = charcycle.jump(A, L, tau, beta, S, J)
        if rep.jump is None:
            results.append(("lower bound on multiplicity", True, f"{_face(tau)}: unsupported, skipped"))
            continue
        results.append(("lower bound on multiplicity", rep.total >= rep.generic,
                        f"{_face(tau)}: {rep.total} >= {rep.generic}"))
        if rank_q([A.columns[j] for j in tau]) >= A.d - 1:
            results.append(("no jump in high dimension", rep.jump == 0, f"{_face(tau)}: jump {rep.jump}"))
    rep = charcycle.jump(A, umbrella.WeightSpec.F(A.n), (), beta, S, J)
    if rep.jump is not None:
        bound = 4 ** (A.d + 1) * vol
        results.append(("rank upper bound", rep.total <= bound, f"{rep.total} <= {bound}"))
    mu, alt = charcycle.generic_mult(A, L, ()), None
    try:
        alt = charcycle.mult_by_union_volume(A, L)
        results.append(("union volume formula", mu == alt, f"{mu} == {alt}"))
    except GKZError as exc:
        results.append(("union volume formula", True, f"skipped: {exc}"))
    P = Polytope.hull_with_origin(A.columns, A.d)
    v1, v2 = normalized_volume(P, method="placing"), normalized_volume(P, method="pulling")
    results.append(("triangulations agree", v1 == v2, f"{v1} == {v2}"))
    for j in range(A.n):
        for s in gevrey.slopes_along(A, j).values:
            g = gevrey.irregularity_at(A, j, s, beta, S)
            if g.value is not None:
                results.append(("irregularity lower bound", g.value >= g.generic,
                                f"x{j + 1}, s={_j(s)}: {g.value} >= {g.generic}"))
    return results


def cmd_check(ctx):
    res = run_checks(ctx["A"], ctx["L"], ctx["beta"], ctx["S"])
    failed = [r for r in res if not r[1]]
    for name, _, detail in failed:
        ctx["warnings"].append(f"FINDING: check '{name}' failed: {detail}")
    return {"passed": len(res) - len(failed), "failed": len(failed),
            "checks": [{"check": n, "ok": ok, "detail": d} for n, ok, d in res]}


HANDLERS = {
    "umbrella": cmd_umbrella, "cycle": cmd_cycle, "mult": cmd_mult, "jump": cmd_jump, "rank": cmd_rank,
    "slopes": cmd_slopes, "gevrey": cmd_gevrey, "scan": cmd_scan, "check": cmd_check,
}


def _load(args) -> dict:
    problem = {}
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                problem = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read problem file: {exc}") from exc
    matrix = args.matrix if args.matrix is not None else problem.get("matrix")
    if matrix is None:
        raise UsageError("no matrix given (use --matrix or --input)")
    A = parse_matrix(matrix)
    hyper = args.hyperplane if args.hyperplane is not None else problem.get("hyperplane")
    if hyper is not None and not 1 <= int(hyper) <= A.n:
        raise UsageError(f"hyperplane index {hyper} out of range 1..{A.n}")
    order = args.order if args.order is not None else problem.get("order")
    try:
        order = Fraction(order) if order is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse order {order!r}") from exc
    try:
        L = parse_weight(args.weight if args.weight is not None else problem.get("weight"), A.n,
                         int(hyper) if hyper is not None else None)
    except InvalidWeight as exc:
        raise UsageError(str(exc)) from exc
    except (ValueError, ZeroDivisionError, KeyError) as exc:
        raise UsageError(f"cannot parse weight: {exc}") from exc
    try:
        beta = parse_beta(args.beta if args.beta is not None else problem.get("beta"), A)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse parameter: {exc}") from exc
    tau_spec = args.tau if args.tau is not None else problem.get("tau")
    tau = _indices(tau_spec, A.n) if tau_spec is not None else None
    bound = args.bound if args.bound is not None else problem.get("bound")
    return {"A": A, "L": L, "beta": beta, "tau": tau, "hyperplane": int(hyper) if hyper is not None else None,
            "order": order, "bound": bound, "warnings": [], "unsupported": None}


def _echo(ctx, command) -> dict:
    L = ctx["L"]
    return {"command": command, "matrix": [list(r) for r in ctx["A"].rows],
            "weight": {"L_x": _j(list(L.L_x)), "L_d": _j(list(L.L_d))},
            "beta": _param_json(ctx["beta"]), "tau": _face(ctx["tau"]) if ctx["tau"] is not None else None,
            "hyperplane": ctx["hyperplane"], "order": _j(ctx["order"]), "bound": ctx["bound"]}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = _load(args)
    except (UsageError, NotAFace, ValueError) as exc:
        print(f"gkzcc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    code = EXIT_OK
    try:
        _check_hypotheses(ctx["A"])
        ctx["S"] = SemigroupView(ctx["A"], bound=ctx["bound"])
        if ctx["bound"] is not None:
            ctx["warnings"].append(f"semigroup search bound lowered by user to {ctx['bound']} columns")
        result = _j(HANDLERS[args.command](ctx))
        if ctx["unsupported"]:
            code = EXIT_UNSUPPORTED
    except UsageError as exc:
        print(f"gkzcc: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HypothesisFailure, NotPointed) as exc:
        result, code = {"status": "hypothesis_failure", "reason": str(exc)}, EXIT_HYPOTHESIS
    except UnsupportedConfiguration as exc:
        result, code = {"status": "unsupported", "reason": str(exc)}, EXIT_UNSUPPORTED
    except GKZError as exc:
        print(f"gkzcc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = {"command": args.command, "input_echo": _echo(ctx, args.command), "result": result,
              "warnings": list(ctx["warnings"])}
    if args.fmt == "table":
        print(_table(report))
    else:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
