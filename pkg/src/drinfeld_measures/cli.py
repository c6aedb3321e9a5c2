"""Command-line front end.

Grammar for tree objects:

    vertex  := "L(" int ")" | "[pi^" int ";" pi-poly "]"
    edge    := vertex "->" vertex | "e" int | "ebar" int
    pi-poly := term (("+" | "-") term)*        e.g. 1 + 2*pi^3 + pi^-1
    T-poly  := term in T, same shape           e.g. T^2 + 1
    matrix  := T-poly "," T-poly ";" T-poly "," T-poly

Coefficients are integers over a prime field, or polynomials in the
generator w otherwise: (w + 1)*pi^-7 + w*pi^-6 + O(pi^3). JSON output
writes field elements as integers in the tower encoding (0..q-1).
Results go to stdout as sorted-key JSON (or text with --format text).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .errors import CapExceeded, DrinfeldError
from .field import GF, FieldCtx
from .poly import PolyT
from .series import LaurentSeries

DEFAULTS = {"q": 2, "p": None, "ext_degree": 2, "prec": 12, "deg_bound": 10, "level": 10,
            "window": "-8,0", "format": "json", "threads": 1, "max_depth": 64}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing

_TERM = re.compile(r"^(?:\((?P<paren>[^()]*)\)|(?P<coef>\d*w(?:\^\d+)?|\d+))?\*?"
                   r"(?:(?P<var>pi|T)(?:\^(?P<exp>-?\d+))?)?$")
_ELEM_TERM = re.compile(r"^(?P<c>\d*)(?:(?P<w>w)(?:\^(?P<e>\d+))?)?$")


def _split_terms(s: str) -> list[str]:
    """Split at top-level + and -, keeping the sign of each term (not after '^' or inside parentheses)."""
    terms, cur, depth = [], "", 0
    for ch in s:
        depth += (ch == "(") - (ch == ")")
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "^*":
            terms.append(cur)
            cur = "-" if ch == "-" else ""
        else:
            cur += ch
    if cur:
        terms.append(cur)
    return terms


def _int_elem(F, c: int) -> int:
    # integers name elements of the prime field
    if c < 0:
        return F.neg(_int_elem(F, -c))
    if c >= F.p and F.is_prime:
        raise UsageError(f"coefficient {c} is not an element of F_{F.order}")
    return F.from_int(c)


def parse_element(F, text: str) -> int:
    """A field element written as an integer or a polynomial in the generator w."""
    s = text.replace(" ", "")
    if F.is_prime:
        if not re.fullmatch(r"-?\d+", s):
            raise UsageError(f"{text!r} is not an element of F_{F.order}")
        return _int_elem(F, int(s))
    if not F.base.is_prime:
        raise UsageError("coefficients of nested extensions have no text form; use JSON")
    digits = [0] * F.degree
    for part in _split_terms(s):
        sign = -1 if part.startswith("-") else 1
        m = _ELEM_TERM.match(part.lstrip("-"))
        if not m or not part.lstrip("-"):
            raise UsageError(f"cannot parse {part!r} as an element of F_{F.order}")
        c = int(m.group("c")) if m.group("c") else 1
        i = (int(m.group("e")) if m.group("e") else 1) if m.group("w") else 0
        if i >= F.degree:
            raise UsageError(f"w^{i} is not reduced in F_{F.order}")
        digits[i] = F.base.add(digits[i], _int_elem(F.base, sign * c))
    return F._from_digits(digits)


def parse_terms(F, text: str, var: str) -> tuple[dict[int, int], int | None]:
    """Exponent -> coefficient for a sum of terms c*var^e, plus the N of an O(pi^N) term."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty polynomial")
    out: dict[int, int] = {}
    prec = None
    for part in _split_terms(s):
        sign = -1 if part.startswith("-") else 1
        body = part.lstrip("+-")
        big_o = re.fullmatch(r"O\(pi\^(-?\d+)\)", body)
        if big_o and var == "pi":
            prec = int(big_o.group(1))
            continue
        m = _TERM.match(body)
        if not body or not m or (m.group("var") and m.group("var") != var):
            raise UsageError(f"cannot parse term {part!r} of a polynomial in {var}")
        raw = m.group("paren") or m.group("coef") or "1"
        c = parse_element(F, raw)
        if sign < 0:
            c = F.neg(c)
        e = (int(m.group("exp")) if m.group("exp") else 1) if m.group("var") else 0
        out[e] = F.add(out.get(e, 0), c)
    return out, prec


def parse_pi_series(F, text: str) -> LaurentSeries:
    terms, prec = parse_terms(F, text, "pi")
    total = LaurentSeries.zero(F)
    for e, c in terms.items():
        total = total + LaurentSeries.monomial(F, c, e)
    return total if prec is None else total.truncate(prec)


def parse_T_poly(F, text: str) -> PolyT:
    terms, _ = parse_terms(F, text, "T")
    total = PolyT(F)
    for e, c in terms.items():
        if e < 0:
            raise UsageError("negative power of T")
        total = total + PolyT.monomial(F, c, e)
    return total


def parse_vertex(F, text: str):
    from .tree import Vertex, lam

    s = text.strip()
    m = re.fullmatch(r"L\((-?\d+)\)", s)
    if m:
        return lam(F, int(m.group(1)))
    m = re.fullmatch(r"\[pi\^(-?\d+);(.*)\]", s.replace(" ", ""))
    if m:
        return Vertex.make(F, int(m.group(1)), parse_pi_series(F, m.group(2)))
    raise UsageError(f"cannot parse vertex {text!r}")


def parse_edge(F, text: str):
    from .tree import Edge, fundamental_edge

    s = text.strip()
    m = re.fullmatch(r"(ebar|e)(-?\d+)", s)
    if m:
        e = fundamental_edge(F, int(m.group(2)))
        return e.reversed() if m.group(1) == "ebar" else e
    if "->" in s:
        a, b = s.split("->", 1)
        e = Edge(parse_vertex(F, a), parse_vertex(F, b))
        if e.terminal not in _nbrs(e.origin):
            raise UsageError(f"{text!r} is not an edge: the vertices are not adjacent")
        return e
    raise UsageError(f"cannot parse edge {text!r}")


def _nbrs(v):
    from .tree import neighbors

    return neighbors(v)


def parse_matrix(F, text: str):
    from .tree import Mat2

    rows = text.split(";")
    if len(rows) != 2 or any(len(r.split(",")) != 2 for r in rows):
        raise UsageError("matrix must look like 'a,b;c,d'")
    (a, b), (c, d) = (r.split(",") for r in rows)
    g = Mat2(parse_T_poly(F, a), parse_T_poly(F, b), parse_T_poly(F, c), parse_T_poly(F, d))
    if g.det().deg != 0:
        raise UsageError("matrix is not in GL2(F_q[T])")
    return g


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"window must be 'lo,hi', got {text!r}") from None
    if a > b:
        raise UsageError("window lower end above upper end")
    return a, b


def poly_json(P: PolyT):
    """Constants as plain field elements, otherwise the coefficient list."""
    if P.is_zero():
        return 0
    if P.deg == 0:
        return P.field.to_json(P.coeffs[0])
    return P.to_json()


def matrix_json(g):
    return [[poly_json(g.a), poly_json(g.b)], [poly_json(g.c), poly_json(g.d)]]


def load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {line!r}")
            k, v = (x.strip() for x in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


# ---------------------------------------------------------------------------
# commands


def _field(cfg):
    q = cfg["q"]
    try:
        F = GF(q)
    except (ValueError, CapExceeded) as exc:
        raise UsageError(f"--q: {exc}") from None
    if cfg.get("p") and F.p != cfg["p"]:
        raise UsageError(f"--p {cfg['p']} does not match --q {q}")
    return F


def cmd_tree(cfg, args):
    from .tree import act, boundary_ball, distance, neighbors, path, reduce_to_fundamental

    F = _field(cfg)
    if args.action == "reduce":
        red = reduce_to_fundamental(parse_edge(F, _need(args.edge, "--edge")))
        return red.to_json() | {"gamma": matrix_json(red.gamma)}
    if args.action == "act":
        g = parse_matrix(F, _need(args.matrix, "--matrix"))
        obj = parse_edge(F, args.edge) if args.edge else parse_vertex(F, _need(args.vertex, "--vertex or --edge"))
        out = act(g, obj, args.mode)
        return {"result": repr(out), "value": out.to_json()}
    if args.action == "neighbors":
        v = parse_vertex(F, _need(args.vertex, "--vertex"))
        return {"vertex": repr(v), "neighbors": [repr(w) for w in neighbors(v)]}
    if args.action == "path":
        a, b = parse_vertex(F, _need(args.vertex, "--vertex")), parse_vertex(F, _need(args.to, "--to"))
        return {"distance": distance(a, b), "path": [repr(e) for e in path(a, b, cfg["max_depth"])]}
    if args.action == "ball":
        e = parse_edge(F, _need(args.edge, "--edge"))
        return {"edge": repr(e), "ball": boundary_ball(e).to_json(), "text": repr(boundary_ball(e))}
    raise UsageError(f"unknown tree action {args.action}")


def cmd_carlitz(cfg, args):
    from .carlitz import bracket, carlitz_D, carlitz_G_poly, carlitz_L, e_poly, mu_weight

    F = _field(cfg)
    if args.action == "poly":
        num, den = carlitz_G_poly(F, args.n)
        return {"n": args.n, "numerator": [c.to_json() for c in num], "denominator": den.to_json(),
                "variable": "pi"}
    if args.action == "data":
        i = args.i
        return {"i": i, "bracket": bracket(F, i).to_json() if i else [], "D": carlitz_D(F, i).to_json(),
                "L": carlitz_L(F, i).to_json(), "e": {str(k): v.to_json() for k, v in sorted(e_poly(F, i).items())}}
    if args.action == "mu-weight":
        return {"n": args.n, "l": args.l, "mu": mu_weight(args.n, args.l, F.order)}
    if args.action == "table":
        rows = []
        for n in range(args.n_max + 1):
            num, den = carlitz_G_poly(F, n)
            rows.append({"n": n, "numerator": [c.to_json() for c in num], "denominator": den.to_json()})
        return {"table": rows}
    raise UsageError(f"unknown carlitz action {args.action}")


def cmd_expand(cfg, args):
    from .expansion import expand_delta, expand_eisenstein, upsilon_closed, xi_closed

    F = _field(cfg)
    prec, window = cfg["prec"], parse_window(cfg["window"])
    if args.action == "eisenstein":
        return expand_eisenstein(F, _need(args.k, "--k"), args.annulus, window, prec).to_json()
    if args.action == "delta":
        return expand_delta(F, args.annulus, window, prec).to_json()
    if args.action in ("upsilon", "xi"):
        fn = upsilon_closed if args.action == "upsilon" else xi_closed
        i = args.i if args.i is not None else (0 if args.action == "upsilon" else 1)
        v = fn(F, i, prec)
        return {"index": i, "value": v.to_json(), "text": repr(v)}
    raise UsageError(f"unknown expand action {args.action}")


def _measure(F, cfg, name):
    from .measures import build_mu_delta, build_mu_poincare

    return build_mu_delta(F, cfg["prec"]) if name == "delta" else build_mu_poincare(F, cfg["prec"])


def cmd_measure(cfg, args):
    from .measures import harmonicity_defect, l_delta, l_value, moment, one_units_edge

    F = _field(cfg)
    mu = _measure(F, cfg, args.measure)
    if args.action == "moment":
        e = parse_edge(F, _need(args.edge, "--edge"))
        return moment(mu, e, _need(args.j, "--j")).to_json() | {"edge": repr(e), "j": args.j}
    if args.action == "lvalue":
        j = _need(args.j, "--j")
        if args.measure == "delta" and not args.edge:
            return l_delta(F, j, cfg["prec"], mu).to_json() | {"j": j, "edge": repr(one_units_edge(F))}
        e = parse_edge(F, args.edge) if args.edge else one_units_edge(F)
        return l_value(mu, e, j, cfg["prec"]).to_json() | {"j": j, "edge": repr(e)}
    if args.action == "harmonicity":
        v = parse_vertex(F, _need(args.vertex, "--vertex"))
        js = [args.j] if args.j is not None else list(range(mu.weight - 1))
        out = {str(j): harmonicity_defect(mu, v, j).to_json(with_value=False) for j in js}
        return {"vertex": repr(v), "defects": out, "all_zero": all(o["r"] == "0" for o in out.values())}
    if args.action == "feq":
        q = F.order
        u1 = one_units_edge(F)
        rows = []
        for j in range(1, q * q - 1):
            s = moment(mu, u1, j - 1) + moment(mu, u1, q * q - 2 - j)
            rows.append({"j": j, "sum": s.to_json(with_value=False)})
        return {"checks": rows, "holds": all(r["sum"]["r"] == "0" for r in rows)}
    raise UsageError(f"unknown measure action {args.action}")


def cmd_zeta(cfg, args):
    from .zeta import zeta_special

    F = _field(cfg)
    r = zeta_special(F, _need(args.j, "--j"))
    return r.to_json() | {"variable": "pi", "power_of": "x^-1"}


def _point(cfg, args):
    ctx = FieldCtx.make(cfg["q"], cfg["ext_degree"])
    E = ctx.coeff
    if args.z:
        z = parse_pi_series(E, args.z)
    else:
        z = LaurentSeries(E, 0, [E.generator], None)
    return ctx, z


def cmd_reconstruct(cfg, args):
    from .integration import delta_at, reconstruct_cusp_form
    from .measures import build_mu_delta

    ctx, z = _point(cfg, args)
    F = ctx.const
    mu = build_mu_delta(F, cfg["prec"] + 16)
    res = reconstruct_cusp_form(mu, z, cfg["level"], cfg["prec"])
    out = res.to_json() | {"z": repr(z)}
    if not args.no_oracle:
        d = delta_at(z, F.order, cfg["deg_bound"], cfg["prec"])
        gap = res.value - d
        out["delta_at"] = {"value": d.to_json(), "text": repr(d),
                           "agree_to": gap.valuation if not gap.is_zero() else gap.prec}
    return out


def cmd_verify(cfg, args):
    from .verify import SUITES, run_criterion

    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        k = SUITES[name]
        kw = {}
        if args.q_given and name in ("xi1", "upsilon0", "moments", "lvalues", "feq", "harmonicity", "zeta"):
            kw["qs"] = (cfg["q"],)
        if args.q_given and name == "poincare":
            kw["q"] = cfg["q"]
        reports.append(run_criterion(k, **kw))
    return {"reports": [r.to_json(args.timing) for r in reports], "ok": all(r.ok for r in reports)}


def _need(v, flag):
    if v is None:
        raise UsageError(f"{flag} is required")
    return v


# ---------------------------------------------------------------------------


def _common_flags(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=default)
    common.add_argument("--q", type=int)
    common.add_argument("--p", type=int)
    common.add_argument("--ext-degree", dest="ext_degree", type=int)
    common.add_argument("--prec", type=int)
    common.add_argument("--deg-bound", dest="deg_bound", type=int)
    common.add_argument("--level", type=int)
    common.add_argument("--window")
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--config")
    common.add_argument("--threads", type=int, help="accepted for compatibility; work runs in one thread")
    common.add_argument("--max-depth", dest="max_depth", type=int)
    return common


def build_parser() -> argparse.ArgumentParser:
    # flags may sit before or after the subcommand; the subcommand copy must not clobber the global one
    common = _common_flags(argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="drinfeld-measures", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter,
                                 parents=[_common_flags(None)])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tree", parents=[common], help="Bruhat-Tits tree operations")
    t.add_argument("action", choices=["reduce", "act", "neighbors", "path", "ball"])
    t.add_argument("--edge")
    t.add_argument("--vertex")
    t.add_argument("--to")
    t.add_argument("--matrix")
    t.add_argument("--mode", choices=["star", "ordinary"], default="star")

    c = sub.add_parser("carlitz", parents=[common], help="Carlitz polynomial data")
    c.add_argument("action", choices=["poly", "data", "mu-weight", "table"])
    c.add_argument("--n", type=int, default=0)
    c.add_argument("--n-max", dest="n_max", type=int, default=8, help="last index for `table`")
    c.add_argument("--i", type=int, default=0)
    c.add_argument("--l", type=int, default=0)

    e = sub.add_parser("expand", parents=[common], help="annulus expansions")
    e.add_argument("action", choices=["eisenstein", "delta", "upsilon", "xi"])
    e.add_argument("--k", type=int)
    e.add_argument("--annulus", type=int, default=0)
    e.add_argument("--i", type=int, help="coefficient index (default 0 for upsilon, 1 for xi)")

    m = sub.add_parser("measure", parents=[common], help="moments, L-values and harmonicity")
    m.add_argument("action", choices=["moment", "lvalue", "harmonicity", "feq"])
    m.add_argument("--measure", choices=["delta", "poincare"], default="delta")
    m.add_argument("--edge")
    m.add_argument("--vertex")
    m.add_argument("--j", type=int)

    z = sub.add_parser("zeta", parents=[common], help="zeta(x, -j) computed two ways")
    z.add_argument("--j", type=int)

    r = sub.add_parser("reconstruct", parents=[common], help="cusp form from its measure at a point")
    r.add_argument("--z", help="point as a pi-series over F_(q^m); default: the generator")
    r.add_argument("--no-oracle", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--timing", action="store_true", help="include wall-clock seconds per suite")
    return ap


COMMANDS = {"tree": cmd_tree, "carlitz": cmd_carlitz, "expand": cmd_expand, "measure": cmd_measure,
            "zeta": cmd_zeta, "reconstruct": cmd_reconstruct, "verify": cmd_verify}


def _inline(v) -> bool:
    # scalars, flat or nested lists of scalars, and raw series stay on one line
    if isinstance(v, dict):
        return set(v) == {"lead", "coeffs", "prec"}
    if isinstance(v, list):
        return all(_inline(x) and not isinstance(x, dict) for x in v)
    return True


def _scalar(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True)


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "\n".join(f"{pad}{k}: " + _scalar(v) if _inline(v)
                         else f"{pad}{k}:\n" + _text(v, indent + 1) for k, v in obj.items())
    if isinstance(obj, list):
        return "\n".join(f"{pad}- " + _scalar(x) if _inline(x)
                         else f"{pad}-\n" + _text(x, indent + 1) for x in obj)
    return f"{pad}{obj}"


def _resolve(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        file_cfg = load_config(args.config)
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        for k, val in file_cfg.items():
            cfg[k] = val if k in ("window", "format") else int(val)
    for k in DEFAULTS:
        val = getattr(args, k, None)
        if val is not None:
            cfg[k] = val
    if cfg["prec"] < 1:
        raise UsageError("--prec must be at least 1")
    return cfg


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
        args.q_given = args.q is not None
        _field(cfg)
        result = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(json.dumps({"error": {"type": "usage", "message": str(exc)}}, sort_keys=True), file=sys.stderr)
        return 2
    except DrinfeldError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}, sort_keys=True), file=sys.stderr)
        return 1
    except ValueError as exc:
        print(json.dumps({"error": {"type": "ValueError", "message": str(exc)}}, sort_keys=True), file=sys.stderr)
        return 1
    if cfg["format"] == "text":
        print(_text(result))
    else:
        print(json.dumps(result, sort_keys=True, default=_default))
    if args.command == "verify":
        return 0 if result["ok"] else 1
    return 0


def _default(o):
    if isinstance(o, float) and math.isinf(o):
        return "inf"
    if isinstance(o, (set, tuple)):
        return list(o)
    return repr(o)


def main() -> None:
    sys.exit(run())
