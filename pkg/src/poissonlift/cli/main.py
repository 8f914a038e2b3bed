"""Command dispatcher for the ``poissonlift`` console script.

Model-producing commands print the whole model with the new object appended,
so commands chain through pipes::

    poissonlift scenario so3 | poissonlift lift complete | poissonlift check-poisson

Exit codes: 0 all checks PASS, 1 a check FAILed, 2 usage or parse error.
"""

import argparse
import json
import sys

from ..brackets import (
    AlgebroidSymTensor,
    cotangent_algebroid,
    koszul_bracket,
    schouten_bracket,
    sym_bracket,
    tangent_algebroid,
)
from ..errors import ConventionError, StructuralError
from ..geometry import (
    LinearConnection,
    Multivector,
    NonlinearConnection,
    SymCovariant,
    linear_curvature,
)
from ..lifts import complete_lift, graded_nabla_lift, horizontal_lift_bivector, nonlinear_curvature
from ..poisson import (
    Decision,
    Report,
    check_graded_poisson,
    compatibility_check,
    is_poisson,
    is_transversal_poisson,
    modular_field,
    riemannian_volume,
    sasaki_volume,
    shape_analysis,
    vertical_foliation,
)
from .dsl import ParseError, format_model, kind_of, model_to_json, parse_model
from .scenarios import NAMES, scenario


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing

def _parser():
    def options(sub):
        # subcommands repeat the options under separate dests; _merge folds
        # them back so they may appear before or after the command name
        pre = "sub_" if sub else ""
        kw = {"default": argparse.SUPPRESS} if sub else {}
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--model", dest=pre + "model", metavar="FILE",
                       help="model file (default: standard input)", **kw)
        g.add_argument("--format", dest=pre + "format", choices=("text", "json"),
                       **(kw or {"default": "text"}))
        g.add_argument("--name", dest=pre + "name", help="name for the produced object", **kw)
        return g

    common = options(True)
    p = argparse.ArgumentParser(
        prog="poissonlift", parents=[options(False)],
        description="Exact Poisson calculus on manifolds and their tangent bundles.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("scenario", parents=[common], help="print a built-in model")
    s.add_argument("scenario_name", metavar="NAME", help=", ".join(NAMES))

    for name, helptext in (("check-poisson", "test [T, T] = 0"),
                           ("check-semi-poisson", "transversal Poisson test for the vertical foliation"),
                           ("check-graded", "graded Poisson test through D, Psi and Xi"),
                           ("analyze", "graded shape of a bivector on T M")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("target", nargs="?", metavar="T")

    lift = sub.add_parser("lift", parents=[common], help="lift a bivector to T M")
    lift.add_argument("how", choices=("complete", "horizontal", "graded-nabla"))
    lift.add_argument("target", nargs="?", metavar="w")
    lift.add_argument("--conn", help="connection (horizontal, graded-nabla)")

    br = sub.add_parser("bracket", parents=[common], help="compute a bracket")
    br.add_argument("which", choices=("schouten", "symmetric", "koszul"))
    br.add_argument("args", nargs="+", metavar="OBJ")
    br.add_argument("--algebroid", default=None, help="tangent | cotangent:w")

    mod = sub.add_parser("modular", parents=[common], help="modular vector field")
    mod.add_argument("target", nargs="?", metavar="T")
    mod.add_argument("--volume", required=True, help="volume name, riemann:g or sasaki:g")

    cur = sub.add_parser("curvature", parents=[common], help="curvature of a connection")
    cur.add_argument("--conn", required=True)

    cp = sub.add_parser("compat", parents=[common], help="test [A, B] = 0")
    cp.add_argument("first", metavar="A")
    cp.add_argument("second", metavar="B")
    return p


# ---------------------------------------------------------------------------
# helpers

BIVECTOR = ("bivector",)
MULTI = ("function", "vector", "bivector", "multivector")


def _lookup(model, name, kinds):
    e = model.last(kinds) if name is None else model.get(name)
    if e.kind not in kinds:
        raise UsageError(f"{e.name} is a {e.kind}, expected {' or '.join(kinds)}")
    return e


def _normalize(obj):
    if isinstance(obj, SymCovariant) and obj.degree == 1:
        return obj.to_oneform()
    if isinstance(obj, SymCovariant) and obj.degree == 0:
        return Multivector.function(obj.chart, obj.scalar)
    return obj


def _append(model, obj, default_name, args):
    obj = _normalize(obj)
    kind, degree = kind_of(obj)
    name = args.name or model.fresh(default_name)
    model.add(name, kind, obj, degree)
    return model


def _volume(model, spec, chart):
    if ":" in spec:
        how, gname = spec.split(":", 1)
        g = _lookup(model, gname, ("metric",)).obj
        if how == "sasaki":
            return sasaki_volume(g)
        if how == "riemann":
            return riemannian_volume(g)
        raise UsageError(f"unknown volume constructor {how!r} (use riemann: or sasaki:)")
    return _lookup(model, spec, ("volume",)).obj


def _connection(model, name):
    return _lookup(model, name, ("linconn", "nonlinconn")).obj


def _report(name, decision):
    r = Report()
    r.add(name, decision)
    return r


# ---------------------------------------------------------------------------
# commands

def _cmd_lift(model, args):
    e = _lookup(model, args.target, BIVECTOR)
    w = e.obj
    if w.chart.is_tangent:
        raise UsageError(f"{e.name} already lives on a tangent chart")
    if args.how == "complete":
        return _append(model, complete_lift(w), f"{e.name}C", args)
    if args.conn is None:
        raise UsageError(f"lift {args.how} needs --conn")
    conn = _connection(model, args.conn)
    if args.how == "horizontal":
        if isinstance(conn, LinearConnection):
            conn = NonlinearConnection.from_linear(conn)
        return _append(model, horizontal_lift_bivector(w, conn), f"{e.name}H", args)
    if not isinstance(conn, LinearConnection):
        raise UsageError("the graded nabla-lift needs a linear connection")
    return _append(model, graded_nabla_lift(w, conn), f"{e.name}N", args)


def _cmd_bracket(model, args):
    if args.which == "schouten":
        if len(args.args) != 2:
            raise UsageError("bracket schouten takes two multivectors")
        a, b = (_lookup(model, n, MULTI) for n in args.args)
        return _append(model, schouten_bracket(a.obj, b.obj), f"br_{a.name}_{b.name}", args)
    if args.which == "koszul":
        if len(args.args) != 3:
            raise UsageError("bracket koszul takes a bivector and two one-forms")
        w = _lookup(model, args.args[0], BIVECTOR).obj
        a, b = (_lookup(model, n, ("oneform",)) for n in args.args[1:])
        return _append(model, koszul_bracket(w, a.obj, b.obj), f"kb_{a.name}_{b.name}", args)
    # symmetric
    if len(args.args) != 2:
        raise UsageError("bracket symmetric takes two objects")
    spec = args.algebroid or "tangent"
    if spec == "tangent":
        a, b = (_lookup(model, n, ("function", "vector")) for n in args.args)
        A = tangent_algebroid(a.obj.chart)
        conv = lambda e: (AlgebroidSymTensor.function(A, e.obj.scalar) if e.kind == "function"  # noqa: E731
                          else AlgebroidSymTensor.from_section(A, e.obj.vector_components()))
        r = sym_bracket(A, conv(a), conv(b))
        out = (Multivector.function(A.chart, r[()]) if r.degree == 0
               else Multivector.vector(A.chart, [r[(u,)] for u in range(A.rank)]))
        return _append(model, out, f"sb_{a.name}_{b.name}", args)
    if spec.startswith("cotangent:"):
        w = _lookup(model, spec.split(":", 1)[1], BIVECTOR).obj
        A = cotangent_algebroid(w)
        a, b = (_lookup(model, n, ("function", "oneform", "symtensor")) for n in args.args)

        def conv(e):
            if e.kind == "function":
                return AlgebroidSymTensor.function(A, e.obj.scalar)
            G = SymCovariant.from_oneform(e.obj) if e.kind == "oneform" else e.obj
            return AlgebroidSymTensor.from_symcovariant(A, G)

        r = sym_bracket(A, conv(a), conv(b)).to_symcovariant()
        return _append(model, r, f"sb_{a.name}_{b.name}", args)
    raise UsageError(f"unknown algebroid {spec!r} (use tangent or cotangent:w)")


def _cmd_modular(model, args):
    e = _lookup(model, args.target, BIVECTOR)
    mu = _volume(model, args.volume, e.obj.chart)
    if mu.chart != e.obj.chart:
        raise UsageError("bivector and volume live on different charts")
    return _append(model, modular_field(e.obj, mu), f"mod_{e.name}", args)


def _curvature_lines(conn):
    if isinstance(conn, LinearConnection):
        R = linear_curvature(conn)
        return [f"R[{k + 1},{h + 1},{i + 1},{j + 1}] = {v}"
                for (k, h, i, j), v in sorted(R.items()) if i < j]
    R = nonlinear_curvature(conn)
    return [f"R[{k + 1},{i + 1},{j + 1}] = {v}" for (k, i, j), v in sorted(R.items()) if i < j]


def _cmd_check_graded(model, args):
    e = _lookup(model, args.target, BIVECTOR)
    if not e.obj.chart.is_tangent:
        raise UsageError(f"{e.name} is not on a tangent chart")
    shape = shape_analysis(e.obj)
    if shape.kind != "graded":
        r = Report()
        r.add("graded_shape", Decision(False, ((), shape.kind)))
        return r
    r = check_graded_poisson(shape.parts)
    direct = is_poisson(e.obj)
    r.add("matches_jacobi", Decision(direct.ok == r["verdict"].ok,
                                     direct.witness or ((), "verdict differs from [W,W] = 0")))
    return r


def _merge(args):
    for key in ("model", "format", "name"):
        if hasattr(args, "sub_" + key):
            setattr(args, key, getattr(args, "sub_" + key))
            delattr(args, "sub_" + key)
    return args


def _parse(argv):
    return _merge(_parser().parse_args(argv))


def run_command(model, argv):
    """Execute one command; returns (output text, exit code).

    ``model`` may be None for ``scenario``.  Raises ParseError, UsageError or
    StructuralError on bad input.
    """
    return _dispatch(model, _parse(argv))


def _dispatch(model, args):
    fmt = args.format

    def emit_model(m):
        if fmt == "json":
            return json.dumps(model_to_json(m), indent=2) + "\n", 0
        return format_model(m), 0

    def emit_report(r):
        text = r.to_json() + "\n" if fmt == "json" else str(r) + "\n"
        return text, 0 if r.passed else 1

    c = args.command
    if c == "scenario":
        return emit_model(scenario(args.scenario_name))
    if model is None:
        raise UsageError("no model given")
    if c == "check-poisson":
        e = _lookup(model, args.target, BIVECTOR)
        return emit_report(_report("poisson", is_poisson(e.obj)))
    if c == "check-semi-poisson":
        e = _lookup(model, args.target, BIVECTOR)
        if not e.obj.chart.is_tangent:
            raise UsageError(f"{e.name} is not on a tangent chart")
        return emit_report(is_transversal_poisson(e.obj, vertical_foliation(e.obj.chart)))
    if c == "check-graded":
        return emit_report(_cmd_check_graded(model, args))
    if c == "analyze":
        e = _lookup(model, args.target, BIVECTOR)
        if not e.obj.chart.is_tangent:
            raise UsageError(f"{e.name} is not on a tangent chart")
        shape = shape_analysis(e.obj)
        if fmt == "json":
            return json.dumps({"shape": shape.kind, "reason": shape.reason,
                               "parts": shape.parts.lines() if shape.parts else []},
                              indent=2) + "\n", 0
        return "\n".join(shape.lines()) + "\n", 0
    if c == "lift":
        return emit_model(_cmd_lift(model, args))
    if c == "bracket":
        return emit_model(_cmd_bracket(model, args))
    if c == "modular":
        return emit_model(_cmd_modular(model, args))
    if c == "curvature":
        lines = _curvature_lines(_connection(model, args.conn))
        if fmt == "json":
            return json.dumps(lines, indent=2) + "\n", 0
        return ("\n".join(lines) + "\n") if lines else "curvature = 0\n", 0
    if c == "compat":
        a = _lookup(model, args.first, BIVECTOR)
        b = _lookup(model, args.second, BIVECTOR)
        return emit_report(_report("compatible", compatibility_check(a.obj, b.obj)))
    raise UsageError(f"unknown command {c!r}")


def main(argv=None):
    try:
        args = _parse(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return exc.code if isinstance(exc.code, int) else 2
    try:
        model = None
        if args.command != "scenario":
            if args.model:
                with open(args.model, encoding="utf-8") as fh:
                    text = fh.read()
            elif sys.stdin is not None and not sys.stdin.isatty():
                text = sys.stdin.read()
            else:
                raise UsageError("no model: pass --model FILE or pipe one on stdin")
            model = parse_model(text)
        out, code = _dispatch(model, args)
    except (ParseError, UsageError, StructuralError, ConventionError, OSError) as exc:
        print(f"poissonlift: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return code


__all__ = ["main", "run_command", "UsageError"]
