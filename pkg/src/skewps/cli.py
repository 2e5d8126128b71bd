"""skewps command line.

Every command prints one canonical JSON document (sorted keys, no spaces).
Exit codes: 0 success, 1 mathematical failure or violated hypothesis,
2 usage or parse error.  Kernel errors are reported on stderr as
``<ErrorName>: <message>``.

Arguments that take data accept an inline JSON literal, ``@path`` or a path
to an existing file, or ``-`` for standard input.
"""

from __future__ import annotations

import argparse
import ast
import os
import sys

from . import checks, serialize
from .errors import ParseError, SkewError, UnknownSuite
from .level import Level
from .rings import Element, Matrix
from .series import SkewSeries
from .twist import check_compatible, check_leibniz


# -- input helpers ---------------------------------------------------------------------------

def read_text(arg):
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:]) as fh:
            return fh.read()
    if not arg.lstrip().startswith(("{", "[", '"')) and os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def read_json(arg):
    return serialize.loads(read_text(arg))


class Session:
    """(ring, twist, cap) for one invocation, validated unless --unchecked."""

    def __init__(self, ring, twist, cap=None, unchecked=False, trials=50, seed=0):
        self.ring = ring
        self.twist = twist
        self.cap = ring.N if cap is None else cap
        self.unchecked = unchecked
        self.validation = None
        if not unchecked:
            self.validation = self.validate(trials, seed)

    def validate(self, trials, seed):
        from .errors import HypothesisViolated
        out = {}
        for check in (check_leibniz, check_compatible):
            rep = check(self.twist, self.ring, trials, seed)
            out[rep.name] = {"passed": rep.passed, "trials": rep.trials}
            if not rep.passed:
                raise HypothesisViolated(
                    f"context fails the {rep.name} check (pass --unchecked to override): "
                    f"{serialize.dumps(rep.witness)}")
        return out

    @property
    def context(self):
        return serialize.Context(self.ring, self.twist, self.cap)

    def to_json(self):
        out = self.context.to_json()
        out["unchecked"] = self.unchecked
        if self.validation is not None:
            out["validated"] = self.validation
        return out


def session_from(args, literal=None):
    """Context from --ring/--twist/--cap, else from a self-contained literal."""
    if args.ring is not None:
        ring = serialize.parse_ring(read_text(args.ring))
        twist = serialize.twist_from_json(ring, read_json(args.twist) if args.twist else None,
                                          "--twist")
        cap = args.cap
    elif isinstance(literal, dict) and "ring" in literal:
        ctx = serialize.context_from_json(literal)
        ring, twist, cap = ctx.ring, ctx.twist, ctx.cap
        if args.twist:
            twist = serialize.twist_from_json(ring, read_json(args.twist), "--twist")
        if args.cap is not None:
            cap = args.cap
    else:
        raise ParseError("no ring context: pass --ring or a literal carrying \"ring\"")
    if cap is not None and not 0 < cap <= ring.N:
        raise ParseError(f"--cap {cap} outside 1..{ring.N}")
    return Session(ring, twist, cap, args.unchecked, args.trials or 50, args.seed)


def read_series(args, arg, name="--in"):
    lit = read_json(arg)
    sess = session_from(args, lit)
    if isinstance(lit, dict) and "ring" in lit and args.ring is not None:
        lit = {k: v for k, v in lit.items() if k not in ("ring", "twist")}
    return sess, serialize.series_from_json(lit, sess.context, name)


# -- eval ----------------------------------------------------------------------------------------

class _Evaluator:
    """Safe evaluation of +, -, *, ** (integer exponent), x and val() over named inputs."""

    def __init__(self, sess, names, text):
        self.sess, self.names, self.text = sess, names, text

    def fail(self, node, msg):
        pos = getattr(node, "col_offset", 0)
        raise ParseError(f"{msg} in {self.text!r}", pos)

    def series(self, v):
        if isinstance(v, Element):
            return SkewSeries.constant(v, self.sess.twist, self.sess.cap)
        return v

    def eval(self, node):
        if isinstance(node, ast.Expression):
            return self.eval(node.body)
        if isinstance(node, ast.Name):
            if node.id == "x":
                return SkewSeries.variable(self.sess.ring, self.sess.twist, self.sess.cap)
            if node.id not in self.names:
                self.fail(node, f"unknown name {node.id!r}")
            return self.names[node.id]
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return self.sess.ring.from_int(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            v = self.eval(node.operand)
            if isinstance(v, Level):
                self.fail(node, "cannot negate a level")
            return -v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = self.eval(node.left)
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    self.fail(node.right, "exponent must be a nonnegative integer literal")
                return self.series(base) ** node.right.value
            a, b = self.eval(node.left), self.eval(node.right)
            if isinstance(a, Level) or isinstance(b, Level):
                self.fail(node, "levels do not support arithmetic")
            if isinstance(a, SkewSeries) or isinstance(b, SkewSeries):
                a, b = self.series(a), self.series(b)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            self.fail(node, f"unsupported operator {type(node.op).__name__}")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id == "val" and len(node.args) == 1 and not node.keywords:
            v = self.eval(node.args[0])
            if isinstance(v, Level):
                self.fail(node, "val() of a level")
            return v.val()
        self.fail(node, f"unsupported syntax {type(node).__name__}")


def evaluate(sess, names, text):
    lead = len(text) - len(text.lstrip())
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"malformed expression {text!r}: {exc.msg}",
                         lead + (exc.offset or 1) - 1) from None
    for node in ast.walk(tree):
        if hasattr(node, "col_offset"):
            node.col_offset += lead
    return _Evaluator(sess, names, text).eval(tree)


def _result_json(v):
    if isinstance(v, Level):
        return {"kind": "level", "value": v.to_json()}
    if isinstance(v, SkewSeries):
        return {"kind": "series", "value": v.to_json()}
    return {"kind": "element", "value": v.to_json()}


def cmd_eval(args):
    doc = read_json(args.inputs) if args.inputs else {}
    if not isinstance(doc, dict):
        raise ParseError("--in must be a JSON object")
    sess = session_from(args, doc)
    raw = dict(doc.get("inputs", {}))
    for item in args.let or []:
        name, sep, lit = item.partition("=")
        if not sep or not name.isidentifier():
            raise ParseError(f"--let expects name=literal, got {item!r}")
        raw[name] = serialize.loads(read_text(lit))
    names = {}
    for name, lit in raw.items():
        path = f"$.inputs.{name}"
        if isinstance(lit, dict) and "coeffs" in lit:
            names[name] = serialize.series_from_json(lit, sess.context, path)
        else:
            names[name] = serialize.element_from_json(sess.ring, lit, path)
    out = _result_json(evaluate(sess, names, args.expr))
    out["expr"] = args.expr
    out["session"] = sess.to_json()
    return out


# -- check ----------------------------------------------------------------------------------------

def cmd_check(args):
    if args.list or args.suite is None:
        return {"suites": sorted(checks.SUITES)}
    rep = checks.run_suite(args.suite, args.trials, args.seed)
    return rep.to_json(), (0 if rep.passed else 1)


# -- reparam -----------------------------------------------------------------------------------------

def cmd_reparam(args):
    from . import reparam
    sess, s = read_series(args, args.inputs)
    if args.move == "shift":
        move = reparam.Shift(serialize.element_from_json(sess.ring, read_json(args.t), "--t"))
    else:
        move = reparam.Scale(serialize.element_from_json(sess.ring, read_json(args.a), "--a"))
    res = reparam.change_variable(s, move, trials=args.trials or 200, seed=args.seed)
    return {"move": move.to_json(), "series": serialize.series_to_json(res.series, True),
            "twist": res.twist.to_json(), "report": res.report, "session": sess.to_json()}


# -- untwist / iso -----------------------------------------------------------------------------------

def _iso(args):
    from .untwist import theorem_A_map
    ctx = serialize.iso_context_from_json(read_json(args.context))
    return ctx, theorem_A_map(ctx, trials=args.trials or 50, seed=args.seed)


def cmd_untwist(args):
    ctx, iso = _iso(args)
    return {"context": ctx.to_json(), "twist": ctx.twist().to_json(),
            "dtwist": iso.dtwist.to_json(), "iso": iso.to_json()}


def _matrix_series_from_json(x, D, twist, cap, path="$"):
    from .untwist import MatrixSeries
    if not isinstance(x, dict) or "matrix" not in x:
        raise ParseError(f"expected an object with key \"matrix\" at {path}")
    rows = x["matrix"]
    ctx = serialize.Context(D, twist, cap)
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"expected a nonempty list at {path}.matrix")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(rows):
            raise ParseError(f"expected a row of length {len(rows)} at {path}.matrix[{i}]")
        out.append([serialize.series_from_json(e, ctx, f"{path}.matrix[{i}][{j}]")
                    for j, e in enumerate(row)])
    return MatrixSeries(out)


def cmd_iso(args):
    ctx, iso = _iso(args)
    M = ctx.ring
    lit = read_json(args.series)
    if args.direction == "apply":
        s = serialize.series_from_json(lit, serialize.Context(M, ctx.twist(), M.N), "--series")
        out = iso.apply(s).to_json()
    else:
        ms = _matrix_series_from_json(lit, M.inner, iso.dtwist, M.N, "--series")
        out = serialize.series_to_json(iso.unapply(ms), True)
    return {"direction": args.direction, "result": out, "dtwist": iso.dtwist.to_json(),
            "statement": iso.to_json()["statement"]}


# -- weierstrass / ideal ------------------------------------------------------------------------------

def cmd_weierstrass(args):
    from .weierstrass import depolarize, prepare
    sess, s = read_series(args, args.series, "--series")
    core, m = depolarize(s)
    form = prepare(core, args.schedule, m)
    out = form.to_json()
    out["residual_zero"] = form.residual(core).is_zero()
    return {"prepared": out, "session": sess.to_json()}


def cmd_ideal(args):
    from . import weierstrass
    if args.context:
        ctx, iso = _iso(args)
        M = ctx.ring
        lit = read_json(args.generator)
        r = serialize.series_from_json(lit, serialize.Context(M, ctx.twist(), M.N),
                                       "--generator")
        wit = weierstrass.polynomial_in_two_sided_ideal_matrix(r, iso, args.schedule)
        return {"kind": "two-sided", "witness": wit.to_json(), "context": ctx.to_json()}
    sess, r = read_series(args, args.generator, "--generator")
    if isinstance(sess.ring, Matrix):
        raise ParseError("generators over a matrix ring need --context with the untwisting data")
    wit = weierstrass.polynomial_in_right_ideal(r, args.schedule)
    return {"kind": "right", "witness": wit.to_json(), "session": sess.to_json()}


# -- parser ------------------------------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="ring descriptor, e.g. 'Matrix(2,Zp(2,8))'")
    common.add_argument("--twist", help="twist literal {\"sigma\": [...], \"delta\": [...]}")
    common.add_argument("--cap", type=int, help="truncation level (default: the ring's N)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--unchecked", action="store_true",
                        help="skip the Leibniz/compatibility validation (recorded in output)")

    p = argparse.ArgumentParser(prog="skewps",
                                description="Skew power series arithmetic at finite precision.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    e.add_argument("expr")
    e.add_argument("--in", dest="inputs", help="{\"inputs\": {name: literal}, \"ring\": ...}")
    e.add_argument("--let", action="append", metavar="NAME=LITERAL")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", parents=[common], help="run a seeded property suite")
    c.add_argument("suite", nargs="?")
    c.add_argument("--list", action="store_true")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("reparam", help="change of variable")
    rs = r.add_subparsers(dest="move", required=True)
    for name, flag in (("shift", "--t"), ("scale", "--a")):
        q = rs.add_parser(name, parents=[common])
        q.add_argument(flag, required=True, dest=flag[2:])
        q.add_argument("--in", dest="inputs", required=True, help="series literal")
        q.set_defaults(func=cmd_reparam)

    u = sub.add_parser("untwist", parents=[common], help="build the untwisting isomorphism")
    u.add_argument("--context", required=True)
    u.set_defaults(func=cmd_untwist)

    i = sub.add_parser("iso", help="apply the untwisting isomorphism or its inverse")
    isub = i.add_subparsers(dest="direction", required=True)
    for name in ("apply", "unapply"):
        q = isub.add_parser(name, parents=[common])
        q.add_argument("--context", required=True)
        q.add_argument("--series", "--in", dest="series", required=True)
        q.set_defaults(func=cmd_iso)

    w = sub.add_parser("weierstrass", help="Weierstrass preparation")
    wsub = w.add_subparsers(dest="op", required=True)
    q = wsub.add_parser("prepare", parents=[common])
    q.add_argument("--series", "--in", dest="series", required=True)
    q.add_argument("--schedule", choices=("remainder", "residual"), default="remainder")
    q.set_defaults(func=cmd_weierstrass)

    d = sub.add_parser("ideal", help="polynomial elements of ideals")
    dsub = d.add_subparsers(dest="op", required=True)
    q = dsub.add_parser("poly", parents=[common])
    q.add_argument("--generator", "--in", dest="generator", required=True)
    q.add_argument("--context", help="untwisting data for generators over M_n(D)")
    q.add_argument("--schedule", choices=("remainder", "residual"), default="remainder")
    q.set_defaults(func=cmd_ideal)
    return p


def _error(exc):
    if isinstance(exc, ParseError):
        return f"ParseError: {exc}"
    return f"{exc.name}: {exc}"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res = args.func(args)
    except (ParseError, UnknownSuite) as exc:
        print(_error(exc), file=sys.stderr)
        return 2
    except SkewError as exc:
        print(_error(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"IOError: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(res, tuple):
        res, code = res
    text = serialize.dumps(res) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
