"""Command-line front end for the exact verifiers.

Subcommands: axioms, nprod, quantize, classify, glue-check, extend, morphism,
derivations, witness, membership, virasoro.  Text reports include timing;
the machine format is a single JSON document with deterministic key order
and no timing, so runs with the same seed and flags are byte-identical.
Exit codes: 0 for a passing verdict, 1 for a failing one, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebroid import (
    WeightOneElement,
    extract,
    fock_algebra,
    gl_basis,
    gl_bracket_table,
    gl_pairing_table,
    morphism_check,
)
from .errors import VertexAlgError
from .expr import (
    BinOp,
    Gluing,
    Ident,
    Neg,
    NProd,
    Num,
    ParseError,
    Power,
    Translate,
    parse_expr,
)
from .freefield import FreeFieldAlgebra, axiom_defect, nproduct, translate
from .geometry import (
    GluingForm,
    conformal_glue_check,
    extend_section,
    transition,
)
from .laurent import LaurentElement
from .scalar import ParamScalar
from .veronese import (
    build_model,
    classify_admissible,
    derivations,
    gl2_chart_images,
    higher_witness,
    omega_membership,
    solve_charge,
)

PASSING = {"pass", "unique", "non-quantizable", "member"}


@dataclass
class Report:
    command: str
    status: str
    payload: dict = field(default_factory=dict)
    timing: float = 0.0

    def render(self, fmt: str) -> str:
        if fmt == "machine":
            doc = {"command": self.command, "status": self.status,
                   "payload": self.payload}
            return json.dumps(doc, sort_keys=True)
        lines = [f"command: {self.command}", f"status: {self.status}"]
        for key in sorted(self.payload):
            lines.append(f"{key}: {self.payload[key]}")
        lines.append(f"timing: {self.timing:.3f}s")
        return "\n".join(lines)


class UsageError(Exception):
    pass


# -- expression evaluation -----------------------------------------------------


def _as_laurent(elem):
    """The underlying chart function when the element has no tail symbols."""
    variables = elem.algebra.variables
    out = LaurentElement(variables)
    for (alpha, tail), c in elem.terms.items():
        if tail:
            return None
        out = out + LaurentElement.monomial(variables, alpha, c)
    return out


def eval_fock(node, alg: FreeFieldAlgebra, params: dict[str, Fraction]):
    """Evaluate an expression tree inside the free-field algebra."""
    if isinstance(node, Num):
        return alg.vacuum().scale(ParamScalar.of(node.value))
    if isinstance(node, Ident):
        name = node.name
        if name in alg.variables:
            return alg.coordinate(alg.variables.index(name) + 1)
        if name.startswith("d") and name[1:].isdigit():
            i = int(name[1:])
            if 1 <= i <= len(alg.variables):
                return alg.frame(i)
        if name in params:
            return alg.vacuum().scale(ParamScalar.of(params[name]))
        return alg.vacuum().scale(ParamScalar.var(name))
    if isinstance(node, Translate):
        return translate(eval_fock(node.arg, alg, params))
    if isinstance(node, Gluing):
        raise UsageError("gluing symbols w[a,b] only make sense in --omega")
    if isinstance(node, Neg):
        return -eval_fock(node.arg, alg, params)
    if isinstance(node, BinOp):
        left = eval_fock(node.left, alg, params)
        right = eval_fock(node.right, alg, params)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return nproduct(left, -1, right)
    if isinstance(node, Power):
        base = eval_fock(node.base, alg, params)
        f = _as_laurent(base)
        if f is not None:
            return alg.from_laurent(f ** node.exponent)
        if node.exponent < 0:
            raise UsageError("negative powers need an invertible chart function")
        out = alg.vacuum()
        for _ in range(node.exponent):
            out = nproduct(out, -1, base)
        return out
    if isinstance(node, NProd):
        return nproduct(eval_fock(node.left, alg, params), node.n,
                        eval_fock(node.right, alg, params))
    raise UsageError(f"cannot evaluate node {node!r}")


def eval_gluing(node, params: dict[str, Fraction]):
    """Evaluate an expression tree to a gluing form or a scalar."""
    if isinstance(node, Num):
        return ParamScalar.of(node.value)
    if isinstance(node, Ident):
        if node.name in params:
            return ParamScalar.of(params[node.name])
        return ParamScalar.var(node.name)
    if isinstance(node, Gluing):
        return GluingForm.basis(node.a, node.b)
    if isinstance(node, Neg):
        inner = eval_gluing(node.arg, params)
        return -inner if isinstance(inner, GluingForm) else -inner
    if isinstance(node, BinOp):
        left = eval_gluing(node.left, params)
        right = eval_gluing(node.right, params)
        if node.op == "*":
            if isinstance(left, ParamScalar) and isinstance(right, GluingForm):
                return right.scale(left)
            if isinstance(left, GluingForm) and isinstance(right, ParamScalar):
                return left.scale(right)
            if isinstance(left, ParamScalar) and isinstance(right, ParamScalar):
                return left * right
            raise UsageError("cannot multiply two gluing forms")
        if type(left) is not type(right):
            raise UsageError("cannot add a scalar and a gluing form")
        return left + right if node.op == "+" else left - right
    if isinstance(node, Power) and isinstance(eval_gluing(node.base, params),
                                              ParamScalar):
        return eval_gluing(node.base, params) ** node.exponent
    raise UsageError("only scalars and w[a,b] terms are allowed in a gluing form")


def _require_gluing(node, params) -> GluingForm:
    out = eval_gluing(node, params)
    if not isinstance(out, GluingForm):
        raise UsageError("--omega must evaluate to a gluing form")
    return out


def _section_from_expr(text: str, params, n_vars: int = 2,
                       max_weight: int = 3) -> WeightOneElement:
    variables = tuple(f"y{i}" for i in range(1, n_vars + 1))
    alg = fock_algebra(variables, max_weight)
    elem = eval_fock(parse_expr(text), alg, params)
    return extract(elem, "U1")


# -- command implementations -----------------------------------------------------


def _cmd_axioms(args, params) -> Report:
    if args.seed is None:
        if args.format == "machine":
            raise UsageError("machine-format randomized runs need --seed")
        args.seed = random.SystemRandom().randint(0, 2 ** 31)
    rng = random.Random(args.seed)
    weight = args.weight if args.weight is not None else 2
    trials = args.trials if args.trials is not None else 200
    variables = tuple(f"y{i}" for i in range(1, (args.n or 2) + 1))
    alg = FreeFieldAlgebra(variables, weight * 2 + 2)

    def rand_elem(max_wt):
        while True:
            wt = rng.randint(0, max_wt)
            out = alg.zero()
            for _ in range(rng.randint(1, 2)):
                alpha = tuple(rng.randint(-1, 2) for _ in variables)
                tail, rem = [], wt
                while rem > 0:
                    if rng.random() < 0.5:
                        m = rng.randint(1, rem)
                        tail.append(("y", rng.randint(1, len(variables)), m))
                        rem -= m
                    else:
                        m = rng.randint(0, rem - 1)
                        tail.append(("d", rng.randint(1, len(variables)), m))
                        rem -= m + 1
                key = (alpha, tuple(sorted(tail, key=lambda s: (s[0], s[1], -s[2]))))
                out = out + alg.element({key: ParamScalar.of(rng.randint(-3, 3))})
            if not out.is_zero():
                return out

    bad = 0
    for _ in range(trials):
        a = rand_elem(weight)
        b = rand_elem(weight)
        c = alg.coordinate(rng.randint(1, len(variables)))
        n = rng.randint(-1, 1)
        if not axiom_defect("vacuum", a).is_zero():
            bad += 1
        if not axiom_defect("translation", a, n, b).is_zero():
            bad += 1
        if not axiom_defect("skew", a, n, b).is_zero():
            bad += 1
        if not axiom_defect("jacobi", a, rng.randint(0, 1), b, n, c).is_zero():
            bad += 1
    status = "pass" if bad == 0 else "fail"
    return Report("axioms", status,
                  {"trials": trials, "defects": bad, "seed": args.seed,
                   "weight": weight})


def _cmd_nprod(args, params) -> Report:
    n_vars = args.n or 2
    weight = args.weight if args.weight is not None else 3
    variables = tuple(f"y{i}" for i in range(1, n_vars + 1))
    alg = fock_algebra(variables, weight)
    value = eval_fock(parse_expr(args.expr), alg, params)
    return Report("nprod", "pass", {"value": str(value)})


def _cmd_quantize(args, params) -> Report:
    if args.N is None:
        raise UsageError("quantize needs --N")
    model = build_model(2, args.N, args.degree_bound)
    res = solve_charge(model)
    payload = {"charge": None if res.charge is None else str(res.charge),
               "gluing": repr(res.admissible_gluing)}
    return Report("quantize", res.status, payload)


def _cmd_classify(args, params) -> Report:
    if args.N is None:
        raise UsageError("classify needs --N")
    bound = args.degree_bound if args.degree_bound is not None else 4
    model = build_model(2, args.N)
    survivors = classify_admissible(model, bound)
    return Report("classify", "pass",
                  {"bound": bound, "survivors": [repr(s) for s in survivors]})


def _cmd_glue_check(args, params) -> Report:
    if args.omega is None:
        raise UsageError("glue-check needs --omega")
    omega = _require_gluing(parse_expr(args.omega), params)
    ok = conformal_glue_check(omega)
    return Report("glue-check", "pass" if ok else "fail", {"omega": repr(omega)})


def _cmd_extend(args, params) -> Report:
    if args.omega is None:
        raise UsageError("extend needs --omega")
    omega = _require_gluing(parse_expr(args.omega), params)
    section = _section_from_expr(args.expr, params)
    if args.chart == "U2":
        # work in the mirrored chart by swapping the roles via the transition
        section = transition(section, omega, "2->1")
    out = extend_section(section, omega)
    if out is None:
        return Report("extend", "fail", {"section": repr(section)})
    return Report("extend", "pass",
                  {"section": repr(out),
                   "other_chart": repr(transition(out, omega))})


def _cmd_morphism(args, params) -> Report:
    n = args.n or 2
    if n == 2:
        k = ParamScalar.of(params["k"]) if "k" in params else ParamScalar.var("k")
        images = gl2_chart_images(k)
    else:
        variables = tuple(f"y{i}" for i in range(1, n + 1))
        images = {}
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                images[f"E{a}{b}"] = WeightOneElement.field(
                    "U1", variables, b, LaurentElement.coordinate(variables, a))
    rep = morphism_check(gl_basis(n), gl_bracket_table(n), gl_pairing_table(n),
                         images)
    payload = {"levels": None if rep.levels is None else
               [str(x) for x in rep.levels],
               "failures": [str(f) for f in rep.failures]}
    return Report("morphism", rep.status, payload)


def _cmd_derivations(args, params) -> Report:
    if args.N is None:
        raise UsageError("derivations needs --N")
    bound = args.degree_bound
    model = build_model(2, args.N, bound)
    rep = derivations(model, args.degree)
    return Report("derivations", "pass",
                  {"degree": rep.degree, "dimension": rep.dimension,
                   "gl_generates": rep.gl_generates})


def _cmd_witness(args, params) -> Report:
    if args.N is None or args.n is None:
        raise UsageError("witness needs --n and --N")
    model = build_model(args.n, args.N)
    witness, verdict = higher_witness(model)
    return Report("witness", verdict, {"witness": repr(witness)})


def _cmd_membership(args, params) -> Report:
    if args.N is None:
        raise UsageError("membership needs --N")
    if args.omega is None:
        raise UsageError("membership needs --omega")
    n = args.n or 2
    model = build_model(n, args.N, args.degree_bound)
    section = _section_from_expr(args.omega, params, n_vars=n)
    if section.field_part:
        raise UsageError("--omega must be a pure one-form")
    member = omega_membership(section.form_part, model)
    return Report("membership", "member" if member else "non-member",
                  {"omega": repr(section.form_part)})


def _cmd_virasoro(args, params) -> Report:
    n = args.n or 2
    weight = args.weight if args.weight is not None else 4
    variables = tuple(f"y{i}" for i in range(1, n + 1))
    alg = FreeFieldAlgebra(variables, weight)
    L = alg.virasoro_element()
    checks = {
        "L_(0)L = T(L)": nproduct(L, 0, L) == translate(L),
        "L_(1)L = 2L": nproduct(L, 1, L) == L.scale(2),
        "L_(2)L = 0": nproduct(L, 2, L).is_zero(),
        "L_(3)L = n*vac": nproduct(L, 3, L) == alg.vacuum().scale(n),
    }
    status = "pass" if all(checks.values()) else "fail"
    return Report("virasoro", status,
                  {name: bool(ok) for name, ok in checks.items()})


COMMANDS = {
    "axioms": _cmd_axioms,
    "nprod": _cmd_nprod,
    "quantize": _cmd_quantize,
    "classify": _cmd_classify,
    "glue-check": _cmd_glue_check,
    "extend": _cmd_extend,
    "morphism": _cmd_morphism,
    "derivations": _cmd_derivations,
    "witness": _cmd_witness,
    "membership": _cmd_membership,
    "virasoro": _cmd_virasoro,
}


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line: {raw.strip()!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _parse_params(pairs) -> dict[str, Fraction]:
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise UsageError(f"--param expects name=value, got {pair!r}")
        name, value = pair.split("=", 1)
        params[name.strip()] = Fraction(value.strip())
    return params


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="vertexalg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--N", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--weight", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--degree-bound", dest="degree_bound", type=int, default=None)
        p.add_argument("--degree", type=int, default=0)
        p.add_argument("--param", action="append", default=[])
        p.add_argument("--chart", choices=("U1", "U2"), default="U1")
        p.add_argument("--omega", default=None)
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--config", default=None)
        if name in ("nprod", "extend"):
            p.add_argument("expr")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            config = _read_config(args.config)
            for key in ("degree_bound", "weight", "trials"):
                if key in config and getattr(args, key) is None:
                    setattr(args, key, int(config[key]))
        params = _parse_params(args.param)
        start = time.monotonic()
        report = COMMANDS[args.command](args, params)
        report.timing = time.monotonic() - start
    except (UsageError, ParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except VertexAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.render(args.format))
    return 0 if report.status in PASSING else 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
