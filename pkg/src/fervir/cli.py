"""``fervir`` command-line front end.

Exit status: 0 on success or a passing check, 1 when a verification fails,
2 on usage, parse or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .findim import FindimError, MatrixModule, build_Vm, cyclic_span, decompose, direct_sum
from .fock import FockError, FockSpace, character, is_smooth
from .rank2 import Identified, OddPartDecoupled, Rank2Data, Rank2Error, Rank2Family, classify_rank2
from .scalar import ONE, ScalarError, ScalarK
from .superalg import Algebra, AlgebraError, bracket, fermion_virasoro, jacobi_check, to_twice
from .text import ParseError, format_element, parse_element
from .verify import FockHandle, verify_module_axioms
from .virmod import Poly, TensorModule

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- descriptors --------------------------------------------------------------------

def load_json_arg(text: str):
    """Inline JSON, or ``@path`` to read it from a file."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def module_handle(obj: dict):
    """Module handle for a descriptor: Fock, tensor or rank-2 family."""
    if not isinstance(obj, dict):
        raise UsageError("a module descriptor must be a JSON object")
    kind = obj.get("kind")
    if kind in ("V", "V_m", "V_I"):
        return FockHandle(FockSpace.from_json(obj))
    if kind == "tensor":
        return TensorModule.from_json(obj)
    if kind == "rank2":
        return Rank2Family.from_json(obj)
    raise UsageError(f"unknown module kind {kind!r}; expected V, V_m, V_I, tensor or rank2")


def matrix_module(obj: dict) -> MatrixModule:
    kind = obj.get("kind")
    if kind == "Vm":
        return build_Vm(int(obj["m"]), ScalarK.coerce(str(obj.get("mu", "1"))))
    if kind == "direct_sum":
        parts = [matrix_module(p) for p in obj["summands"]]
        if not parts:
            raise UsageError("direct_sum needs at least one summand")
        out = parts[0]
        for p in parts[1:]:
            out = direct_sum(out, p)
        return out
    if kind == "matrix":
        return MatrixModule.from_json(obj)
    raise UsageError(f"unknown matrix module kind {kind!r}; expected Vm, direct_sum or matrix")


def _fock_key(indices) -> tuple:
    return tuple(sorted(to_twice(Fraction(str(i))) for i in indices))


def vector_from_json(handle, payload):
    """Build a vector of ``handle`` from ``[{"coef": c, "basis": key}, ...]``.

    ``basis`` is a list of indices for Fock modules, ``{"xi": [...],
    "pbw": [...]}`` for tensor modules and ``{"parity": p, "degree": k}``
    for rank-2 families.  A rank-2 vector may also be given as
    ``{"even": [coeffs], "odd": [coeffs]}``.
    """
    if isinstance(handle, Rank2Family) and isinstance(payload, dict) and ("even" in payload or "odd" in payload):
        return handle.pair(Poly.from_json(payload.get("even", [])), Poly.from_json(payload.get("odd", [])))
    terms = payload if isinstance(payload, list) else [payload]
    out: dict = {}
    for t in terms:
        coef = ScalarK.coerce(str(t.get("coef", "1")))
        b = t.get("basis", [])
        if isinstance(handle, FockHandle):
            key = _fock_key(b)
            handle.space._check_key(key)
        elif isinstance(handle, TensorModule):
            key = (_fock_key(b.get("xi", [])), tuple(sorted((int(p) for p in b.get("pbw", [])), reverse=True)))
        else:
            key = (int(b["parity"]), int(b["degree"]))
        out[key] = out.get(key, ScalarK(0)) + coef
    return handle.vector({k: c for k, c in out.items() if c})


def default_vector(handle):
    if isinstance(handle, FockHandle):
        return handle.vector({(): ONE})
    if isinstance(handle, TensorModule):
        return handle.vector({((), ()): ONE})
    return handle.vector({(0, 0): ONE})


# -- commands ----------------------------------------------------------------------------

def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _algebra(args) -> Algebra:
    if args.algebra:
        return Algebra.from_name(args.algebra)
    if args.delta is not None:
        return fermion_virasoro(Fraction(args.delta))
    raise UsageError("--algebra is required")


def cmd_bracket(args) -> int:
    alg = _algebra(args)
    x = parse_element(args.x, alg)
    y = parse_element(args.y, alg)
    res = bracket(x, y)
    _emit(args, {"algebra": alg.name, "x": format_element(x), "y": format_element(y),
                 "result": format_element(res)}, format_element(res))
    return EXIT_OK


def cmd_jacobi(args) -> int:
    alg = _algebra(args)
    report = jacobi_check(alg, args.range)
    _emit(args, report.to_json(), report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_act(args) -> int:
    handle = module_handle(load_json_arg(args.module))
    x = parse_element(args.element, handle.algebra)
    v = vector_from_json(handle, load_json_arg(args.vector)) if args.vector else default_vector(handle)
    res = handle.act(x, v)
    _emit(args, {"module": handle.describe(), "element": format_element(x),
                 "vector": str(v), "result": str(res)}, str(res))
    return EXIT_OK


def cmd_character(args) -> int:
    delta = Fraction(args.delta or "0")
    table = character(delta, args.max_n)
    rows = [{"eigenvalue": str(ev), "dim": dim} for ev, dim in table]
    lines = [f"{'L0':>10}  dim"] + [f"{r['eigenvalue']:>10}  {r['dim']}" for r in rows]
    _emit(args, {"delta": str(delta), "max_n": str(args.max_n), "table": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    handle = module_handle(load_json_arg(args.module))
    report = verify_module_axioms(handle, args.index_bound, args.degree_bound)
    _emit(args, report.to_json(), report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_classify(args) -> int:
    data = Rank2Data.from_json(load_json_arg(args.module))
    outcome = classify_rank2(data)
    _emit(args, outcome.to_json(), str(outcome))
    return EXIT_OK if isinstance(outcome, (Identified, OddPartDecoupled)) else EXIT_FAIL


def cmd_decompose(args) -> int:
    module = matrix_module(load_json_arg(args.module))
    if not args.vector:
        raise UsageError("--vector is required (a list of coordinates)")
    coords = load_json_arg(args.vector)
    if not isinstance(coords, list) or len(coords) != module.dimension:
        raise UsageError(f"--vector must list {module.dimension} coordinates")
    v = [ScalarK.coerce(str(c)) for c in coords]
    parts = decompose(module, v)
    span = cyclic_span(module, v)
    payload = {"dimension": module.dimension, "cyclic_span_dim": span.dim,
               "summands": [{"dim": S.dim, "basis": S.to_json()} for S in parts]}
    text = [f"cyclic span: dim {span.dim}; {len(parts)} simple summand(s)"]
    text += [f"  summand {i}: dim {S.dim}" for i, S in enumerate(parts)]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def cmd_is_smooth(args) -> int:
    obj = load_json_arg(args.module)
    if obj.get("kind") not in ("V", "V_m", "V_I"):
        raise UsageError("is-smooth takes a Fock module descriptor (V, V_m or V_I)")
    space = FockSpace.from_json(obj)
    smooth = is_smooth(space)
    _emit(args, {"module": space.to_json(), "smooth": smooth}, "smooth" if smooth else "not smooth")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = argparse.ArgumentParser(prog="fervir", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_flags(sp):
        sp.add_argument("--algebra", choices=["thv", "vir", "f0", "f12", "s0", "s12"])
        sp.add_argument("--delta", choices=["0", "1/2"], help="shorthand for s0 / s12")

    sp = sub.add_parser("bracket", parents=[common], help="bracket of two elements")
    algebra_flags(sp)
    sp.add_argument("x")
    sp.add_argument("y")
    sp.set_defaults(func=cmd_bracket)

    sp = sub.add_parser("jacobi", parents=[common], help="graded Jacobi identity sweep")
    algebra_flags(sp)
    sp.add_argument("--range", type=int, default=4)
    sp.set_defaults(func=cmd_jacobi)

    sp = sub.add_parser("act", parents=[common], help="act with an element on a module vector")
    sp.add_argument("--module", required=True, help="descriptor JSON or @file")
    sp.add_argument("--vector", help="vector JSON or @file (default: the generating vector)")
    sp.add_argument("element")
    sp.set_defaults(func=cmd_act)

    sp = sub.add_parser("character", parents=[common], help="L_0 weight multiplicities of V(delta)")
    sp.add_argument("--delta", choices=["0", "1/2"], default="0")
    sp.add_argument("--max-n", type=Fraction, default=Fraction(10), dest="max_n")
    sp.set_defaults(func=cmd_character)

    sp = sub.add_parser("verify-module", parents=[common], help="exhaustive module-axiom check")
    sp.add_argument("--module", required=True)
    sp.add_argument("--index-bound", type=int, default=4, dest="index_bound")
    sp.add_argument("--degree-bound", type=int, default=4, dest="degree_bound")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify-rank2", parents=[common], help="identify a rank-2 module from action data")
    sp.add_argument("--module", required=True, help="Rank2Data JSON or @file")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("decompose", parents=[common], help="split a cyclic F_[m]-submodule into simples")
    sp.add_argument("--module", required=True, help="matrix module descriptor JSON or @file")
    sp.add_argument("--vector", help="coordinates as a JSON list")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("is-smooth", parents=[common], help="smoothness of a Fock module")
    sp.add_argument("--module", required=True)
    sp.set_defaults(func=cmd_is_smooth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, AlgebraError, ScalarError, FockError, Rank2Error,
            FindimError, ValueError, KeyError, TypeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fervir: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
