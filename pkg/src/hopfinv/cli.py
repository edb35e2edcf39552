"""Command-line front end.

Exit codes: 0 clean / equal-class, 1 failed validation / distinct-class,
2 unreadable or schema-invalid input, 3 undecided, 4 any other error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .coalgebra import validate as validate_coalgebra
from .convolution import ConvolutionAlgebra, matrix_element
from .cwtower import DISTINCT, EQUAL, UNDECIDED, decide_gauge, realize
from .errors import HopfInvError, SchemaError
from .freelie import free_shifted_lie
from .graded import GradedVector
from .htt import standard_contraction, transfer_commutative, validate_contraction
from .linfty import check_generalized_jacobi, mc_residual
from .pipeline import SNAP_TOL, full_matrix, validate_primitive
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_UNDECIDED, EXIT_ERROR = 0, 1, 2, 3, 4
VERDICT_EXIT = {EQUAL: EXIT_OK, DISTINCT: EXIT_FAIL, UNDECIDED: EXIT_UNDECIDED}


def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _report_payload(rep: Report) -> dict:
    return {"kind": rep.kind, "ok": rep.ok, "checks": rep.checks,
            "failures": [{"check": f.check, "subject": f.subject, "detail": f.detail} for f in rep.failures]}


# ---- validate --------------------------------------------------------------------------

def _validate_scenario(sc, nodes: int) -> Report:
    rep = Report("scenario")
    sub = validate_coalgebra(sc.source.coalgebra)
    for c in sub.checks:
        rep.ran("coalgebra " + c)
    for f in sub.failures:
        rep.fail("coalgebra " + f.check, f.subject, f.detail)
    rep.ran("closed representatives")
    for name in sc.target.check_closed():
        rep.fail("closed representatives", name, "d of the weight-1 representative is nonzero")
    rep.ran("primitives")
    for (m, form) in sc.source.primitives:
        if m not in sc.maps:
            rep.fail("primitives", (m, form), "primitive registered for an unknown map")
            continue
        err = validate_primitive(sc.maps[m], sc.source, sc.target, form, nodes=min(nodes, 12))
        if err > 1e-6:
            rep.fail("primitives", (m, form), f"max |d beta - f*{form}| = {err:.3g}")
    return rep


def validate_document(data: dict, nodes: int = 12) -> Report:
    obj = io.parse_document(data)
    kind = data["kind"]
    if kind == "coalgebra":
        return validate_coalgebra(obj)
    if kind == "linfty":
        j = check_generalized_jacobi(obj, int(data.get("arity_cutoff", 3)))
        rep = Report("L-infinity algebra", ["generalized Jacobi"])
        for t, v in j.violations:
            rep.fail("generalized Jacobi", t, str(v))
        return rep
    if kind == "cw":
        rep = Report("CW complex", ["realization"])
        try:
            sub = validate_coalgebra(realize(obj))
        except HopfInvError as exc:
            rep.fail("realization", obj.name, str(exc))
            return rep
        for f in sub.failures:
            rep.fail(f.check, f.subject, f.detail)
        return rep
    if kind == "contraction":
        return validate_contraction(obj)
    if kind == "dga":
        return obj.validate()
    if kind == "scenario":
        return _validate_scenario(obj, nodes)
    if kind == "gauge":
        rep = Report("gauge problem", ["maurer-cartan"])
        C = realize(obj["complex"])
        conv = ConvolutionAlgebra(C, obj["algebra"])
        for name in ("tau", "kappa"):
            r = mc_residual(conv, GradedVector(conv.space, obj[name]))
            if r:
                rep.fail("maurer-cartan", name, f"residual {r}")
        return rep
    raise SchemaError(f"nothing to validate for kind {kind}")


def cmd_validate(args) -> int:
    data = io.load_json(args.path)
    rep = validate_document(data, args.nodes or 12)
    _emit(args, str(rep), _report_payload(rep))
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---- hopf / compare ---------------------------------------------------------------------------

def _options(args, sc) -> dict:
    o = dict(sc.options)
    if args.nodes is not None:
        o["nodes"] = args.nodes
    if args.weight_cutoff is not None:
        o["weight_cutoff"] = args.weight_cutoff
    if args.snap_tol is not None:
        o["snap_tolerance"] = args.snap_tol
    return {"nodes": int(o.get("nodes", 32)), "weight_cutoff": o.get("weight_cutoff"),
            "snap_tolerance": float(o.get("snap_tolerance", SNAP_TOL))}


def _matrix_text(name, M) -> str:
    lines = [f"map {name}:"]
    for (c, p), e in sorted(M.entries.items()):
        snapped = "unsnapped" if e.value is None else str(e.value)
        lines.append(f"  lambda[{c},{p}] = {e.float_value:.12g}  (error {e.error or 0:.2g})  -> {snapped}")
    for d in M.diagnostics:
        lines.append(f"  ! {d}")
    return "\n".join(lines)


def cmd_hopf(args) -> int:
    sc = io.scenario_from(io.load_json(args.scenario))
    opt = _options(args, sc)
    names = [args.map] if args.map else list(sc.maps)
    texts, payload = [], {}
    code = EXIT_OK
    for n in names:
        if n not in sc.maps:
            raise SchemaError(f"no map named {n}")
        M = full_matrix(sc.maps[n], sc.source, sc.target, opt["weight_cutoff"], opt["snap_tolerance"],
                        opt["nodes"])
        if M.diagnostics:
            code = EXIT_FAIL
        texts.append(_matrix_text(n, M))
        payload[n] = M.to_dict()
    _emit(args, "\n".join(texts), {"maps": payload})
    return code


def _decision_payload(dec) -> dict:
    wit = {}
    for k, v in dec.witness.items():
        if k == "matrices":
            wit[k] = {n: M.to_dict() for n, M in v.items()}
        elif isinstance(v, GradedVector):
            wit[k] = {l: str(c) for l, c in v.items()}
        elif isinstance(v, list):
            wit[k] = [({l: str(c) for l, c in x.items()} if isinstance(x, GradedVector) else str(x)) for x in v]
        else:
            wit[k] = str(v)
    return {"verdict": dec.verdict, "level": dec.level, "witness": wit}


def _decision_text(dec) -> str:
    lines = [f"verdict: {dec.verdict} at level {dec.level}"]
    for k, v in dec.witness.items():
        if k == "matrices":
            for n, M in v.items():
                lines.append(_matrix_text(n, M))
        else:
            lines.append(f"  {k}: {v}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    from .pipeline import compare_maps
    sc = io.scenario_from(io.load_json(args.scenario))
    pair = args.maps or sc.compare or list(sc.maps)[:2]
    if len(pair) != 2 or any(p not in sc.maps for p in pair):
        raise SchemaError("compare needs two map names present in the scenario")
    opt = _options(args, sc)
    dec = compare_maps(sc.maps[pair[0]], sc.maps[pair[1]], sc.source, sc.target, opt["nodes"],
                       opt["weight_cutoff"], opt["snap_tolerance"])
    _emit(args, _decision_text(dec), _decision_payload(dec))
    return VERDICT_EXIT[dec.verdict]


# ---- transfer / gauge / freelie ----------------------------------------------------------------------

def cmd_transfer(args) -> int:
    data = io.load_json(args.path)
    if data["kind"] != "dga":
        raise SchemaError("transfer needs a file of kind 'dga'")
    A = io.dga_from(data)
    c = io.contraction_from(data["contraction"], True, A.complex) if "contraction" in data else \
        standard_contraction(A.complex, cohomological=A.complex.d.degree == 1)
    ts = transfer_commutative(c, A, arity_cutoff=args.arity)
    out, lines = {}, []
    for n in range(2, args.arity + 1):
        tab = ts.operations(n)
        out[str(n)] = [{"inputs": list(w), "output": {k: str(x) for k, x in v.items()}} for w, v in tab.items()]
        for w, v in tab.items():
            lines.append(f"m{n}({', '.join(w)}) = {v}")
    _emit(args, "\n".join(lines) or "all transferred operations vanish", {"operations": out})
    return EXIT_OK


def cmd_gauge(args) -> int:
    data = io.load_json(args.path)
    if data["kind"] != "gauge":
        raise SchemaError("gauge needs a file of kind 'gauge'")
    g = io.parse_document(data)
    C = realize(g["complex"])
    conv = ConvolutionAlgebra(C, g["algebra"])
    tau = GradedVector(conv.space, g["tau"])
    kappa = GradedVector(conv.space, g["kappa"])
    dec = decide_gauge(g["complex"], g["algebra"], tau, kappa)
    _emit(args, _decision_text(dec), _decision_payload(dec))
    return VERDICT_EXIT[dec.verdict]


def _parse_gen(s: str):
    label, _, deg = s.partition(":")
    if not deg:
        raise SchemaError(f"generator '{s}' must look like label:degree")
    return label, int(deg)


def cmd_freelie(args) -> int:
    gens = [_parse_gen(g) for g in args.generators]
    L = free_shifted_lie(gens, args.max_degree)
    dims = L.space.dims()
    lines = [f"degree {d}: {dims[d]}  " + ", ".join(L.space.labels_in_degree(d)) for d in sorted(dims)]
    if args.brackets:
        for (a, b), v in L.table(2).items():
            lines.append(f"l2({a}, {b}) = {v}")
    _emit(args, "\n".join(lines), {"dimensions": {str(d): n for d, n in sorted(dims.items())},
                                   "basis": [[l, d] for l, d in L.space.basis]})
    return EXIT_OK


# ---- entry point --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", type=int, default=None, help="Gauss-Legendre nodes per axis")
    common.add_argument("--weight-cutoff", type=int, default=None)
    common.add_argument("--snap-tol", type=float, default=None, help="rational snapping tolerance")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="hopfinv", description="Algebraic Hopf invariants of smooth maps.",
                                epilog="Thread count for quadrature: HOPFINV_THREADS.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="validate a definition file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("hopf", parents=[common], help="coefficient matrices of the maps in a scenario")
    s.add_argument("scenario")
    s.add_argument("--map", default=None)
    s.set_defaults(func=cmd_hopf)
    s = sub.add_parser("compare", parents=[common], help="decide whether two maps are real-homotopic")
    s.add_argument("scenario")
    s.add_argument("--maps", nargs=2, default=None)
    s.set_defaults(func=cmd_compare)
    s = sub.add_parser("transfer", parents=[common], help="transferred operations on cohomology")
    s.add_argument("path")
    s.add_argument("--arity", type=int, default=3)
    s.set_defaults(func=cmd_transfer)
    s = sub.add_parser("gauge", parents=[common], help="gauge decision for two MC elements")
    s.add_argument("path")
    s.set_defaults(func=cmd_gauge)
    s = sub.add_parser("freelie", parents=[common], help="Lyndon basis of a free shifted Lie algebra")
    s.add_argument("generators", nargs="+", help="label:degree")
    s.add_argument("--max-degree", type=int, default=8)
    s.add_argument("--brackets", action="store_true")
    s.set_defaults(func=cmd_freelie)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except HopfInvError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
