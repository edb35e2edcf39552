"""JSON file formats. Every file carries format_version and kind; exact rationals are strings "p/q"."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .coalgebra import CInftyCoalgebra
from .cwtower import AlgebraicCWComplex
from .errors import ArgumentError, SchemaError
from .forms import DifferentialForm, ParametrizedCycle, SmoothMapSpec
from .freelie import free_shifted_lie
from .graded import GradedMap, GradedSpace, GradedVector
from .htt import ChainComplex, CommutativeDGA, Contraction
from .linfty import LInftyAlgebra, TableLInfty, freeze
from .pipeline import SourceModel, TargetModel

FORMAT_VERSION = 1
KINDS = ("coalgebra", "linfty", "cw", "contraction", "dga", "scenario", "gauge")


def _need(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{where}: missing field '{key}'")
    return data[key]


def _frac_table(d: dict) -> dict:
    return {k: Fraction(v) for k, v in d.items()}


def _str_table(v: GradedVector) -> dict:
    return {k: str(c) for k, c in v.items()}


# ---- graded pieces ------------------------------------------------------------------

def space_from(data, name, where) -> GradedSpace:
    basis = _need(data, "basis", where)
    try:
        return GradedSpace(name, tuple((b["label"], int(b["degree"])) for b in basis))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{where}.basis: each entry needs label and degree") from exc


def map_from(rows, source: GradedSpace, target: GradedSpace, degree: int, where) -> GradedMap:
    try:
        m = {r["of"]: _frac_table(r["image"]) for r in rows}
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{where}: rows need 'of' and 'image'") from exc
    return GradedMap(source, target, degree, m)


def map_rows(f: GradedMap) -> list:
    return [{"of": k, "image": _str_table(v)} for k, v in f.matrix.items()]


# ---- L-infinity ---------------------------------------------------------------------

def linfty_to_dict(L: LInftyAlgebra) -> dict:
    gens = getattr(L, "free_generators", None)
    if gens is not None:
        return {"free_lie": {"generators": [[l, d] for l, d in gens], "max_degree": L.max_degree}}
    T = L if isinstance(L, TableLInfty) else freeze(L)
    out = {"basis": [{"label": l, "degree": d} for l, d in T.space.basis], "brackets": []}
    for n, tab in sorted(T.brackets.items()):
        for inputs, v in tab.items():
            if v:
                out["brackets"].append({"inputs": list(inputs), "output": _str_table(v)})
    if T.max_degree is not None:
        out["max_degree"] = T.max_degree
    return out


def linfty_from(data: dict, where="algebra") -> LInftyAlgebra:
    if "free_lie" in data:
        fl = data["free_lie"]
        gens = [(g[0], int(g[1])) for g in _need(fl, "generators", where + ".free_lie")]
        return free_shifted_lie(gens, int(_need(fl, "max_degree", where + ".free_lie")), name=data.get("name", "sLie"))
    sp = space_from(data, data.get("name", "L"), where)
    tabs: dict = {}
    for k, b in enumerate(data.get("brackets", [])):
        inputs = tuple(_need(b, "inputs", f"{where}.brackets[{k}]"))
        tabs.setdefault(len(inputs), {})[inputs] = _frac_table(_need(b, "output", f"{where}.brackets[{k}]"))
    md = data.get("max_degree")
    return TableLInfty(sp, tabs, max_arity=max(tabs, default=0), max_degree=md, name=data.get("name", "L"))


# ---- contractions and algebras ----------------------------------------------------------

def complex_from(data, name, where) -> ChainComplex:
    sp = space_from(data, name, where)
    deg = int(data.get("differential_degree", -1))
    return ChainComplex(sp, map_from(data.get("differential", []), sp, sp, deg, where + ".differential"))


def contraction_to_dict(c: Contraction) -> dict:
    def cx(x: ChainComplex):
        return {"basis": [{"label": l, "degree": d} for l, d in x.space.basis],
                "differential_degree": x.d.degree, "differential": map_rows(x.d)}
    return {"cohomological": c.cohomological, "big": cx(c.big), "small": cx(c.small),
            "i": map_rows(c.i), "p": map_rows(c.p), "h": map_rows(c.h)}


def contraction_from(data, check=False, big: ChainComplex | None = None) -> Contraction:
    """big: reuse an already loaded complex (the one of a dga file) instead of the stored one."""
    coh = bool(data.get("cohomological", False))
    if big is None:
        big = complex_from(_need(data, "big", "contraction"), "big", "contraction.big")
    small = complex_from(_need(data, "small", "contraction"), "small", "contraction.small")
    i = map_from(_need(data, "i", "contraction"), small.space, big.space, 0, "contraction.i")
    p = map_from(_need(data, "p", "contraction"), big.space, small.space, 0, "contraction.p")
    h = map_from(_need(data, "h", "contraction"), big.space, big.space, -1 if coh else 1, "contraction.h")
    return Contraction(big, small, i, p, h, coh, check=check)


def dga_from(data) -> CommutativeDGA:
    data = dict(data)
    data.setdefault("differential_degree", 1)
    cx = complex_from(data, data.get("name", "A"), "dga")
    prod = {}
    for k, row in enumerate(data.get("product", [])):
        a, b = _need(row, "inputs", f"dga.product[{k}]")
        prod[(a, b)] = cx.space.vector(_frac_table(_need(row, "output", f"dga.product[{k}]")))
    return CommutativeDGA(cx, prod)


def dga_to_dict(A: CommutativeDGA) -> dict:
    return {"basis": [{"label": l, "degree": d} for l, d in A.space.basis],
            "differential_degree": A.complex.d.degree, "differential": map_rows(A.complex.d),
            "product": [{"inputs": list(k), "output": _str_table(v)} for k, v in A.product.items()]}


# ---- models -------------------------------------------------------------------------------

def form_from(data, chart, where) -> DifferentialForm:
    if isinstance(data, dict) and "chart" not in data:
        data = {"chart": list(chart), "components": data}
    try:
        return DifferentialForm.from_dict(data)
    except ArgumentError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def source_to_dict(S: SourceModel) -> dict:
    out = {"name": S.name, "coalgebra": S.coalgebra.to_dict(), "chart": list(S.chart),
           "cycles": {l: c.to_dict() for l, c in S.cycles.items()}}
    if S.primitives:
        out["primitives"] = [{"map": m, "form": f, "value": v.to_dict()["components"]}
                             for (m, f), v in S.primitives.items()]
    if S.harmonic:
        out["harmonic"] = {l: v.to_dict()["components"] for l, v in S.harmonic.items()}
    if S.complex is not None:
        out["complex"] = S.complex.to_dict()
    return out


def source_from(data) -> SourceModel:
    chart = _need(data, "chart", "source")
    C = CInftyCoalgebra.from_dict(_need(data, "coalgebra", "source"), data.get("name", "M"))
    cycles = {l: ParametrizedCycle.from_dict(c, l) for l, c in _need(data, "cycles", "source").items()}
    prims = {(p["map"], p["form"]): form_from(p["value"], chart, f"source.primitives[{k}]")
             for k, p in enumerate(data.get("primitives", []))}
    harm = {l: form_from(v, chart, f"source.harmonic.{l}") for l, v in data.get("harmonic", {}).items()}
    K = AlgebraicCWComplex.from_dict(data["complex"], C.space.name) if "complex" in data else None
    return SourceModel(C, chart, cycles, prims, harm, K, data.get("name", "M"))


def target_to_dict(T: TargetModel) -> dict:
    return {"name": T.name, "algebra": linfty_to_dict(T.L), "chart": list(T.chart),
            "forms": {n: f.to_dict()["components"] for n, f in T.forms.items()},
            "representatives": {l: {str(w): [{"coeff": str(c), "word": list(word)} for c, word in terms]
                                    for w, terms in reps.items()}
                                for l, reps in T.representatives.items()}}


def target_from(data) -> TargetModel:
    chart = _need(data, "chart", "target")
    L = linfty_from(_need(data, "algebra", "target"), "target.algebra")
    forms = {n: form_from(f, chart, f"target.forms.{n}") for n, f in _need(data, "forms", "target").items()}
    reps = {}
    for l, byw in _need(data, "representatives", "target").items():
        reps[l] = {int(w): [(Fraction(t["coeff"]), tuple(t["word"])) for t in terms] for w, terms in byw.items()}
    return TargetModel(L, chart, forms, reps, data.get("name", "N"))


def map_to_dict(f: SmoothMapSpec) -> dict:
    return f.to_dict()


def scenario_to_dict(src: SourceModel, tgt: TargetModel, maps: dict, options: dict | None = None,
                     compare=None) -> dict:
    out = {"format_version": FORMAT_VERSION, "kind": "scenario", "source": source_to_dict(src),
           "target": target_to_dict(tgt), "maps": {n: map_to_dict(f) for n, f in maps.items()}}
    if compare:
        out["compare"] = list(compare)
    if options:
        out["options"] = dict(options)
    return out


class Scenario:
    def __init__(self, source: SourceModel, target: TargetModel, maps: dict, options: dict, compare=None):
        self.source, self.target, self.maps, self.options, self.compare = source, target, maps, options, compare

    def to_dict(self) -> dict:
        return scenario_to_dict(self.source, self.target, self.maps, self.options, self.compare)


def scenario_from(data) -> Scenario:
    maps = {n: SmoothMapSpec.from_dict(m, n) for n, m in _need(data, "maps", "scenario").items()}
    if not maps:
        raise SchemaError("scenario.maps: at least one map is required")
    cmp = data.get("compare")
    if cmp is not None:
        if len(cmp) != 2 or any(c not in maps for c in cmp):
            raise SchemaError("scenario.compare: needs two names from maps")
    opts = dict(data.get("options", {}))
    for k in opts:
        if k not in ("nodes", "weight_cutoff", "snap_tolerance"):
            raise SchemaError(f"scenario.options: unknown option '{k}'")
    return Scenario(source_from(_need(data, "source", "scenario")), target_from(_need(data, "target", "scenario")),
                    maps, opts, cmp)


# ---- files ----------------------------------------------------------------------------------

def load_json(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be an object")
    v = data.get("format_version")
    if v != FORMAT_VERSION:
        raise SchemaError(f"{path}: format_version must be {FORMAT_VERSION}, got {v!r}")
    if data.get("kind") not in KINDS:
        raise SchemaError(f"{path}: kind must be one of {', '.join(KINDS)}")
    return data


def parse_document(data: dict):
    """kind -> the corresponding object (gauge files give a dict of parts)."""
    kind = data["kind"]
    try:
        if kind == "coalgebra":
            return CInftyCoalgebra.from_dict(data, data.get("name", "C"))
        if kind == "linfty":
            return linfty_from(data)
        if kind == "cw":
            return AlgebraicCWComplex.from_dict(data, data.get("name", "K"))
        if kind == "contraction":
            return contraction_from(data)
        if kind == "dga":
            return dga_from(data)
        if kind == "scenario":
            return scenario_from(data)
        if kind == "gauge":
            return {"complex": AlgebraicCWComplex.from_dict(_need(data, "complex", "gauge")),
                    "algebra": linfty_from(_need(data, "algebra", "gauge"), "gauge.algebra"),
                    "tau": _frac_table(_need(data, "tau", "gauge")),
                    "kappa": _frac_table(data.get("kappa", {}))}
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{kind}: malformed entry ({exc})") from exc
    raise SchemaError(f"unknown kind {kind}")


def dump_document(kind: str, body: dict) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind, **body}


def write_json(path, data: dict):
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=False) + "\n")
