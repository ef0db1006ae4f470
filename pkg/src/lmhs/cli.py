"""Command-line front end: strict problem files in, deterministic reports out.

Exit codes: 0 success, 1 a domain check failed, 2 parse or schema error,
3 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable

from . import examples
from .deform import (
    DeformationData,
    classify_p2_line,
    independent_smoothing,
    smoothable_first_order,
    smoothing_cone,
    strata_classification,
)
from .errors import PreconditionError
from .hodge import (
    HodgeFiltration,
    MixedHodgeStructure,
    NotMixedHodgeError,
    PolarizationForm,
    WeightFiltration,
    deligne_bigrading,
    is_r_split,
    r_split,
)
from .limit_period import lie_quadrants, orbit_invariants, reduced_lpm
from .monodromy import (
    NilpotentEndomorphism,
    NilpotentOrbitData,
    cone_weight_independence,
    lmhs_check,
    n_strings,
    weight_filtration,
    weight_filtration_axioms,
)
from .qlinalg import GaussianRational, Matrix, Subspace
from .strata import (
    CohomologySpace,
    StrataComplexData,
    StratumSpaces,
    double_curve_composite,
    e1_audit,
    e1_page,
    surface_double_curve,
    theorem7_pieces,
    validate_strata,
)

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3
DEFAULT_SEED = 0
KINDS = ("mhs", "orbit", "strata", "deform", "example")
REPORT_KEYS = ("command", "verdict", "result", "metadata")


class SchemaError(ValueError):
    """Malformed problem file."""


# ---- strict parsing ------------------------------------------------------


def _fields(obj: Any, where: str, required: tuple = (), optional: tuple = ()) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise SchemaError(f"{where}: unknown field(s) {unknown}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(f"{where}: missing field(s) {missing}")
    return obj


def _int(x: Any, where: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{where}: expected an integer")
    if minimum is not None and x < minimum:
        raise SchemaError(f"{where}: must be at least {minimum}")
    return x


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SchemaError(f"{where}: floats and booleans are not exact scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return GaussianRational.coerce(x).re
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{where}: {exc}") from None
    raise SchemaError(f"{where}: expected an integer or a 'p/q' string")


def parse_scalar(x: Any, where: str = "scalar") -> GaussianRational:
    if isinstance(x, dict):
        _fields(x, where, ("re", "im"))
        return GaussianRational(_rational(x["re"], where + ".re"), _rational(x["im"], where + ".im"))
    return GaussianRational(_rational(x, where))


def parse_vector(x: Any, where: str, length: int | None = None) -> tuple:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list")
    if length is not None and len(x) != length:
        raise SchemaError(f"{where}: expected length {length}, got {len(x)}")
    return tuple(parse_scalar(v, f"{where}[{i}]") for i, v in enumerate(x))


def parse_matrix(x: Any, where: str, nrows: int | None = None, ncols: int | None = None) -> Matrix:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list of rows")
    if nrows is not None and len(x) != nrows:
        raise SchemaError(f"{where}: expected {nrows} rows, got {len(x)}")
    rows = []
    for i, r in enumerate(x):
        rows.append(parse_vector(r, f"{where}[{i}]", ncols))
    if not rows:
        return Matrix.zeros(0, ncols or 0)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise SchemaError(f"{where}: ragged matrix")
    return Matrix(rows, ncols=width)


def _span(x: Any, where: str, n: int) -> Subspace:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list of vectors")
    return Subspace.span(n, [parse_vector(v, f"{where}[{i}]", n) for i, v in enumerate(x)])


def _indexed_spans(x: Any, where: str, n: int) -> dict[int, Subspace]:
    if not isinstance(x, dict):
        raise SchemaError(f"{where}: expected an object keyed by integer index")
    out = {}
    for key, vecs in x.items():
        try:
            idx = int(key)
        except ValueError:
            raise SchemaError(f"{where}: key {key!r} is not an integer") from None
        if str(idx) != key:
            raise SchemaError(f"{where}: key {key!r} is not in canonical integer form")
        out[idx] = _span(vecs, f"{where}.{key}", n)
    return out


def _as_precondition(build: Callable[[], Any]) -> Any:
    try:
        return build()
    except (SchemaError, PreconditionError):
        raise
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc


def _parse_Q(x: Any, n: int, center: int) -> PolarizationForm:
    return _as_precondition(lambda: PolarizationForm(parse_matrix(x, "payload.Q", n, n), center % 2))


def _parse_F(x: Any, n: int) -> HodgeFiltration:
    return _as_precondition(lambda: HodgeFiltration(_indexed_spans(x, "payload.F", n), n))


def _parse_mhs(payload: Any) -> MixedHodgeStructure:
    _fields(payload, "payload", ("ambient_dim", "weight_center", "W", "F"), ("Q",))
    n = _int(payload["ambient_dim"], "payload.ambient_dim", 1)
    m = _int(payload["weight_center"], "payload.weight_center")
    steps = _indexed_spans(payload["W"], "payload.W", n)
    if not steps or not steps[max(steps)].is_full():
        steps[max(steps, default=m) + 1] = Subspace.full(n)
    F = _parse_F(payload["F"], n)
    Q = _parse_Q(payload["Q"], n, m) if "Q" in payload else None
    return _as_precondition(lambda: MixedHodgeStructure(WeightFiltration(m, steps), F, Q))


def _parse_orbit(payload: Any) -> tuple[NilpotentOrbitData, NilpotentEndomorphism]:
    _fields(payload, "payload", ("ambient_dim", "center", "F", "Q", "cone"), ("N",))
    n = _int(payload["ambient_dim"], "payload.ambient_dim", 1)
    m = _int(payload["center"], "payload.center")
    F = _parse_F(payload["F"], n)
    Q = _parse_Q(payload["Q"], n, m)
    if not isinstance(payload["cone"], list):
        raise SchemaError("payload.cone: expected a list of matrices")
    gens = [parse_matrix(g, f"payload.cone[{i}]", n, n) for i, g in enumerate(payload["cone"])]
    orbit = _as_precondition(lambda: NilpotentOrbitData(F, gens, m, Q))
    if "N" in payload:
        N = _as_precondition(lambda: NilpotentEndomorphism(parse_matrix(payload["N"], "payload.N", n, n)))
        orbit.cone_coefficients(N)
    else:
        N = orbit.default_N()
    return orbit, N


def _parse_strata(payload: Any) -> StrataComplexData:
    _fields(payload, "payload", ("n", "levels"), ("rest", "gysin"))
    n = _int(payload["n"], "payload.n", 0)
    if not isinstance(payload["levels"], list):
        raise SchemaError("payload.levels: expected a list")
    levels = {}
    for i, lvl in enumerate(payload["levels"]):
        where = f"payload.levels[{i}]"
        _fields(lvl, where, ("k", "H"))
        k = _int(lvl["k"], where + ".k", 1)
        if k in levels:
            raise SchemaError(f"{where}: level {k} given twice")
        if not isinstance(lvl["H"], dict):
            raise SchemaError(f"{where}.H: expected an object keyed by degree")
        degrees = {}
        for key, entry in lvl["H"].items():
            w = f"{where}.H.{key}"
            if not key.isdigit() or str(int(key)) != key:
                raise SchemaError(f"{w}: degree keys must be non-negative integers")
            _fields(entry, w, ("dim",), ("hodge",))
            dim = _int(entry["dim"], w + ".dim", 0)
            hodge = None
            if "hodge" in entry:
                if not isinstance(entry["hodge"], list):
                    raise SchemaError(f"{w}.hodge: expected [[r, s, dim], ...]")
                hodge = {}
                for j, triple in enumerate(entry["hodge"]):
                    if not isinstance(triple, list) or len(triple) != 3:
                        raise SchemaError(f"{w}.hodge[{j}]: expected [r, s, dim]")
                    r, s, d = (_int(v, f"{w}.hodge[{j}]") for v in triple)
                    hodge[(r, s)] = hodge.get((r, s), 0) + d
            degrees[int(key)] = _as_precondition(lambda: CohomologySpace(dim, hodge))
        levels[k] = degrees
    spaces = _as_precondition(lambda: StratumSpaces(n, levels))

    def maps(name: str) -> dict:
        out = {}
        items = payload.get(name, [])
        if not isinstance(items, list):
            raise SchemaError(f"payload.{name}: expected a list")
        for i, item in enumerate(items):
            where = f"payload.{name}[{i}]"
            _fields(item, where, ("k", "q", "matrix"))
            key = (_int(item["k"], where + ".k", 1), _int(item["q"], where + ".q", 0))
            if key in out:
                raise SchemaError(f"{where}: map given twice")
            k, q = key
            if name == "rest":
                rows, cols = spaces.dim(k + 1, q), spaces.dim(k, q)
            else:
                rows, cols = spaces.dim(k - 1, q + 2), spaces.dim(k, q)
            out[key] = parse_matrix(item["matrix"], where + ".matrix", rows, cols)
        return out

    rest, gysin = maps("rest"), maps("gysin")
    return _as_precondition(lambda: StrataComplexData(spaces, rest, gysin))


def _parse_deform(payload: Any) -> DeformationData:
    _fields(payload, "payload", ("ext_dim", "components", "localize"), ("delta", "d_semi_stable"))
    e = _int(payload["ext_dim"], "payload.ext_dim", 0)
    comps = payload["components"]
    if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
        raise SchemaError("payload.components: expected a list of labels")
    loc = parse_matrix(payload["localize"], "payload.localize", len(comps), e)
    delta = None
    if payload.get("delta") is not None:
        delta = parse_matrix(payload["delta"], "payload.delta", None, len(comps))
    dss = payload.get("d_semi_stable", True)
    if not isinstance(dss, bool):
        raise SchemaError("payload.d_semi_stable: expected a boolean")
    return _as_precondition(lambda: DeformationData(e, comps, loc, delta, dss))


def _parse_example(payload: Any) -> tuple[str, Any]:
    _fields(payload, "payload", ("name",), ("params", "case"))
    name = payload["name"]
    if name == "genus3":
        return "orbit", (_genus3_from(payload.get("params", {})), None)
    if name == "genus2":
        case = payload.get("case", "i")
        if case not in ("i", "ii"):
            raise SchemaError("payload.case: expected 'i' or 'ii'")
        return "orbit", (examples.genus2_orbit(case)[0], None)
    if name == "genus3-strata":
        return "strata", examples.genus3_strata()
    raise SchemaError(f"payload.name: unknown example {name!r}")


def _genus3_from(params: Any) -> NilpotentOrbitData:
    names = ("a11", "a12", "a22", "b1", "b2", "c")
    _fields(params, "params", (), names)
    values = {k: parse_scalar(v, f"params.{k}") for k, v in params.items()}
    p = _as_precondition(lambda: examples.Genus3Params(**values))
    return examples.genus3_orbit(p)


def parse_problem(obj: Any) -> tuple[str, Any, dict]:
    """Validate a problem file and build its domain object."""
    _fields(obj, "problem", ("kind", "payload"), ("metadata",))
    kind = obj["kind"]
    if kind not in KINDS:
        raise SchemaError(f"problem.kind: expected one of {list(KINDS)}")
    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("problem.metadata: expected an object")
    payload = obj["payload"]
    if kind == "mhs":
        return kind, _parse_mhs(payload), metadata
    if kind == "orbit":
        return kind, _parse_orbit(payload), metadata
    if kind == "strata":
        return kind, _parse_strata(payload), metadata
    if kind == "deform":
        return kind, _parse_deform(payload), metadata
    inner_kind, built = _parse_example(payload)
    if inner_kind == "orbit":
        orbit, _ = built
        return inner_kind, (orbit, orbit.default_N()), metadata
    return inner_kind, built, metadata


def parse_report(obj: Any) -> dict:
    """Strict check of the report envelope."""
    _fields(obj, "report", REPORT_KEYS)
    if not isinstance(obj["command"], str) or obj["verdict"] not in ("pass", "fail", "ok"):
        raise SchemaError("report: bad command or verdict")
    if not isinstance(obj["metadata"], dict):
        raise SchemaError("report.metadata: expected an object")
    return obj


# ---- serialization -------------------------------------------------------


def _vectors(space: Subspace) -> list:
    return [[x.to_json() for x in v] for v in space.vectors()]


def filtration_json(F: HodgeFiltration) -> dict:
    lo, hi = F.bounds()
    return {str(p): _vectors(F[p]) for p in range(lo + 1, hi + 2)}


def weight_json(W: WeightFiltration) -> dict:
    return {str(k): _vectors(s) for k, s in W.normalized().items()}


def orbit_problem(orbit: NilpotentOrbitData, metadata: dict | None = None, N: NilpotentEndomorphism | None = None) -> dict:
    payload = {
        "ambient_dim": orbit.ambient_dim,
        "center": orbit.center,
        "F": filtration_json(orbit.F),
        "Q": orbit.Q.matrix.to_json(),
        "cone": [g.matrix.to_json() for g in orbit.generators],
    }
    if N is not None:
        payload["N"] = N.matrix.to_json()
    return {"kind": "orbit", "payload": payload, "metadata": metadata or {}}


def mhs_problem(mhs: MixedHodgeStructure, metadata: dict | None = None) -> dict:
    payload = {
        "ambient_dim": mhs.ambient_dim,
        "weight_center": mhs.center,
        "W": weight_json(mhs.W),
        "F": filtration_json(mhs.F),
    }
    if mhs.Q is not None:
        payload["Q"] = mhs.Q.matrix.to_json()
    return {"kind": "mhs", "payload": payload, "metadata": metadata or {}}


def strata_problem(data: StrataComplexData, metadata: dict | None = None) -> dict:
    return {"kind": "strata", "payload": data.to_json(), "metadata": metadata or {}}


def deform_problem(d: DeformationData, metadata: dict | None = None) -> dict:
    return {
        "kind": "deform",
        "payload": {
            "ext_dim": d.ext_dim,
            "components": list(d.components),
            "localize": d.localize.to_json(),
            "delta": d.delta.to_json() if d.delta is not None else None,
            "d_semi_stable": d.d_semi_stable,
        },
        "metadata": metadata or {},
    }


def _pieces_json(bigrading) -> list:
    return [
        {"p": p, "q": q, "dim": s.dim, "basis": _vectors(s)} for (p, q), s in sorted(bigrading.pieces.items())
    ]


def _jsonable(x: Any) -> Any:
    if isinstance(x, GaussianRational):
        return x.to_json()
    if isinstance(x, Matrix):
        return x.to_json()
    if isinstance(x, Fraction):
        return GaussianRational(x).to_json()
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# ---- commands --------------------------------------------------------------


class Outcome:
    def __init__(self, verdict: str, result: Any, metadata: dict | None = None, code: int | None = None):
        self.verdict = verdict
        self.result = result
        self.metadata = metadata or {}
        self.code = code if code is not None else (EXIT_DOMAIN if verdict == "fail" else EXIT_OK)


class Emit:
    """A problem file to print as-is (example generators)."""

    def __init__(self, problem: dict):
        self.problem = problem


def _need(kind: str, allowed: tuple) -> None:
    if kind not in allowed:
        raise SchemaError(f"this command needs a problem of kind {list(allowed)}, got {kind!r}")


def _mhs_of(kind: str, obj: Any) -> MixedHodgeStructure:
    _need(kind, ("mhs", "orbit"))
    if kind == "orbit":
        orbit, N = obj
        return orbit.mhs(N)
    return obj


def cmd_weight_filtration(kind, obj, args) -> Outcome:
    _need(kind, ("orbit",))
    orbit, N = obj
    W = weight_filtration(N, orbit.center)
    verdict = weight_filtration_axioms(N, W)
    steps = [{"k": k, "dim": s.dim, "basis": _vectors(s)} for k, s in W.normalized().items()]
    return Outcome("pass" if verdict else "fail", {"center": W.center, "steps": steps, "axioms": _verdict_json(verdict)})


def cmd_deligne(kind, obj, args) -> Outcome:
    mhs = _mhs_of(kind, obj)
    try:
        b = deligne_bigrading(mhs)
    except NotMixedHodgeError as exc:
        return Outcome("fail", {"clause": "mixed Hodge structure", "witness": {"k": exc.k, "p": exc.p, "reason": exc.reason}})
    return Outcome("ok", {"pieces": _pieces_json(b), "r_split": is_r_split(mhs, b)})


def cmd_rsplit(kind, obj, args) -> Outcome:
    mhs = _mhs_of(kind, obj)
    try:
        before = is_r_split(mhs)
        split = r_split(mhs)
    except NotMixedHodgeError as exc:
        return Outcome("fail", {"clause": "mixed Hodge structure", "witness": {"k": exc.k, "p": exc.p, "reason": exc.reason}})
    return Outcome(
        "ok",
        {"r_split_before": before, "F": filtration_json(split.F), "pieces": _pieces_json(deligne_bigrading(split))},
    )


def _verdict_json(v) -> dict:
    return {"passed": v.passed, "clause": v.clause, "witness": _jsonable(v.witness)}


def cmd_lmhs_check(kind, obj, args) -> Outcome:
    _need(kind, ("orbit",))
    orbit, N = obj
    verdict = lmhs_check(orbit, N)
    result = _verdict_json(verdict)
    result["cone_weight_independence"] = cone_weight_independence(orbit, samples=5, seed=args.seed)
    return Outcome("pass" if verdict else "fail", result)


def cmd_limit_period(kind, obj, args) -> Outcome:
    _need(kind, ("orbit",))
    orbit, N = obj
    flag = reduced_lpm(orbit, N)
    quadrants = lie_quadrants(orbit, N)
    table = orbit_invariants(flag)
    return Outcome(
        "ok",
        {
            "F_infinity": filtration_json(flag.F_infinity),
            "interior": flag.interior,
            "orbit_invariants": [list(r) for r in table.table],
            "orbit_invariant_indices": list(table.indices),
            "quadrants": {
                "regions": {
                    name: [{"p": p, "q": q, "dim": d} for (p, q), d in sorted(dims.items())]
                    for name, dims in quadrants.regions.items()
                },
                "ker_dim": quadrants.ker_dim,
                "coker_dim": quadrants.coker_dim,
                "r_split_applied": quadrants.r_split_applied,
                "limit_index_convention": quadrants.limit_convention,
            },
        },
    )


def cmd_nstrings(kind, obj, args) -> Outcome:
    _need(kind, ("orbit",))
    orbit, N = obj
    diagram = n_strings(orbit, N)
    strings = [
        {
            "base_weight": s.base_weight,
            "length": s.length,
            "piece_dims": [{"p": p, "q": q, "dim": d} for (p, q), d in sorted(s.piece_dims.items())],
            "twist_chain": [list(t) for t in s.twist_chain],
        }
        for s in diagram.strings
    ]
    graded = [{"weight": w, "dim": d} for w, d in diagram.graded_dims().items()]
    return Outcome("ok", {"strings": strings, "graded_dims": graded})


def cmd_strata_validate(kind, obj, args) -> Outcome:
    _need(kind, ("strata",))
    v = validate_strata(obj)
    return Outcome("pass" if v else "fail", _verdict_json(v))


def cmd_strata_e1(kind, obj, args) -> Outcome:
    _need(kind, ("strata",))
    page = e1_page(obj, args.i)
    audit = e1_audit(obj)
    cells = [
        {
            "a": a,
            "b": b,
            "dim": sum(c.dim for c in contribs),
            "contributions": [
                {"q": c.q, "stratum": c.stratum, "bidegree": list(c.bidegree), "dim": c.dim} for c in contribs
            ],
        }
        for (a, b), contribs in page.items()
    ]
    audit_json = [
        {
            "stratum": e.stratum,
            "r": e.r,
            "i_values": list(e.i_values),
            "b_values": list(e.b_values),
            "passed": e.passed,
        }
        for e in audit
    ]
    ok = all(e.passed for e in audit)
    return Outcome("pass" if ok else "fail", {"i": args.i, "cells": cells, "audit": audit_json})


def cmd_strata_nstrings(kind, obj, args) -> Outcome:
    _need(kind, ("strata",))
    report = theorem7_pieces(obj, args.m)
    pieces = [
        {
            "i": i,
            "j": j,
            "stratum": p.stratum,
            "degree": p.degree,
            "twist": p.twist.j,
            "weight": p.weight,
            "dim": p.dim,
            "basis": [[x.to_json() for x in v] for v in p.basis],
        }
        for (i, j), p in sorted(report.pieces.items())
    ]
    result = {
        "m": report.m,
        "pieces": pieces,
        "graded_dims": [{"weight": w, "dim": d} for w, d in report.graded_dims().items()],
        "n_map_ranks": [{"i": i, "j": j, "rank": r} for (i, j), r in sorted(report.n_map_ranks.items())],
        "total_complex_dims": [{"weight": w, "dim": d} for w, d in sorted(report.total_complex_dims.items())],
        "secondary_check_passed": report.secondary_check_passed,
    }
    return Outcome("pass" if report.secondary_check_passed else "fail", result, report.metadata)


def cmd_strata_surface(args) -> Emit:
    data = surface_double_curve(args.c1sq, args.c2sq)
    composite = double_curve_composite(data)
    return Emit(
        strata_problem(
            data,
            {
                "fixture": "surface_double_curve",
                "c1_sq": args.c1sq,
                "c2_sq": args.c2sq,
                "composite": composite.to_json(),
                "composite_basis": "[C1] - [C2]",
            },
        )
    )


def cmd_deform_strata(kind, obj, args) -> Outcome:
    _need(kind, ("deform",))
    rows = [{"B": list(s.B), "dim": s.dim, "codim": s.codim} for s in strata_classification(obj)]
    return Outcome(
        "ok",
        {
            "smoothable_first_order": smoothable_first_order(obj),
            "independent_smoothing": independent_smoothing(obj),
            "exactness": obj.exactness(),
            "strata": rows,
        },
    )


def cmd_deform_cone(kind, obj, args) -> Outcome:
    _need(kind, ("deform",))
    cone = smoothing_cone(obj)
    return Outcome(
        "ok",
        {"kind": cone.kind, "generators": [list(g) for g in cone.generators], "image_dim": cone.image.dim},
    )


def cmd_deform_classify(kind, obj, args) -> Outcome:
    _need(kind, ("deform",))
    c = classify_p2_line(obj)
    return Outcome(
        "ok",
        {
            "case": c.case,
            "independent": list(c.independent),
            "locked": list(c.locked),
            "excluded_by_smoothability": c.excluded_by_smoothability,
        },
    )


def cmd_example(args) -> Emit:
    which = args.example
    if which == "genus3":
        params = {}
        if args.params:
            params = _load_json(args.params)
        return Emit(orbit_problem(_genus3_from(params), {"fixture": "genus3"}))
    if which == "genus2":
        orbit, pattern = examples.genus2_orbit(args.case)
        return Emit(orbit_problem(orbit, {"fixture": f"genus2-{args.case}", "expected_residual_pattern": pattern}))
    if which == "genus3-strata":
        return Emit(strata_problem(examples.genus3_strata(), {"fixture": "genus3-strata"}))
    orbit = examples.elliptic_degeneration()
    return Emit(orbit_problem(orbit, {"fixture": "elliptic"}))


# ---- plumbing --------------------------------------------------------------


def _load_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc.msg}") from None


def _render_text(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(value)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=argparse.SUPPRESS, help="problem file (JSON), '-' for stdin")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="lmhs", description="Exact limiting mixed Hodge structure toolkit.")
    parser.add_argument("--input", default=None)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (
        ("weight-filtration", cmd_weight_filtration),
        ("deligne", cmd_deligne),
        ("rsplit", cmd_rsplit),
        ("lmhs-check", cmd_lmhs_check),
        ("limit-period", cmd_limit_period),
        ("nstrings", cmd_nstrings),
    ):
        p = sub.add_parser(name, parents=[common])
        p.set_defaults(handler=fn)

    strata = sub.add_parser("strata").add_subparsers(dest="action", required=True)
    strata.add_parser("validate", parents=[common]).set_defaults(handler=cmd_strata_validate)
    e1 = strata.add_parser("e1", parents=[common])
    e1.add_argument("--i", type=int, required=True)
    e1.set_defaults(handler=cmd_strata_e1)
    ns = strata.add_parser("nstrings", parents=[common])
    ns.add_argument("--m", type=int, required=True)
    ns.set_defaults(handler=cmd_strata_nstrings)
    surf = strata.add_parser("surface", parents=[common])
    surf.add_argument("--c1sq", type=int, required=True)
    surf.add_argument("--c2sq", type=int, required=True)
    surf.set_defaults(generator=cmd_strata_surface)

    deform = sub.add_parser("deform").add_subparsers(dest="action", required=True)
    deform.add_parser("strata", parents=[common]).set_defaults(handler=cmd_deform_strata)
    deform.add_parser("cone", parents=[common]).set_defaults(handler=cmd_deform_cone)
    deform.add_parser("classify-p2", parents=[common]).set_defaults(handler=cmd_deform_classify)

    example = sub.add_parser("example").add_subparsers(dest="example", required=True)
    g3 = example.add_parser("genus3", parents=[common])
    g3.add_argument("--params", default=None, help="JSON object with any of a11, a12, a22, b1, b2, c")
    g3.set_defaults(generator=cmd_example)
    g2 = example.add_parser("genus2", parents=[common])
    g2.add_argument("--case", choices=("i", "ii"), required=True)
    g2.set_defaults(generator=cmd_example)
    example.add_parser("genus3-strata", parents=[common]).set_defaults(generator=cmd_example)
    example.add_parser("elliptic", parents=[common]).set_defaults(generator=cmd_example)
    return parser


def _command_name(args) -> str:
    parts = [args.command]
    for attr in ("action", "example"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    name = _command_name(args)
    try:
        if hasattr(args, "generator"):
            emitted = args.generator(args)
            out.write(json.dumps(_jsonable(emitted.problem), indent=2) + "\n")
            return EXIT_OK
        if not args.input:
            raise SchemaError("--input is required for this command")
        kind, obj, metadata = parse_problem(_load_json(args.input))
        outcome = args.handler(kind, obj, args)
    except SchemaError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        err.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    report = {
        "command": name,
        "verdict": outcome.verdict,
        "result": _jsonable(outcome.result),
        "metadata": _jsonable({**outcome.metadata, "seed": args.seed, "input": metadata}),
    }
    if args.format == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write("\n".join(_render_text(report)) + "\n")
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
