"""The ten acceptance criteria, each timed against its runtime limit.

Run with pytest, or directly (``python tests/test_acceptance.py``) for the
summary lines alone.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from generators import RandomMHS, random_invertible, random_partition, random_rational  # noqa: E402
from oracles import (  # noqa: E402
    conj_vectors,
    contained,
    dual_graph_b1,
    jordan_nilpotent,
    jordan_weight_filtration,
    rank,
    same_span,
    sampled_smoothable,
)

from lmhs import examples  # noqa: E402
from lmhs.deform import DeformationData, classify_p2_line, smoothable_first_order  # noqa: E402
from lmhs.hodge import deligne_bigrading, r_split  # noqa: E402
from lmhs.limit_period import (  # noqa: E402
    orbit_invariants,
    pattern_signature,
    r_split_limit,
    reduced_lpm,
    residual_tangent_data,
)
from lmhs.monodromy import (  # noqa: E402
    lmhs_check,
    n_strings,
    sample_cone_coefficients,
    weight_filtration,
    weight_filtration_axioms,
)
from lmhs.qlinalg import GaussianRational, Matrix  # noqa: E402
from lmhs.strata import (  # noqa: E402
    double_curve_composite,
    e1_audit,
    nodal_curve_strata,
    surface_double_curve,
    theorem7_pieces,
    validate_strata,
)

ORBITS = {
    "genus3": lambda: examples.genus3_orbit(),
    "genus2-i": lambda: examples.genus2_orbit("i")[0],
    "genus2-ii": lambda: examples.genus2_orbit("ii")[0],
    "elliptic": lambda: examples.elliptic_degeneration(),
}


def criterion_weight_filtration():
    rng = random.Random(1)
    cases = []
    for _ in range(100):
        n = rng.randint(1, 8)
        N_rows, basis = jordan_nilpotent(random_partition(rng, n), random_invertible(rng, n))
        cases.append((n, rng.randint(-2, 2), Matrix(N_rows), basis))
    # the runtime budget covers the library; the sympy cross-checks run afterwards
    start = time.perf_counter()
    computed = []
    for n, m, N, _ in cases:
        W = weight_filtration(N, m)
        computed.append((W, weight_filtration_axioms(N, W)))
    library_time = time.perf_counter() - start
    for (n, m, N, basis), (W, verdict) in zip(cases, computed):
        assert verdict, "axioms"
        lo, hi = W.bounds()
        for k in range(lo - 1, hi + 1):
            assert contained([N.apply(v) for v in W[k].vectors()], W[k - 2].vectors(), n)
        for k in range(0, max(hi - m, m - lo) + 1):
            image = [N.power(k).apply(v) for v in W[m + k].vectors()]
            assert rank(image + W[m - k - 1].vectors(), n) == W[m - k].dim
        for k, vectors in jordan_weight_filtration(basis, m).items():
            assert same_span(W[k].vectors(), vectors, n), f"W_{k} differs from the Jordan-basis oracle"
    return "100 random nilpotents", library_time


def _bigrading_axioms(mhs):
    n = mhs.ambient_dim
    pieces = {pq: s.vectors() for pq, s in deligne_bigrading(mhs).pieces.items()}
    everything = [v for vs in pieces.values() for v in vs]
    assert len(everything) == n == rank(everything, n), "direct sum"
    lo, hi = mhs.F.bounds()
    for p in range(lo, hi + 2):
        assert same_span([v for (a, _), vs in pieces.items() if a >= p for v in vs], mhs.F[p].vectors(), n), "F-sum"
    klo, khi = mhs.W.bounds()
    for k in range(klo - 1, khi + 1):
        want = [v for (a, b), vs in pieces.items() if a + b <= k for v in vs]
        assert same_span(want, mhs.W[k].vectors(), n), "W-sum"
    for (p, q), vs in pieces.items():
        lower = mhs.W[p + q - 2].vectors()
        assert contained(conj_vectors(vs), pieces.get((q, p), []) + lower, n), "conjugation"


def criterion_deligne_bigrading():
    _bigrading_axioms(examples.genus3_orbit().mhs())
    rng = random.Random(2)
    for _ in range(50):
        _bigrading_axioms(RandomMHS(rng).mhs)
    return "genus-3 + 50 random structures"


def criterion_limit_invariance():
    rng = random.Random(3)
    for name, build in ORBITS.items():
        orbit = build()
        N = orbit.default_N()
        reference = reduced_lpm(orbit).F_infinity
        for _ in range(20):
            w = GaussianRational(random_rational(rng))
            moved = orbit.with_filtration(orbit.F.transform(N.matrix.exp_nilpotent(w)))
            assert reduced_lpm(moved).F_infinity == reference, f"{name}: limit moved"
        for p in range(-1, 4):
            assert reference[p].dim == orbit.F[p].dim, f"{name}: dim F_inf^{p}"
        split = r_split(orbit.mhs())
        limit = reduced_lpm(orbit.with_filtration(split.F)).F_infinity
        assert limit == r_split_limit(split), f"{name}: R-split formula"
    return f"{len(ORBITS)} fixtures x 20 shifts"


def criterion_genus3_golden():
    orbit = examples.genus3_orbit()
    assert lmhs_check(orbit)
    W = weight_filtration(orbit.default_N(), 1)
    assert same_span(W[0].vectors(), [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]], 6), "W_0"
    lam = Fraction(3, 7)
    moved = orbit.with_filtration(orbit.F.transform(orbit.default_N().matrix.exp_nilpotent(GaussianRational(lam))))
    before, after = examples.genus3_extension_data(orbit), examples.genus3_extension_data(moved)
    assert after["invariant"] == before["invariant"]
    for key in ("a11", "a22"):
        assert after["reparametrization_dependent"][key] == before["reparametrization_dependent"][key] + lam
    report = residual_tangent_data(orbit)
    assert set(report.killed_positions) == {(1, 0, 0), (1, 1, 1)}, "residual pattern"
    return "lmhs, W_0, shift, residual"


def criterion_genus2_golden():
    for case, expected in (("i", [["0", "b"], ["b", "0"]]), ("ii", [["0", "0"], ["0", "0"]])):
        orbit, _ = examples.genus2_orbit(case)
        residual = residual_tangent_data(orbit).residual_pattern[1]
        assert pattern_signature(residual) == pattern_signature(expected), f"case {case}: {residual}"
        assert n_strings(orbit).signature() == ((0, 1, 2),), f"case {case}: N-string"
    return "cases i, ii"


def criterion_surface_double_curve():
    for c1 in range(-5, 6):
        for c2 in range(-5, 6):
            data = surface_double_curve(c1, c2)
            composite = double_curve_composite(data)
            assert composite == GaussianRational(Fraction(c1 + c2, 2))
            assert (composite == 0) == (c1 == -c2)
            assert bool(validate_strata(data)) == (c1 == -c2)
    return "121 pairs"


def criterion_theorem7_oracle():
    for gtilde, delta in ((0, 3), (1, 2), (2, 1)):
        b1 = dual_graph_b1(1, [(0, 0)] * delta)
        report = theorem7_pieces(nodal_curve_strata(gtilde, delta), 1)
        expected = {w: d for w, d in {0: b1, 1: 2 * gtilde, 2: b1}.items() if d}
        assert report.graded_dims() == expected, f"({gtilde},{delta}): {report.graded_dims()}"
        assert report.total_dim() == 2 * (gtilde + b1)
        assert report.secondary_check_passed
    return "(0,3), (1,2), (2,1)"


def criterion_cross_route():
    strata_route = theorem7_pieces(examples.genus3_strata(), 1).signature()
    orbit_route = n_strings(examples.genus3_orbit()).signature()
    assert strata_route == orbit_route, f"{strata_route} vs {orbit_route}"
    return str(orbit_route)


def criterion_e1_audit():
    fixtures = [nodal_curve_strata(1, 2), nodal_curve_strata(0, 3, 2), surface_double_curve(2, -2)]
    count = 0
    for data in fixtures:
        for e in e1_audit(data):
            count += 1
            assert len(e.i_values) == 1, f"H^({e.r},*)(X^[{e.stratum}]) at i = {e.i_values}"
            assert len(e.b_values) == e.stratum
            for b in e.b_values:
                assert (b - (1 - e.stratum)) % 2 == 0 and 1 - e.stratum <= b <= e.stratum - 1
    return f"{count} stratum pieces"


def criterion_deformation():
    rng = random.Random(10)
    for _ in range(40):
        a, e = rng.randint(1, 4), rng.randint(0, 3)
        rows = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(e)] for _ in range(a)]
        d = DeformationData(e, [f"D{i}" for i in range(a)], Matrix(rows, ncols=e))
        # each coordinate projection of the image is nonzero
        projection = all(any(row) for row in rows)
        assert smoothable_first_order(d) == projection == sampled_smoothable(rows, e, rng)

    def plane(*vectors):
        return DeformationData(2, ["D1", "D2", "D3"], Matrix.from_columns(vectors, nrows=3))

    assert classify_p2_line(plane((1, 0, -1), (0, 1, -1))).case == "i"
    case_ii = classify_p2_line(plane((1, 0, 0), (0, 1, -1)))
    assert (case_ii.case, case_ii.independent) == ("ii", ("D1",))
    case_iii = classify_p2_line(plane((1, 0, 0), (0, 1, 0)))
    assert case_iii.case == "iii" and case_iii.excluded_by_smoothability

    for name, build in ORBITS.items():
        orbit = build()
        reference = orbit_invariants(reduced_lpm(orbit)).table
        for _ in range(10):
            N = orbit.cone_point(sample_cone_coefficients(len(orbit.generators), rng))
            assert orbit_invariants(reduced_lpm(orbit, N)).table == reference, f"{name}: fingerprint"
    return "smoothability, P^2 cases, cone fingerprints"


CRITERIA = [
    (1, "weight-filtration axioms", criterion_weight_filtration, 5.0),
    (2, "Deligne bigrading axioms", criterion_deligne_bigrading, 5.0),
    (3, "reduced LPM invariance", criterion_limit_invariance, 5.0),
    (4, "genus-3 golden", criterion_genus3_golden, 2.0),
    (5, "genus-2 golden", criterion_genus2_golden, 2.0),
    (6, "surface double-curve criterion", criterion_surface_double_curve, 2.0),
    (7, "strata pieces vs dual-graph oracle", criterion_theorem7_oracle, 5.0),
    (8, "strata route = orbit route", criterion_cross_route, None),
    (9, "E1 multiplicity audit", criterion_e1_audit, None),
    (10, "deformation strata", criterion_deformation, 5.0),
]


def evaluate(number, title, check, limit):
    """Run one criterion; a check may return (detail, seconds spent in lmhs)."""
    start = time.perf_counter()
    timed = None
    try:
        detail = check()
        if isinstance(detail, tuple):
            detail, timed = detail
        error = None
    except AssertionError as exc:
        detail, error = None, str(exc) or "assertion failed"
    elapsed = time.perf_counter() - start
    budgeted = elapsed if timed is None else timed
    if error is None and limit is not None and budgeted >= limit:
        error = f"runtime {budgeted:.2f}s exceeds {limit:.0f}s"
    status = "PASS" if error is None else "FAIL"
    timing = f"{elapsed:.2f}s" if timed is None else f"lmhs {timed:.2f}s, with oracles {elapsed:.2f}s"
    budget = f" / {limit:.0f}s" if limit is not None else ""
    line = f"criterion {number:2d} {status}  {title} ({timing}{budget}): {error or detail}"
    return error is None, line


@pytest.mark.parametrize("number, title, check, limit", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, limit, capsys):
    ok, line = evaluate(number, title, check, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
