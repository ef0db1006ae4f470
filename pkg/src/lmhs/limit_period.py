"""Reduced limit period map, Lie-algebra quadrants and orbit tangent data.

Limits z → ∞ in the Grassmannian are taken by leading-term reduction of a
polynomial frame: while the top-degree coefficient vectors are dependent,
a combination of columns cancels the top degree of one of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from . import polynomial as poly
from .errors import PreconditionError
from .hodge import (
    DeligneBigrading,
    HodgeFiltration,
    LieAlgebraMHS,
    MixedHodgeStructure,
    PolarizationForm,
    Verdict,
    WeightFiltration,
    deligne_bigrading,
    is_r_split,
    lie_algebra_mhs,
    r_split,
)
from .monodromy import NilpotentEndomorphism, NilpotentOrbitData, lmhs_check
from .qlinalg import ZERO, GaussianRational, Matrix, Subspace, join_all, meet, quotient_matrix

__all__ = [
    "PolynomialFrame",
    "BoundaryFlag",
    "LMHSError",
    "grassmannian_limit",
    "exp_frame",
    "reduced_lpm",
    "r_split_limit",
    "QuadrantReport",
    "lie_quadrants",
    "TangentDimReport",
    "orbit_tangent_dim",
    "InvariantTable",
    "orbit_invariants",
    "ResidualTangentReport",
    "residual_tangent_data",
    "pattern_signature",
]


class LMHSError(PreconditionError):
    """The orbit failed lmhs_check; ``verdict`` carries the failing clause."""

    def __init__(self, verdict: Verdict):
        super().__init__(f"not a limiting mixed Hodge structure: {verdict.clause} {verdict.witness}")
        self.verdict = verdict


class PolynomialFrame:
    """Columns with entries in Q(i)[z], each entry a coefficient tuple."""

    def __init__(self, columns: Sequence[Sequence], ambient_dim: int):
        cols = []
        for col in columns:
            if len(col) != ambient_dim:
                raise ValueError("frame column has the wrong length")
            cols.append(tuple(poly.trim(e) for e in col))
        self.columns = tuple(cols)
        self.ambient_dim = ambient_dim
        if not self._independent():
            raise ValueError("frame columns are dependent over Q(i)(z)")

    @staticmethod
    def column_degree(col) -> int:
        return max((poly.degree(e) for e in col), default=-1)

    def evaluate(self, z) -> Matrix:
        return Matrix.from_columns(
            [[poly.evaluate(e, z) for e in col] for col in self.columns], nrows=self.ambient_dim
        )

    def _independent(self) -> bool:
        k = len(self.columns)
        if k == 0:
            return True
        if k > self.ambient_dim:
            return False
        # a nonzero k-minor has degree at most the sum of column degrees
        bound = sum(max(self.column_degree(c), 0) for c in self.columns)
        return any(self.evaluate(z).rank() == k for z in range(bound + 1))


def _leading(col, degree: int) -> tuple[GaussianRational, ...]:
    return tuple(e[degree] if len(e) > degree else ZERO for e in col)


def grassmannian_limit(frame: PolynomialFrame) -> Subspace:
    """Limit of the column span of the frame as z → ∞."""
    n = frame.ambient_dim
    cols = [list(c) for c in frame.columns]
    while True:
        degs = [PolynomialFrame.column_degree(c) for c in cols]
        leads = [_leading(c, d) for c, d in zip(cols, degs)]
        if not cols:
            return Subspace.zero(n)
        kernel = Matrix.from_columns(leads, nrows=n).nullspace()
        if kernel.ncols == 0:
            return Subspace.span(n, leads)
        rel = kernel.column(0)
        top = max((j for j in range(len(cols)) if rel[j]), key=lambda j: (degs[j], j))
        dtop = degs[top]
        scale = rel[top].inverse()
        new = [()] * n
        for j, c in enumerate(rel):
            if not c:
                continue
            factor = c * scale
            for r in range(n):
                new[r] = poly.add(new[r], poly.shift(poly.scale(cols[j][r], factor), dtop - degs[j]))
        cols[top] = new


def exp_frame(N: Matrix, vectors: Sequence[Sequence]) -> PolynomialFrame:
    """Frame of exp(zN)·span(vectors): column Σ_k z^k N^k v / k!."""
    n = N.nrows
    powers = [Matrix.identity(n)]
    while not powers[-1].is_zero():
        powers.append(powers[-1] @ N)
    powers.pop()
    cols = []
    for v in vectors:
        images = [P.apply(v) for P in powers]
        col = []
        for r in range(n):
            col.append(poly.trim([images[k][r] * GaussianRational(Fraction(1, factorial(k))) for k in range(len(images))]))
        cols.append(col)
    return PolynomialFrame(cols, n)


@dataclass(frozen=True)
class BoundaryFlag:
    """Image of a nilpotent orbit under the reduced limit period map."""

    F_infinity: HodgeFiltration
    N: Matrix
    center: int
    interior: bool = False
    source: MixedHodgeStructure | None = field(default=None, compare=False)

    def check(self, F: HodgeFiltration) -> list[str]:
        problems = []
        lo, hi = F.bounds()
        for p in range(lo, hi + 2):
            if self.F_infinity[p].dim != F[p].dim:
                problems.append(f"dim F_inf^{p} != dim F^{p}")
            if not self.F_infinity[p].image(self.N) <= self.F_infinity[p]:
                problems.append(f"N does not preserve F_inf^{p}")
        return problems


def _limit_filtration(F: HodgeFiltration, N: Matrix) -> HodgeFiltration:
    lo, hi = F.bounds()
    steps = {p: grassmannian_limit(exp_frame(N, F[p].vectors())) for p in range(lo + 1, hi + 1)}
    return HodgeFiltration(steps, F.ambient_dim)


def reduced_lpm(orbit: NilpotentOrbitData, N=None) -> BoundaryFlag:
    """Φ∞(F, N) = lim exp(zN)·F.  N = 0 returns F itself, tagged interior."""
    N = orbit.default_N() if N is None else NilpotentEndomorphism.coerce(N)
    if N.matrix.is_zero():
        return BoundaryFlag(orbit.F, N.matrix, orbit.center, interior=True)
    verdict = lmhs_check(orbit, N)
    if not verdict:
        raise LMHSError(verdict)
    flag = BoundaryFlag(
        _limit_filtration(orbit.F, N.matrix), N.matrix, orbit.center, source=orbit.mhs(N)
    )
    problems = flag.check(orbit.F)
    if problems:
        raise AssertionError("; ".join(problems))
    return flag


def r_split_limit(mhs: MixedHodgeStructure, bigrading: DeligneBigrading | None = None) -> HodgeFiltration:
    """F∞^p = ⊕_{q ≤ m-p} I^{•,q}, valid when the structure is R-split."""
    b = bigrading or deligne_bigrading(mhs)
    m = mhs.center
    lo, hi = mhs.F.bounds()
    steps = {p: b.sum_where(lambda _p, q, p=p: q <= m - p) for p in range(lo + 1, hi + 1)}
    return HodgeFiltration(steps, mhs.ambient_dim)


def _trivial_weight(n: int, center: int) -> WeightFiltration:
    return WeightFiltration(center, {center: Subspace.full(n)})


def _lie_algebra(F: HodgeFiltration, Q: PolarizationForm, center: int) -> LieAlgebraMHS:
    n = F.ambient_dim
    return lie_algebra_mhs(MixedHodgeStructure(_trivial_weight(n, center), F, Q), Q)


def _ad_matrix(lie: LieAlgebraMHS, N: Matrix) -> Matrix:
    cols = [lie.to_coords(N @ X - X @ N) for X in lie.basis]
    return Matrix.from_columns(cols, nrows=len(lie.basis))


@dataclass(frozen=True)
class QuadrantReport:
    bigrading_dims: dict
    regions: dict
    ker_dim: int
    coker_dim: int
    r_split_applied: bool
    limit_convention: str
    N_piece: tuple[int, int] | None


_REGIONS = {
    "I": lambda p, q: p <= -1 and q <= -1,
    "II": lambda p, q: p <= -1 and q >= 1,
    "III": lambda p, q: p >= 0 and q >= 1,
    "boundary": lambda p, q: p <= -1 and q == 0,
}


def lie_quadrants(orbit: NilpotentOrbitData, N=None) -> QuadrantReport:
    """Sort the pieces I^{p,q} of g by the behaviour of dΦ∞.

    Regions follow the tangent-space formulas: T_F = ⊕_{p≤-1} I^{p,•},
    T_{F∞} = ⊕_{q≥1} I^{•,q}; the differential is the identity for q ≥ 1
    and zero for q < 0.  I = kernel part, II = identity part, III =
    cokernel part; the q = 0 column of T_F is reported as ``boundary``.
    """
    N = orbit.default_N() if N is None else NilpotentEndomorphism.coerce(N)
    mhs = orbit.mhs(N)
    applied = not is_r_split(mhs)
    if applied:
        mhs = r_split(mhs)
        orbit = orbit.with_filtration(mhs.F)
    lie = lie_algebra_mhs(mhs, orbit.Q)
    b = deligne_bigrading(lie)
    dims = b.dims()
    regions = {name: {pq: d for pq, d in dims.items() if pred(*pq)} for name, pred in _REGIONS.items()}

    n_coords = lie.to_coords(N.matrix)
    n_piece = next((pq for pq, s in b.pieces.items() if any(n_coords) and s.contains(n_coords)), None)

    conventions = []
    if not N.matrix.is_zero():
        limit = _limit_filtration(lie.F, _ad_matrix(lie, N.matrix))
        lo, hi = lie.F.bounds()
        for name, rule in (("q<=-p", lambda p, q: q <= -p), ("q<=p", lambda p, q: q <= p)):
            if all(limit[p] == b.sum_where(lambda _p, q, p=p, rule=rule: rule(p, q)) for p in range(lo, hi + 2)):
                conventions.append(name)
    return QuadrantReport(
        bigrading_dims=dims,
        regions=regions,
        ker_dim=sum(regions["I"].values()),
        coker_dim=sum(regions["III"].values()),
        r_split_applied=applied,
        limit_convention=",".join(conventions) or "none",
        N_piece=n_piece,
    )


@dataclass(frozen=True)
class TangentDimReport:
    direct: int
    formula: int
    formula_route: str

    @property
    def dim(self) -> int:
        return self.direct


def _real_rank(vectors: Sequence[Sequence[GaussianRational]]) -> int:
    rows = [[x.re for x in v] + [x.im for x in v] for v in vectors]
    if not rows or not rows[0]:
        return 0
    return Matrix(rows).rank()


def orbit_tangent_dim(flag: BoundaryFlag, Q: PolarizationForm) -> TangentDimReport:
    """Real dimension of the image of g_R in g_C / F^0_∞ g_C, two ways."""
    lie = _lie_algebra(flag.F_infinity, Q, flag.center)
    d = len(lie.basis)
    f0 = lie.F[0]
    if f0.is_full():
        direct = 0
    else:
        q = quotient_matrix(f0, Subspace.full(d))
        direct = _real_rank([q.column(k) for k in range(d)])

    source = flag.source
    if source is not None and not flag.interior and is_r_split(source):
        b = deligne_bigrading(lie_algebra_mhs(source, Q))
        # Res_{C/R} of the q > 0, p <= 0 block plus the real points of the p, q > 0 block
        formula = sum(2 * dim for (p, q), dim in b.dims().items() if q > 0 and p <= 0)
        formula += sum(dim for (p, q), dim in b.dims().items() if q > 0 and p > 0)
        route = "bigrading"
    else:
        formula = d - meet(f0, f0.conj()).dim
        route = "intersection"
    if formula != direct:
        raise AssertionError(f"orbit tangent dimension routes disagree: {direct} vs {formula}")
    return TangentDimReport(direct, formula, route)


@dataclass(frozen=True)
class InvariantTable:
    indices: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]

    def to_json(self):
        return {"indices": list(self.indices), "table": [list(r) for r in self.table]}


def orbit_invariants(
    flag: BoundaryFlag | HodgeFiltration,
    conjugation: Callable[[Subspace], Subspace] | None = None,
) -> InvariantTable:
    """dim(F^p ∩ conj F^q) for all p, q in the flag's range."""
    F = flag.F_infinity if isinstance(flag, BoundaryFlag) else flag
    conj = conjugation or (lambda s: s.conj())
    lo, hi = F.bounds()
    idx = tuple(range(lo, hi + 2))
    conj_steps = {q: conj(F[q]) for q in idx}
    table = tuple(tuple(meet(F[p], conj_steps[q]).dim for q in idx) for p in idx)
    return InvariantTable(idx, table)


@dataclass(frozen=True)
class ResidualTangentReport:
    tangent_pattern: dict
    residual_pattern: dict
    killed_positions: dict
    tangent_dim: int
    killed_dim: int
    generator_count: int
    dependent: bool

    @property
    def residual_dim(self) -> int:
        return self.tangent_dim - self.killed_dim


def _coordinate_frame(sub: Subspace) -> tuple[list[int], list[int], Matrix]:
    """Split coordinates into a complement S (lowest indices first) and T.

    Returns S, T and a basis of ``sub`` that is the identity on T.
    """
    n = sub.ambient_dim
    S: list[int] = []
    current = sub
    for i in range(n):
        if len(S) == n - sub.dim:
            break
        e = tuple(1 if k == i else 0 for k in range(n))
        if not current.contains(e):
            S.append(i)
            current = join_all([current, Subspace.coordinate(n, [i])], n)
    T = [i for i in range(n) if i not in S]
    basis = sub.basis
    block = basis.submatrix(T, range(basis.ncols))
    normalized = basis @ block.inverse() if T else basis
    return S, T, normalized


def _hom_coordinates(X: Matrix, frames: dict) -> list[GaussianRational]:
    out = []
    for p, (S, T, B) in frames.items():
        img = X @ B
        for c in range(len(T)):
            col = img.column(c)
            for r, s in enumerate(S):
                # reduce mod F^p using the T-normalized basis
                val = col[s]
                for t_idx, t in enumerate(T):
                    if col[t]:
                        val = val - col[t] * B[s, t_idx]
                out.append(val)
    return out


def _labels(T: Subspace) -> list[str]:
    """One letter per class of positions that agree on all of T; '0' if always zero."""
    vectors = T.vectors()
    letters: dict[tuple, str] = {}
    out = []
    for k in range(T.ambient_dim):
        sig = tuple(v[k] for v in vectors)
        if not any(sig):
            out.append("0")
            continue
        if sig not in letters:
            letters[sig] = _letter(len(letters))
        out.append(letters[sig])
    return out


def _letter(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def _killed(T: Subspace, K: Subspace, k: int) -> bool:
    dim = T.ambient_dim
    e = [ZERO] * dim
    e[k] = GaussianRational(1)
    zero_here = meet(T, Subspace.span(dim, Matrix([e]).nullspace().columns()))
    return join_all([K, zero_here], dim) == T


def residual_tangent_data(orbit: NilpotentOrbitData) -> ResidualTangentReport:
    """Horizontal tangent directions at F modulo the cone directions.

    Entries are Hom(F^p, V/F^p) matrices in coordinates where F^p is the
    graph over its complementary coordinates, so for a weight-one orbit
    built from a period matrix the entries are period-matrix entries.
    """
    lie = lie_algebra_mhs(
        MixedHodgeStructure(_trivial_weight(orbit.ambient_dim, orbit.center), orbit.F, orbit.Q), orbit.Q
    )
    lo, hi = orbit.F.bounds()
    frames = {p: _coordinate_frame(orbit.F[p]) for p in range(lo + 1, hi + 1)}
    positions = [(p, r, c) for p, (S, T, _) in frames.items() for c in range(len(T)) for r in range(len(S))]
    dim = len(positions)
    horizontal = lie.F[-1].vectors()
    T_space = Subspace.span(dim, [_hom_coordinates(lie.from_coords(v), frames) for v in horizontal])
    K = Subspace.span(dim, [_hom_coordinates(g.matrix, frames) for g in orbit.generators])
    if not K <= T_space:
        raise AssertionError("cone directions are not horizontal tangent vectors")

    def as_patterns(labels):
        pats = {}
        for (p, r, c), lab in zip(positions, labels):
            S, T, _ = frames[p]
            pats.setdefault(p, [["0"] * len(T) for _ in S])[r][c] = lab
        return pats

    tangent_labels = _labels(T_space)
    residual_labels = [
        "0" if _killed(T_space, K, k) else tangent_labels[k] for k in range(dim)
    ]
    killed = {
        positions[k]: True for k in range(dim) if residual_labels[k] == "0" and tangent_labels[k] != "0"
    }
    return ResidualTangentReport(
        tangent_pattern=as_patterns(tangent_labels),
        residual_pattern=as_patterns(residual_labels),
        killed_positions=killed,
        tangent_dim=T_space.dim,
        killed_dim=K.dim,
        generator_count=len(orbit.generators),
        dependent=K.dim < len(orbit.generators),
    )


def pattern_signature(pattern: Sequence[Sequence[str]]) -> tuple:
    """Zero/equality structure of a label pattern, independent of letter names."""
    names: dict[str, int] = {}
    out = []
    for row in pattern:
        r = []
        for lab in row:
            if lab == "0":
                r.append(0)
            else:
                r.append(names.setdefault(lab, len(names) + 1))
        out.append(tuple(r))
    return tuple(out)
