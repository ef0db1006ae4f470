"""Golden fixtures: nodal degenerations of curves of genus 1, 2 and 3.

Coordinates are ordered (δ_1, ..., δ_g, γ_1, ..., γ_g) with δ_i the
vanishing cycles. The polarization is Q(γ_i, δ_j) = δ_ij and the monodromy
logarithm of a vanishing cycle v is N_v(x) = Q(x, v) v, so N_{δ_i} sends
γ_i to δ_i.  The Hodge filtration F^1 is spanned by the columns
γ_j + Σ_i A_ij δ_i of the normalized period matrix A with its
logarithmic terms dropped; exp(λ N_{δ_i}) then adds λ to A_ii.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .hodge import HodgeFiltration, PolarizationForm
from .monodromy import NilpotentEndomorphism, NilpotentOrbitData
from .qlinalg import I, ZERO, GaussianRational, Matrix, Subspace, gr

__all__ = [
    "Genus3Params",
    "LogPeriodEntry",
    "symplectic_form",
    "vanishing_cycle_log",
    "period_filtration",
    "period_matrix_of",
    "elliptic_pure",
    "elliptic_degeneration",
    "genus3_orbit",
    "genus3_extension_data",
    "genus2_orbit",
    "genus3_strata",
    "GENUS2_PATTERNS",
]


@dataclass(frozen=True)
class LogPeriodEntry:
    """A period entry ``constant + log_coefficient * ℓ(t)``, ℓ(t) = log(t)/2πi."""

    constant: GaussianRational
    log_coefficient: int = 0


@dataclass(frozen=True)
class Genus3Params:
    a11: GaussianRational = ZERO
    a12: GaussianRational = gr("1/2")
    a22: GaussianRational = ZERO
    b1: GaussianRational = gr("1/3")
    b2: GaussianRational = gr("1/5")
    c: GaussianRational = I

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, GaussianRational.coerce(getattr(self, f.name)))
        if self.c.im <= 0:
            raise ValueError("the elliptic period c must have positive imaginary part")

    def period_matrix(self) -> Matrix:
        return Matrix(
            [
                [self.a11, self.a12, self.b1],
                [self.a12, self.a22, self.b2],
                [self.b1, self.b2, self.c],
            ]
        )

    def log_entries(self) -> list[list[LogPeriodEntry]]:
        """Entries of the degenerating period matrix; ℓ(t) sits on a11, a22."""
        a = self.period_matrix()
        return [
            [LogPeriodEntry(a[i, j], 1 if i == j and i < 2 else 0) for j in range(3)] for i in range(3)
        ]

    def shifted(self, lam) -> "Genus3Params":
        lam = GaussianRational.coerce(lam)
        return Genus3Params(self.a11 + lam, self.a12, self.a22 + lam, self.b1, self.b2, self.c)


def symplectic_form(g: int) -> PolarizationForm:
    """Q(γ_i, δ_j) = δ_ij on coordinates (δ_1..δ_g, γ_1..γ_g)."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[i][g + i] = -1
        rows[g + i][i] = 1
    return PolarizationForm(Matrix(rows), 1)


def vanishing_cycle_log(Q: PolarizationForm, cycle) -> Matrix:
    """Picard-Lefschetz logarithm x ↦ Q(x, v) v."""
    v = [GaussianRational.coerce(x) for x in cycle]
    qv = Q.matrix.apply(v)
    return Matrix([[vi * w for w in qv] for vi in v])


def period_filtration(A: Matrix) -> HodgeFiltration:
    """F^1 spanned by γ_j + Σ_i A_ij δ_i."""
    g = A.nrows
    cols = []
    for j in range(g):
        cols.append(tuple(A[i, j] for i in range(g)) + tuple(1 if k == j else 0 for k in range(g)))
    return HodgeFiltration({1: Subspace.span(2 * g, cols)})


def period_matrix_of(F: HodgeFiltration, g: int) -> Matrix:
    """Recover A from F^1 when F^1 is a graph over the γ-coordinates."""
    basis = F[1].basis
    if basis.ncols != g or basis.nrows != 2 * g:
        raise ValueError("F^1 does not have the fixture shape")
    top = basis.submatrix(range(g), range(g))
    bottom = basis.submatrix(range(g, 2 * g), range(g))
    try:
        return top @ bottom.inverse()
    except ZeroDivisionError:
        raise ValueError("F^1 is not a graph over the γ-coordinates") from None


def _orbit(A: Matrix, cycles: list) -> NilpotentOrbitData:
    g = A.nrows
    Q = symplectic_form(g)
    gens = [NilpotentEndomorphism(vanishing_cycle_log(Q, c)) for c in cycles]
    return NilpotentOrbitData(period_filtration(A), gens, 1, Q)


def _delta(g: int, *weights) -> tuple:
    return tuple(weights) + (0,) * (2 * g - len(weights))


def elliptic_pure(tau=I) -> tuple[HodgeFiltration, PolarizationForm]:
    """Weight-1 structure of an elliptic curve with period τ (Im τ > 0)."""
    tau = GaussianRational.coerce(tau)
    return period_filtration(Matrix([[tau]])), symplectic_form(1)


def elliptic_degeneration(a=I) -> NilpotentOrbitData:
    """One vanishing cycle δ on a genus-1 curve; F^1 = span{aδ + γ}."""
    return _orbit(Matrix([[GaussianRational.coerce(a)]]), [_delta(1, 1)])


def genus3_orbit(p: Genus3Params | None = None) -> NilpotentOrbitData:
    """Irreducible genus-3 nodal curve with two nodes and elliptic normalization."""
    p = p or Genus3Params()
    return _orbit(p.period_matrix(), [_delta(3, 1), _delta(3, 0, 1)])


def genus3_extension_data(orbit: NilpotentOrbitData) -> dict:
    """Split the recovered period matrix by behaviour under exp(zN)."""
    if orbit.ambient_dim != 6 or len(orbit.generators) != 2:
        raise ValueError("orbit is not of the genus-3 fixture shape")
    expected = genus3_orbit()
    if [g.matrix for g in orbit.generators] != [g.matrix for g in expected.generators]:
        raise ValueError("orbit monodromy differs from the genus-3 fixture")
    A = period_matrix_of(orbit.F, 3)
    if A.T != A:
        raise ValueError("recovered period matrix is not symmetric")
    return {
        "invariant": {"c": A[2, 2], "b1": A[0, 2], "b2": A[1, 2], "a12": A[0, 1]},
        "reparametrization_dependent": {"a11": A[0, 0], "a22": A[1, 1]},
        "labels": {
            "c": "period of the elliptic normalization",
            "b1": "Abel-Jacobi image of p1 - q1",
            "b2": "Abel-Jacobi image of p2 - q2",
            "a12": "off-diagonal regularized integral",
            "a11": "regularized improper integral, shifts under reparametrization",
            "a22": "regularized improper integral, shifts under reparametrization",
        },
    }


GENUS2_PATTERNS = {
    "i": [["0", "b"], ["b", "0"]],
    "ii": [["0", "0"], ["0", "0"]],
}

_GENUS2_DEFAULT = Matrix([[gr("1/2") + I, gr("1/3")], [gr("1/3"), gr("1/5") + 2 * I]])


def genus2_orbit(case: str, A: Matrix | None = None) -> tuple[NilpotentOrbitData, list[list[str]]]:
    """Genus-2 degenerations with two (case i) or three (case ii) vanishing cycles.

    In case ii the third cycle is δ_1 + δ_2, so the three logarithms
    span every symmetric direction on the δ-block.
    """
    A = A or _GENUS2_DEFAULT
    if case == "i":
        cycles = [_delta(2, 1), _delta(2, 0, 1)]
    elif case == "ii":
        cycles = [_delta(2, 1), _delta(2, 0, 1), _delta(2, 1, 1)]
    else:
        raise ValueError(f"unknown genus-2 case {case!r}")
    return _orbit(A, cycles), GENUS2_PATTERNS[case]


def genus3_strata():
    """Stratum data of the genus-3 fixture: elliptic normalization, two nodes."""
    from .strata import nodal_curve_strata

    return nodal_curve_strata(1, 2)
