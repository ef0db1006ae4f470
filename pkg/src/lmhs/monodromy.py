"""Nilpotent monodromy: weight filtrations, LMHS checks, N-strings and cones."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import polynomial as poly
from .errors import PreconditionError
from .hodge import (
    DeligneBigrading,
    HodgeFiltration,
    MixedHodgeStructure,
    NotMixedHodgeError,
    PolarizationForm,
    Verdict,
    WeightFiltration,
    deligne_bigrading,
    i_power,
)
from .qlinalg import (
    ONE,
    ZERO,
    DimensionError,
    GaussianRational,
    Matrix,
    Subspace,
    is_positive_definite_hermitian,
    join,
    meet,
    preimage,
    quotient_matrix,
)

__all__ = [
    "PRIMITIVE_SIGN_BASE",
    "ConeError",
    "NilpotentEndomorphism",
    "NilpotentOrbitData",
    "NString",
    "NStringDiagram",
    "weight_filtration",
    "weight_filtration_axioms",
    "lmhs_check",
    "nilpotent_orbit_check",
    "n_strings",
    "cone_weight_independence",
    "equivalent_orbits",
    "sample_cone_coefficients",
    "primitive_pieces",
]

# Q_k(u, v) = PRIMITIVE_SIGN_BASE**k * Q(N^k u, v), i.e. Q(u, N^k v) for
# an infinitesimal isometry N.
PRIMITIVE_SIGN_BASE = -1


class ConeError(PreconditionError):
    """N is not an interior point of the monodromy cone."""


class NilpotentEndomorphism:
    """A nilpotent rational matrix together with its nilpotency index."""

    def __init__(self, matrix: Matrix):
        if not isinstance(matrix, Matrix):
            matrix = Matrix(matrix)
        if not matrix.is_square():
            raise DimensionError("an endomorphism must be square")
        if not matrix.is_real():
            raise ValueError("monodromy logarithms must have rational entries")
        idx = matrix.nilpotency_index()
        if idx is None:
            raise ValueError("matrix is not nilpotent")
        self.matrix = matrix
        self.ambient_dim = matrix.nrows
        self.index = idx

    @classmethod
    def coerce(cls, value) -> "NilpotentEndomorphism":
        return value if isinstance(value, cls) else cls(value)

    def power(self, k: int) -> Matrix:
        return self.matrix.power(k)

    def __eq__(self, other):
        if not isinstance(other, NilpotentEndomorphism):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"NilpotentEndomorphism(dim={self.ambient_dim}, index={self.index})"


class NilpotentOrbitData:
    """Hodge filtration plus commuting nilpotent generators of a cone."""

    def __init__(
        self,
        F: HodgeFiltration,
        generators: Sequence,
        center: int,
        Q: PolarizationForm,
    ):
        gens = [NilpotentEndomorphism.coerce(g) for g in generators]
        n = F.ambient_dim
        if Q.dim != n or any(g.ambient_dim != n for g in gens):
            raise DimensionError("orbit data have inconsistent dimensions")
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                x, y = gens[a].matrix, gens[b].matrix
                if x @ y != y @ x:
                    raise ValueError(f"generators {a} and {b} do not commute")
        if gens and Matrix([[x for row in g.matrix.rows() for x in row] for g in gens]).rank() < len(gens):
            raise ValueError("cone generators are linearly dependent")
        for idx, g in enumerate(gens):
            if not Q.is_infinitesimal_isometry(g.matrix):
                raise ValueError(f"generator {idx} is not an infinitesimal isometry of Q")
            lo, hi = F.bounds()
            for p in range(lo, hi + 2):
                if not F[p].image(g.matrix) <= F[p - 1]:
                    raise ValueError(f"generator {idx} violates N F^{p} ⊆ F^{p - 1}")
        self.F = F
        self.generators = gens
        self.center = int(center)
        self.Q = Q
        self.ambient_dim = n

    def cone_point(self, coefficients: Sequence) -> NilpotentEndomorphism:
        if len(coefficients) != len(self.generators):
            raise ValueError("one coefficient per generator is required")
        acc = Matrix.zeros(self.ambient_dim, self.ambient_dim)
        for c, g in zip(coefficients, self.generators):
            acc = acc + g.matrix.scale(c)
        return NilpotentEndomorphism(acc)

    def default_N(self) -> NilpotentEndomorphism:
        return self.cone_point([1] * len(self.generators))

    def cone_coefficients(self, N) -> list[Fraction]:
        """Coefficients of N in the generators; raises ConeError if not interior."""
        N = NilpotentEndomorphism.coerce(N)
        if not self.generators:
            if N.matrix.is_zero():
                return []
            raise ConeError("orbit has no generators but N is nonzero")
        cols = [[x for row in g.matrix.rows() for x in row] for g in self.generators]
        target = Matrix([[x] for row in N.matrix.rows() for x in row])
        sol = Matrix.from_columns(cols).solve(target)
        if sol is None:
            raise ConeError("N is not in the span of the cone generators")
        coeffs = [sol[i, 0] for i in range(len(cols))]
        if any(not c.is_real() or c.re <= 0 for c in coeffs):
            raise ConeError("N is not in the interior of the cone")
        return [c.re for c in coeffs]

    def with_filtration(self, F: HodgeFiltration) -> "NilpotentOrbitData":
        return NilpotentOrbitData(F, self.generators, self.center, self.Q)

    def mhs(self, N=None) -> MixedHodgeStructure:
        N = self.default_N() if N is None else NilpotentEndomorphism.coerce(N)
        return MixedHodgeStructure(weight_filtration(N, self.center), self.F, self.Q)


def _lowest_nonvanishing_power(N: Matrix, A: Subspace, B: Subspace) -> tuple[int, Subspace]:
    """Largest l with N^l A not inside B, and the image N^l A."""
    l, img = 0, A
    while True:
        nxt = img.image(N)
        if nxt <= B:
            return l, img
        l, img = l + 1, nxt


def weight_filtration(N, center: int) -> WeightFiltration:
    """The monodromy weight filtration of N centered at ``center``.

    Built top-down: W_{m+l} = V, W_{m+l-1} = ker N^l, W_{m-l} = im N^l,
    then recursively on ker N^l / im N^l.
    """
    N = NilpotentEndomorphism.coerce(N)
    m = int(center)
    mat = N.matrix
    n = N.ambient_dim
    steps: dict[int, Subspace] = {}

    def build(A: Subspace, B: Subspace) -> None:
        if A == B:
            return
        l, img = _lowest_nonvanishing_power(mat, A, B)
        if l == 0:
            steps[m - 1] = B
            steps[m] = A
            return
        steps[m + l] = A
        steps[m - l - 1] = B
        lower = join(img, B)
        upper = meet(A, preimage(mat.power(l), B))
        steps[m - l] = lower
        steps[m + l - 1] = upper
        build(upper, lower)

    build(Subspace.full(n), Subspace.zero(n))
    return WeightFiltration(m, steps)


def _graded_lift(W: WeightFiltration, k: int) -> list:
    return W[k - 1].complement_in(W[k])


def weight_filtration_axioms(N, W: WeightFiltration) -> Verdict:
    """Check N W_k ⊆ W_{k-2} and N^k : Gr_{m+k} -> Gr_{m-k} bijective."""
    N = NilpotentEndomorphism.coerce(N)
    m = W.center
    lo, hi = W.bounds()
    for k in range(lo - 1, hi + 1):
        if not W[k].image(N.matrix) <= W[k - 2]:
            return Verdict.fail("N W_k ⊆ W_{k-2}", k=k)
    span = max(hi - m, m - lo, 0)
    for k in range(0, span + 1):
        src = _graded_lift(W, m + k)
        dst_dim = W[m - k].dim - W[m - k - 1].dim
        if len(src) != dst_dim:
            return Verdict.fail("graded dimensions", k=k)
        if not src:
            continue
        q = quotient_matrix(W[m - k - 1], W[m - k])
        mat = q @ N.power(k) @ Matrix.from_columns(src)
        if mat.rank() != len(src):
            return Verdict.fail("N^k isomorphism", k=k)
    return Verdict.ok()


def primitive_pieces(
    N: NilpotentEndomorphism, bigrading: DeligneBigrading, center: int
) -> dict[tuple[int, int], Subspace]:
    """P^{p,q} = I^{p,q} ∩ ker N^{k+1}, k = p+q-m ≥ 0."""
    out = {}
    for (p, q), piece in bigrading.pieces.items():
        k = p + q - center
        if k < 0:
            continue
        ker = Subspace.span(N.ambient_dim, N.power(k + 1).nullspace().columns())
        prim = meet(piece, ker)
        if not prim.is_zero():
            out[(p, q)] = prim
    return out


def _conj(v):
    return tuple(x.conjugate() for x in v)


def lmhs_check(orbit: NilpotentOrbitData, N=None) -> Verdict:
    """Is (W(N), F) a MHS whose primitive parts are polarized by Q(·, N^k ·)?"""
    N = orbit.default_N() if N is None else NilpotentEndomorphism.coerce(N)
    orbit.cone_coefficients(N)
    m = orbit.center
    F = orbit.F
    lo, hi = F.bounds()
    for p in range(lo, hi + 2):
        if not F[p].image(N.matrix) <= F[p - 1]:
            return Verdict.fail("horizontality", p=p)
    W = weight_filtration(N, m)
    mhs = MixedHodgeStructure(W, F, orbit.Q)
    try:
        big = deligne_bigrading(mhs)
    except NotMixedHodgeError as exc:
        return Verdict.fail("mixed Hodge structure", k=exc.k, p=exc.p, reason=exc.reason)
    prim = primitive_pieces(N, big, m)
    Q = orbit.Q
    for (p, q), piece in prim.items():
        k = p + q - m
        nk = N.power(k)
        sign = PRIMITIVE_SIGN_BASE ** k
        vecs = piece.vectors()
        left = [nk.apply(v) for v in vecs]
        for (r, s), other in prim.items():
            if r + s != p + q or r == q:
                continue
            if not Q.gram(left, other.vectors()).is_zero():
                return Verdict.fail("first relation", weight=p + q, pieces=[[p, q], [r, s]])
        gram = Q.gram(left, [_conj(v) for v in vecs]).scale(i_power(p - q) * sign)
        if not is_positive_definite_hermitian(gram):
            return Verdict.fail("positivity", weight=p + q, p=p, q=q, k=k)
    return Verdict.ok()


def nilpotent_orbit_check(orbit: NilpotentOrbitData, N=None) -> Verdict:
    """Nilpotent-orbit test via its equivalence with the LMHS conditions.

    The condition exp(zN)F ∈ D for Im z >> 0 is not sampled; it is
    certified through the equivalence with :func:`lmhs_check`.
    """
    return lmhs_check(orbit, N)


@dataclass(frozen=True)
class NString:
    base_weight: int
    length: int
    piece_dims: dict = field(default_factory=dict)
    twist_chain: tuple = ()

    @property
    def dim(self) -> int:
        return sum(self.piece_dims.values())


@dataclass(frozen=True)
class NStringDiagram:
    strings: tuple
    ambient_dim: int

    def graded_dims(self) -> dict[int, int]:
        """dim Gr_w summed over all strings."""
        out: dict[int, int] = {}
        for s in self.strings:
            for j, d in s.twist_chain:
                w = s.base_weight + 2 * j
                out[w] = out.get(w, 0) + d
        return dict(sorted(out.items()))

    def total_dim(self) -> int:
        return sum(d for s in self.strings for _, d in s.twist_chain)

    def signature(self) -> tuple:
        """Sorted (base weight, length, dim per piece) triples, comparable across routes."""
        return tuple(sorted((s.base_weight, s.length, s.dim) for s in self.strings if s.dim))


def n_strings(orbit: NilpotentOrbitData, N=None) -> NStringDiagram:
    """Primitive decomposition H^k(-j) -> ... -> H^k of the LMHS."""
    N = orbit.default_N() if N is None else NilpotentEndomorphism.coerce(N)
    verdict = lmhs_check(orbit, N)
    if not verdict:
        raise PreconditionError(f"LMHS check failed ({verdict.clause}); N-strings are undefined")
    m = orbit.center
    big = deligne_bigrading(orbit.mhs(N))
    prim = primitive_pieces(N, big, m)
    by_length: dict[int, dict] = {}
    for (p, q), piece in prim.items():
        l = p + q - m
        vecs = piece.vectors()
        # N acts injectively along the string down to the base
        image = piece
        for step in range(1, l + 1):
            image = image.image(N.matrix)
            if image.dim != piece.dim:
                raise AssertionError("N is not injective along an N-string")
        base = by_length.setdefault(l, {})
        base[(p - l, q - l)] = base.get((p - l, q - l), 0) + len(vecs)
    strings = []
    for l in sorted(by_length, reverse=True):
        dims = dict(sorted(by_length[l].items()))
        total = sum(dims.values())
        strings.append(
            NString(
                base_weight=m - l,
                length=l,
                piece_dims=dims,
                twist_chain=tuple((j, total) for j in range(l, -1, -1)),
            )
        )
    diagram = NStringDiagram(tuple(strings), orbit.ambient_dim)
    if diagram.total_dim() != orbit.ambient_dim:
        raise AssertionError("N-string dimensions do not add up to the ambient dimension")
    return diagram


_CONE_NUMERATORS = (1, 2, 3, 5, 7)
_CONE_DENOMINATORS = (1, 2, 3)


def sample_cone_coefficients(count: int, rng: random.Random) -> list[Fraction]:
    return [
        Fraction(rng.choice(_CONE_NUMERATORS), rng.choice(_CONE_DENOMINATORS)) for _ in range(count)
    ]


def cone_weight_independence(orbit: NilpotentOrbitData, samples: int = 10, seed: int = 0) -> bool:
    """Spot-check that W(N) is the same for sampled interior points of the cone."""
    if len(orbit.generators) <= 1:
        return True
    rng = random.Random(seed)
    reference = weight_filtration(orbit.default_N(), orbit.center)
    for _ in range(samples):
        coeffs = sample_cone_coefficients(len(orbit.generators), rng)
        if weight_filtration(orbit.cone_point(coeffs), orbit.center) != reference:
            return False
    return True


def equivalent_orbits(F: HodgeFiltration, F2: HodgeFiltration, N) -> GaussianRational | None:
    """Some z with exp(zN)·F = F2, or None.

    Membership of exp(zN) f in F2^p is polynomial in z; the common roots
    of all these polynomials are either all of C or a single point.
    """
    N = NilpotentEndomorphism.coerce(N)
    if F.ambient_dim != F2.ambient_dim or F.ambient_dim != N.ambient_dim:
        raise DimensionError("filtrations and N must share the ambient space")
    lo = min(F.bounds()[0], F2.bounds()[0])
    hi = max(F.bounds()[1], F2.bounds()[1]) + 1
    powers = [N.power(k) for k in range(N.index)]
    factorials = [1]
    for k in range(1, N.index):
        factorials.append(factorials[-1] * k)
    g: tuple = ()
    for p in range(lo, hi + 1):
        if F[p].dim != F2[p].dim:
            return None
        eqs = F2[p].equations()
        for f in F[p].vectors():
            terms = [eqs.apply(powers[k].apply(f)) for k in range(N.index)]
            for row in range(eqs.nrows):
                coeffs = poly.trim([terms[k][row] / factorials[k] for k in range(N.index)])
                g = poly.gcd(g, coeffs) if g else poly.monic(coeffs)
    if not g:
        return ZERO
    d = poly.degree(g)
    if d == 0:
        return None
    # g = (z - z0)^d; read z0 off the subleading coefficient
    z0 = -g[d - 1] / d
    if poly.evaluate(g, z0):
        return None
    if F.transform(N.matrix.exp_nilpotent(z0)) != F2:
        return None
    return z0
