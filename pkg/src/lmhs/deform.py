"""Linear model of first-order smoothings of a normal crossing variety.

A global first-order deformation lives in E = Q^ext_dim; ``localize`` sends
it to its values ξ_{D_a} on the components D_a of the singular locus
(Q^|A|, i.e. d-semi-stability is assumed), and ``delta`` is the obstruction
map out of Q^|A|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .errors import PreconditionError
from .qlinalg import GaussianRational, Matrix, Subspace

__all__ = [
    "DeformError",
    "DeformationData",
    "SmoothingStratum",
    "SmoothingCone",
    "P2Classification",
    "smoothable_first_order",
    "strata_classification",
    "independent_smoothing",
    "smoothing_cone",
    "classify_p2_line",
    "MAX_COMPONENTS",
]

MAX_COMPONENTS = 20


class DeformError(PreconditionError):
    pass


class DeformationData:
    def __init__(
        self,
        ext_dim: int,
        components: Sequence[str],
        localize: Matrix,
        delta: Matrix | None = None,
        d_semi_stable: bool = True,
    ):
        components = [str(c) for c in components]
        if len(set(components)) != len(components):
            raise DeformError("component labels must be distinct")
        if localize.shape != (len(components), ext_dim):
            raise DeformError(f"localize must be {len(components)} x {ext_dim}, got {localize.shape}")
        if not localize.is_real():
            raise DeformError("localize must be rational")
        if delta is not None and (delta.ncols != len(components) or not delta.is_real()):
            raise DeformError("delta must be a rational matrix out of Q^|A|")
        self.ext_dim = ext_dim
        self.components = components
        self.localize = localize
        self.delta = delta
        self.d_semi_stable = d_semi_stable

    @property
    def size(self) -> int:
        return len(self.components)

    def image(self) -> Subspace:
        return Subspace.span(self.size, self.localize.columns())

    def delta_kernel(self) -> Subspace | None:
        if self.delta is None:
            return None
        return Subspace.span(self.size, self.delta.nullspace().columns())

    def exactness(self) -> dict:
        """How image(localize) sits against ker(delta)."""
        ker = self.delta_kernel()
        if ker is None:
            return {"delta_present": False}
        img = self.image()
        return {"delta_present": True, "image_in_kernel": img <= ker, "exact": img == ker}


@dataclass(frozen=True)
class SmoothingStratum:
    B: tuple[str, ...]
    tangent: Subspace
    codim: int

    @property
    def dim(self) -> int:
        return self.tangent.dim


def smoothable_first_order(d: DeformationData) -> bool:
    """Every coordinate functional ξ ↦ ξ_{D_a} is nonzero on E."""
    return all(any(x for x in d.localize.row(a)) for a in range(d.size))


def _tangent(d: DeformationData, indices: Sequence[int]) -> Subspace:
    if not indices:
        return Subspace.full(d.ext_dim)
    rows = d.localize.submatrix(list(indices), range(d.ext_dim))
    return Subspace.span(d.ext_dim, rows.nullspace().columns())


def strata_classification(d: DeformationData) -> list[SmoothingStratum]:
    """T^B = {ξ : ξ_{D_b} = 0 for b in B} for every B ⊆ A, B in lexicographic order."""
    if d.size > MAX_COMPONENTS:
        raise DeformError(f"at most {MAX_COMPONENTS} components are enumerated")
    subsets = sorted(idx for size in range(d.size + 1) for idx in combinations(range(d.size), size))
    out = []
    for idx in subsets:
        T = _tangent(d, idx)
        out.append(SmoothingStratum(tuple(d.components[i] for i in idx), T, d.ext_dim - T.dim))
    return out


def _unit(n: int, a: int) -> tuple:
    return tuple(1 if i == a else 0 for i in range(n))


def independent_smoothing(d: DeformationData) -> bool:
    """Each D_a can be smoothed alone: the image contains every coordinate line."""
    img = d.image()
    return all(img.contains(_unit(d.size, a)) for a in range(d.size))


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class SmoothingCone:
    """σ = {v ∈ image(localize) : v_a > 0}; ``generators`` span its closure."""

    kind: str  # "simplicial", "rays", "membership" or "empty"
    generators: tuple[tuple[int, ...], ...]
    image: Subspace

    def contains(self, v: Sequence) -> bool:
        vals = [GaussianRational.coerce(x) for x in v]
        if len(vals) != self.image.ambient_dim or not all(x.is_real() for x in vals):
            return False
        return self.image.contains(vals) and all(x.re > 0 for x in vals)


def _extremal_rays(img: Subspace) -> list[tuple[int, ...]]:
    basis = img.basis  # |A| x dim
    dim = basis.ncols
    constraints = [basis.row(a) for a in range(basis.nrows)]
    rays = set()
    for subset in combinations(range(len(constraints)), dim - 1):
        if subset:
            tight = Matrix([constraints[a] for a in subset], ncols=dim)
            ker = tight.nullspace()
        else:
            ker = Matrix.identity(dim)
        if ker.ncols != 1:
            continue
        x = ker.column(0)
        v = basis.apply(x)
        vals = [c.re for c in v]
        for sign in (1, -1):
            cand = [sign * c for c in vals]
            if all(c >= 0 for c in cand) and any(cand):
                rays.add(_primitive(cand))
    return sorted(rays)


def smoothing_cone(d: DeformationData) -> SmoothingCone:
    if not smoothable_first_order(d):
        raise DeformError("X is not smoothable to first order")
    img = d.image()
    if independent_smoothing(d):
        return SmoothingCone("simplicial", tuple(_unit(d.size, a) for a in range(d.size)), img)
    if img.dim <= 3:
        rays = _extremal_rays(img)
        total = [sum(r[a] for r in rays) for a in range(d.size)]
        if not rays or any(x <= 0 for x in total):
            return SmoothingCone("empty", tuple(rays), img)
        return SmoothingCone("rays", tuple(rays), img)
    return SmoothingCone("membership", (), img)


@dataclass(frozen=True)
class P2Classification:
    case: str
    independent: tuple[str, ...]
    locked: tuple[str, ...]
    excluded_by_smoothability: bool


def classify_p2_line(d: DeformationData) -> P2Classification:
    """Position of the line P(plane) against the coordinate triangle in P².

    The plane is ker(delta) when delta is given, otherwise image(localize).
    (i): no coordinate axis in the plane; (ii): exactly one; (iii): the plane
    is a coordinate plane, which smoothability rules out.
    """
    if d.size != 3:
        raise DeformError("the P^2 picture needs exactly three components")
    plane = d.delta_kernel() if d.delta is not None else d.image()
    if plane.dim != 2:
        raise DeformError(f"expected a 2-plane, got dimension {plane.dim}")
    axes = [a for a in range(3) if plane.contains(_unit(3, a))]
    case = {0: "i", 1: "ii", 2: "iii"}[len(axes)]
    return P2Classification(
        case=case,
        independent=tuple(d.components[a] for a in axes),
        locked=tuple(d.components[a] for a in range(3) if a not in axes),
        excluded_by_smoothability=case == "iii",
    )
