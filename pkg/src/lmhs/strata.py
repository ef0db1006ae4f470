"""Stratum cohomology of a normal crossing variety and the N-string complexes.

Levels k ≥ 1 index the strata X^[k] (dim n + 1 - k).  Rest maps
H^q(X^[k]) → H^q(X^[k+1]); Gysin maps H^q(X^[k]) → H^{q+2}(X^[k-1]) and
consumes one Tate twist.  Twists are integer tags only.

The complex whose cohomology gives the N-strings of H^m has terms
H^q(X^[t])(-s) with q + t - 1 = m (degree) and q + 2s = w (weight), and
differential Rest + Gy.  A twist s is admitted on level t when
0 ≤ s ≤ t - 1 - TWIST_ADMISSION_GAP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import PreconditionError
from .hodge import Verdict
from .qlinalg import GaussianRational, Matrix, Subspace, join, meet, preimage, quotient_matrix

__all__ = [
    "TWIST_ADMISSION_GAP",
    "TateTwist",
    "CohomologySpace",
    "StratumSpaces",
    "StrataComplexData",
    "StrataError",
    "Theorem7Piece",
    "Theorem7Report",
    "validate_strata",
    "e1_page",
    "e1_audit",
    "theorem7_pieces",
    "surface_double_curve",
    "double_curve_composite",
    "nodal_curve_strata",
]

# Admitted twists on level t are 0 ≤ s ≤ t - 1 - gap.  Gap 0 reproduces the
# dual-graph oracle on nodal curves; gap 1 loses the top weight.
TWIST_ADMISSION_GAP = 0


class StrataError(PreconditionError):
    pass


@dataclass(frozen=True, order=True)
class TateTwist:
    """The twist (-j): bidegree shift (j, j), weight shift 2j."""

    j: int

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("Tate twists (-j) need j ≥ 0")

    def shift_bidegree(self, pq: tuple[int, int]) -> tuple[int, int]:
        return (pq[0] + self.j, pq[1] + self.j)

    def shift_weight(self, w: int) -> int:
        return w + 2 * self.j


@dataclass(frozen=True)
class CohomologySpace:
    """A dimensioned space H^q with optional Hodge numbers h^{r,s}, r + s = q."""

    dim: int
    hodge: Mapping[tuple[int, int], int] | None = None

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("negative dimension")
        if self.hodge is not None:
            clean = {tuple(k): int(v) for k, v in self.hodge.items() if v}
            if any(v < 0 for v in clean.values()):
                raise ValueError("negative Hodge number")
            if sum(clean.values()) != self.dim:
                raise ValueError("Hodge numbers do not add up to the dimension")
            object.__setattr__(self, "hodge", dict(sorted(clean.items())))


@dataclass(frozen=True)
class StratumSpaces:
    n: int
    levels: Mapping[int, Mapping[int, CohomologySpace]]

    def __post_init__(self):
        for k, degrees in self.levels.items():
            if k < 1:
                raise StrataError("levels start at k = 1")
            top = 2 * (self.n + 1 - k)
            for q, space in degrees.items():
                if space.dim and (q < 0 or q > top):
                    raise StrataError(f"H^{q}(X^[{k}]) must vanish: the stratum has dimension {self.n + 1 - k}")
                if space.hodge:
                    for (r, s) in space.hodge:
                        if r + s != q:
                            raise StrataError(f"Hodge type ({r},{s}) does not sit in degree {q}")

    def dim(self, k: int, q: int) -> int:
        space = self.levels.get(k, {}).get(q)
        return space.dim if space else 0

    def hodge(self, k: int, q: int) -> Mapping[tuple[int, int], int] | None:
        space = self.levels.get(k, {}).get(q)
        if space is None or space.dim == 0:
            return {}
        return space.hodge

    def max_level(self) -> int:
        return max((k for k, d in self.levels.items() if any(s.dim for s in d.values())), default=0)


class StrataComplexData:
    """Stratum spaces with Rest and Gysin matrices; missing maps are zero."""

    def __init__(
        self,
        spaces: StratumSpaces,
        rest: Mapping[tuple[int, int], Matrix] | None = None,
        gysin: Mapping[tuple[int, int], Matrix] | None = None,
    ):
        self.spaces = spaces
        self.rest = {}
        self.gysin = {}
        for (k, q), m in (rest or {}).items():
            want = (spaces.dim(k + 1, q), spaces.dim(k, q))
            if m.shape != want:
                raise StrataError(f"Rest on H^{q}(X^[{k}]) has shape {m.shape}, expected {want}")
            self.rest[(k, q)] = m
        for (k, q), m in (gysin or {}).items():
            if k < 2:
                raise StrataError("Gysin maps start on level 2")
            want = (spaces.dim(k - 1, q + 2), spaces.dim(k, q))
            if m.shape != want:
                raise StrataError(f"Gy on H^{q}(X^[{k}]) has shape {m.shape}, expected {want}")
            self.gysin[(k, q)] = m

    @property
    def n(self) -> int:
        return self.spaces.n

    def dim(self, k: int, q: int) -> int:
        return self.spaces.dim(k, q)

    def rest_map(self, k: int, q: int) -> Matrix:
        m = self.rest.get((k, q))
        return m if m is not None else Matrix.zeros(self.dim(k + 1, q), self.dim(k, q))

    def gysin_map(self, k: int, q: int) -> Matrix:
        m = self.gysin.get((k, q))
        return m if m is not None else Matrix.zeros(self.dim(k - 1, q + 2), self.dim(k, q))

    def degrees(self) -> list[int]:
        return sorted({q for d in self.spaces.levels.values() for q in d})

    def to_json(self) -> dict:
        levels = []
        for k in sorted(self.spaces.levels):
            H = {}
            for q in sorted(self.spaces.levels[k]):
                sp = self.spaces.levels[k][q]
                entry = {"dim": sp.dim}
                if sp.hodge is not None:
                    entry["hodge"] = [[r, s, d] for (r, s), d in sp.hodge.items()]
                H[str(q)] = entry
            levels.append({"k": k, "H": H})
        return {
            "n": self.n,
            "levels": levels,
            "rest": [{"k": k, "q": q, "matrix": m.to_json()} for (k, q), m in sorted(self.rest.items())],
            "gysin": [{"k": k, "q": q, "matrix": m.to_json()} for (k, q), m in sorted(self.gysin.items())],
        }


def validate_strata(data: StrataComplexData) -> Verdict:
    """Rest² = 0, Gy² = 0 and Gy∘Rest + Rest∘Gy = 0 on every square.

    Squares live on H^q(X^[t]) for t ≥ 2, where both composites
    H^q(X^[t]) → H^{q+2}(X^[t]) are defined.
    """
    top = data.spaces.max_level()
    degrees = data.degrees()
    for k in range(1, top + 1):
        for q in degrees:
            r2 = data.rest_map(k + 1, q) @ data.rest_map(k, q)
            if not r2.is_zero():
                return Verdict.fail("rest squared", square=(k, q), residual=r2.to_json())
            if k >= 3:
                g2 = data.gysin_map(k - 1, q + 2) @ data.gysin_map(k, q)
                if not g2.is_zero():
                    return Verdict.fail("gysin squared", square=(k, q), residual=g2.to_json())
    for t in range(2, top + 1):
        for q in degrees:
            if data.dim(t, q) == 0:
                continue
            total = data.gysin_map(t + 1, q) @ data.rest_map(t, q) + data.rest_map(t - 1, q + 2) @ data.gysin_map(t, q)
            if not total.is_zero():
                return Verdict.fail("anticommutativity", square=(t, q), residual=total.to_json())
    return Verdict.ok()


# ---- E1 page -----------------------------------------------------------


@dataclass(frozen=True)
class E1Contribution:
    q: int
    stratum: int
    bidegree: tuple[int, int]
    dim: int


def e1_page(data: StrataComplexData | StratumSpaces, i: int) -> dict[tuple[int, int], list[E1Contribution]]:
    """E_1^{a,b} = ⊕_{max(0,b) ≤ q ≤ i} H^{i-2q+b, a+b}(X^[2q+1-b]), with provenance."""
    spaces = data.spaces if isinstance(data, StrataComplexData) else data
    cells: dict[tuple[int, int], list[E1Contribution]] = {}
    for t in sorted(spaces.levels):
        r = i - t + 1  # independent of q once t is fixed
        if r < 0:
            continue
        for q in range(0, i + 1):
            b = 2 * q + 1 - t
            if q < max(0, b):
                continue
            for deg in sorted(spaces.levels[t]):
                hodge = spaces.hodge(t, deg)
                if hodge is None:
                    raise StrataError(f"H^{deg}(X^[{t}]) has no Hodge grading")
                for (rr, s), d in hodge.items():
                    if rr != r or not d:
                        continue
                    a = s - b
                    cells.setdefault((a, b), []).append(E1Contribution(q, t, (rr, s), d))
    return dict(sorted(cells.items()))


def e1_dims(page: Mapping[tuple[int, int], list[E1Contribution]]) -> dict[tuple[int, int], int]:
    return {ab: sum(c.dim for c in contribs) for ab, contribs in page.items()}


@dataclass(frozen=True)
class E1AuditEntry:
    stratum: int
    r: int
    i_values: tuple[int, ...]
    b_values: tuple[int, ...]

    @property
    def appears_once(self) -> bool:
        return len(self.i_values) == 1

    @property
    def parity_ok(self) -> bool:
        return all((b - (1 - self.stratum)) % 2 == 0 for b in self.b_values)

    @property
    def range_ok(self) -> bool:
        return all(1 - self.stratum <= b <= self.stratum - 1 for b in self.b_values)

    @property
    def b_count_ok(self) -> bool:
        return len(self.b_values) == self.stratum

    @property
    def passed(self) -> bool:
        return self.appears_once and self.parity_ok and self.range_ok and self.b_count_ok


def e1_audit(data: StrataComplexData | StratumSpaces) -> list[E1AuditEntry]:
    """Where each H^{r,•}(X^[t]) lands across all i."""
    spaces = data.spaces if isinstance(data, StrataComplexData) else data
    seen: dict[tuple[int, int], tuple[set, set]] = {}
    max_i = spaces.n + max(spaces.levels, default=1)
    for i in range(0, max_i + 1):
        for (a, b), contribs in e1_page(spaces, i).items():
            for c in contribs:
                key = (c.stratum, c.bidegree[0])
                iv, bv = seen.setdefault(key, (set(), set()))
                iv.add(i)
                bv.add(b)
    return [E1AuditEntry(t, r, tuple(sorted(iv)), tuple(sorted(bv))) for (t, r), (iv, bv) in sorted(seen.items())]


# ---- graded pieces from strata---------------------------------------------


def _admitted(data: StrataComplexData, t: int, q: int, s: int) -> bool:
    return t >= 1 and q >= 0 and 0 <= s <= t - 1 - TWIST_ADMISSION_GAP and data.dim(t, q) > 0


@dataclass(frozen=True)
class Theorem7Piece:
    i: int
    j: int
    stratum: int
    degree: int
    twist: TateTwist
    weight: int
    dim: int
    basis: tuple = ()


@dataclass
class Theorem7Report:
    m: int
    pieces: dict
    n_map_ranks: dict
    total_complex_dims: dict
    metadata: dict = field(default_factory=dict)

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.pieces.values():
            out[p.weight] = out.get(p.weight, 0) + p.dim
        return dict(sorted((w, d) for w, d in out.items() if d))

    def total_dim(self) -> int:
        return sum(p.dim for p in self.pieces.values())

    @property
    def secondary_check_passed(self) -> bool:
        full = {w: d for w, d in self.total_complex_dims.items() if d}
        return full == self.graded_dims()

    def strings(self) -> dict[int, tuple[int, ...]]:
        """Per i, dims of H^{m-i}(-j) for j = 0, 1, ..."""
        out: dict[int, list[int]] = {}
        for (i, j), p in sorted(self.pieces.items()):
            out.setdefault(i, []).append(p.dim)
        return {i: tuple(d) for i, d in out.items()}

    def signature(self) -> tuple:
        """Sorted (base weight, length, dim) triples matching NStringDiagram.signature."""
        sig = []
        for i, dims in self.strings().items():
            if not any(dims):
                continue
            if len(set(dims)) != 1:
                raise StrataError(f"string i={i} has non-constant dims {dims}")
            sig.append((self.m - i, len(dims) - 1, dims[0]))
        return tuple(sorted(sig))


class _Spot:
    """Gysin-direction cycles Z and boundaries B at one admitted term."""

    def __init__(self, data: StrataComplexData, t: int, q: int, s: int):
        n = data.dim(t, q)
        self.t, self.q, self.s = t, q, s
        self.ambient = n
        if _admitted(data, t - 1, q + 2, s - 1):
            self.Z = preimage(data.gysin_map(t, q), Subspace.zero(data.dim(t - 1, q + 2)))
        else:
            self.Z = Subspace.full(n)
        if _admitted(data, t + 1, q - 2, s + 1):
            self.B = Subspace.full(data.dim(t + 1, q - 2)).image(data.gysin_map(t + 1, q - 2))
        else:
            self.B = Subspace.zero(n)


def theorem7_pieces(data: StrataComplexData, m: int) -> Theorem7Report:
    """Gysin cohomology first, then Rest cohomology, at H^{m-i}(X^[i+1])(-j)."""
    verdict = validate_strata(data)
    if not verdict:
        raise StrataError(f"refusing to compute: {verdict.clause} fails at {verdict.witness.get('square')}")
    pieces = {}
    numerators = {}
    for i in range(0, m + 1):
        t, q = i + 1, m - i
        if data.dim(t, q) == 0:
            continue
        for j in range(0, t - TWIST_ADMISSION_GAP):
            spot = _Spot(data, t, q, j)
            # Rest out of this spot lands on (t+1, q, j), Rest in comes from (t-1, q, j)
            if _admitted(data, t + 1, q, j):
                nxt = _Spot(data, t + 1, q, j)
                ker = meet(spot.Z, preimage(data.rest_map(t, q), nxt.B))
            else:
                ker = spot.Z
            if _admitted(data, t - 1, q, j):
                prev = _Spot(data, t - 1, q, j)
                img = join(prev.Z.image(data.rest_map(t - 1, q)), spot.B)
            else:
                img = spot.B
            if not img <= ker:
                raise StrataError(f"induced Rest complex fails d² = 0 at i={i}, j={j}")
            basis = tuple(img.complement_in(ker))
            pieces[(i, j)] = Theorem7Piece(i, j, t, q, TateTwist(j), q + 2 * j, len(basis), basis)
            numerators[(i, j)] = (ker, img)
    ranks = {}
    for (i, j), piece in pieces.items():
        if j == 0 or (i, j - 1) not in numerators:
            continue
        ker_prev, img_prev = numerators[(i, j - 1)]
        if not piece.basis:
            ranks[(i, j)] = 0
            continue
        if not all(ker_prev.contains(v) for v in piece.basis):
            ranks[(i, j)] = None
            continue
        if ker_prev.dim == img_prev.dim:
            ranks[(i, j)] = 0
            continue
        coords = quotient_matrix(img_prev, ker_prev)
        ranks[(i, j)] = Matrix.from_columns([coords.apply(v) for v in piece.basis], nrows=coords.nrows).rank()
    return Theorem7Report(
        m=m,
        pieces=pieces,
        n_map_ranks=ranks,
        total_complex_dims=_total_complex_dims(data, m),
        metadata={
            "twist_admission_gap": TWIST_ADMISSION_GAP,
            "admitted_twists": f"0 <= s <= t - 1 - {TWIST_ADMISSION_GAP}",
            "order": "Gysin cohomology, then Rest cohomology",
        },
    )


def _total_terms(data: StrataComplexData, degree: int, w: int) -> list[tuple[int, int, int]]:
    terms = []
    for t in sorted(data.spaces.levels):
        q = degree - t + 1
        if q < 0 or (w - q) % 2:
            continue
        s = (w - q) // 2
        if _admitted(data, t, q, s):
            terms.append((t, q, s))
    return terms


def _total_differential(data: StrataComplexData, src: list, dst: list) -> Matrix:
    offsets, total = {}, 0
    for term in dst:
        offsets[term] = total
        total += data.dim(term[0], term[1])
    blocks = []
    for t, q, s in src:
        width = data.dim(t, q)
        col_block = [[GaussianRational(0)] * width for _ in range(total)]
        targets = [((t + 1, q, s), data.rest_map(t, q)), ((t - 1, q + 2, s - 1), data.gysin_map(t, q) if t >= 2 else None)]
        for target, mat in targets:
            if mat is None or target not in offsets:
                continue
            off = offsets[target]
            for r in range(mat.nrows):
                for c in range(width):
                    col_block[off + r][c] = col_block[off + r][c] + mat[r, c]
        blocks.append(Matrix(col_block, ncols=width) if total else Matrix.zeros(0, width))
    if not blocks:
        return Matrix.zeros(total, 0)
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b)
    return out


def _total_complex_dims(data: StrataComplexData, m: int) -> dict[int, int]:
    out = {}
    for w in range(0, 2 * m + 1):
        here = _total_terms(data, m, w)
        if not here:
            continue
        dim_here = sum(data.dim(t, q) for t, q, _ in here)
        d_out = _total_differential(data, here, _total_terms(data, m + 1, w))
        d_in = _total_differential(data, _total_terms(data, m - 1, w), here)
        out[w] = dim_here - d_out.rank() - d_in.rank()
    return out


# ---- fixtures ----------------------------------------------------------


def surface_double_curve(c1_sq: int, c2_sq: int) -> StrataComplexData:
    """Irreducible surface whose double curve has preimages C1, C2 in X^[1].

    Level-2 spaces are the minus parts α ⊕ -α.  Gy(1_-) = η_C1 - η_C2 and
    Rest(η_Ci) = Σ_j (C_i·C_j)[C_j] projected to the minus part.
    """
    c1, c2 = Fraction(c1_sq), Fraction(c2_sq)
    spaces = StratumSpaces(
        2,
        {
            1: {
                0: CohomologySpace(1, {(0, 0): 1}),
                2: CohomologySpace(2, {(1, 1): 2}),
                4: CohomologySpace(1, {(2, 2): 1}),
            },
            2: {
                0: CohomologySpace(1, {(0, 0): 1}),
                2: CohomologySpace(1, {(1, 1): 1}),
            },
        },
    )
    rest = {
        (1, 0): Matrix([[0]]),
        (1, 2): Matrix([[c1 / 2, -c2 / 2]]),
    }
    gysin = {
        (2, 0): Matrix([[1], [-1]]),
        (2, 2): Matrix([[0]]),
    }
    return StrataComplexData(spaces, rest, gysin)


def double_curve_composite(data: StrataComplexData) -> GaussianRational:
    """Coefficient of [C1] - [C2] in Rest(Gy(1_-))."""
    return (data.rest_map(1, 2) @ data.gysin_map(2, 0))[0, 0]


def _default_node_ends(components: int, delta: int) -> list[tuple[int, int]]:
    if components == 1:
        return [(0, 0)] * delta
    if components == 2:
        return [(0, 1)] * delta
    chain = [(a, a + 1) for a in range(components - 1)]
    return (chain + [(0, 0)] * delta)[:delta]


def _connected(components: int, ends: Sequence[tuple[int, int]]) -> bool:
    parent = list(range(components))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in ends:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(components)}) <= 1


def nodal_curve_strata(
    gtilde: int,
    delta: int,
    components: int | Sequence[int] = 1,
    node_ends: Sequence[tuple[int, int]] | None = None,
) -> StrataComplexData:
    """Nodal curve whose normalization has total genus gtilde, with delta nodes.

    ``components`` is a count (all genus on the first component) or a list
    of component genera.  Rest sends f to f(branch a) - f(branch b) at each
    node; Gysin is its transpose.
    """
    if gtilde < 0 or delta < 0:
        raise StrataError("genus and node count must be non-negative")
    if isinstance(components, int):
        if components < 1:
            raise StrataError("at least one component is required")
        genera = [gtilde] + [0] * (components - 1)
    else:
        genera = [int(g) for g in components]
        if not genera or sum(genera) != gtilde or any(g < 0 for g in genera):
            raise StrataError("component genera must be non-negative and sum to gtilde")
    c = len(genera)
    ends = list(node_ends) if node_ends is not None else _default_node_ends(c, delta)
    if len(ends) != delta:
        raise StrataError("one pair of branch components per node is required")
    if any(not (0 <= a < c and 0 <= b < c) for a, b in ends):
        raise StrataError("node branch on a nonexistent component")
    if not _connected(c, ends):
        raise StrataError("nodes leave the curve disconnected")
    levels = {
        1: {
            0: CohomologySpace(c, {(0, 0): c}),
            1: CohomologySpace(2 * gtilde, {(1, 0): gtilde, (0, 1): gtilde}),
            2: CohomologySpace(c, {(1, 1): c}),
        }
    }
    rest, gysin = {}, {}
    if delta:
        levels[2] = {0: CohomologySpace(delta, {(0, 0): delta})}
        rows = []
        for a, b in ends:
            row = [0] * c
            row[a] += 1
            row[b] -= 1
            rows.append(row)
        R = Matrix(rows)
        rest[(1, 0)] = R
        gysin[(2, 0)] = R.T
    return StrataComplexData(StratumSpaces(1, levels), rest, gysin)
