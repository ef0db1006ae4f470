"""Mixed Hodge structures on coordinate spaces over Q(i).

The real structure is always the coordinate one: complex conjugation acts
entrywise, and weight filtrations must be spanned by rational vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .qlinalg import (
    I,
    ONE,
    ZERO,
    DimensionError,
    GaussianRational,
    Matrix,
    Subspace,
    is_positive_definite_hermitian,
    join,
    join_all,
    meet,
)

__all__ = [
    "Verdict",
    "WeightFiltration",
    "HodgeFiltration",
    "PolarizationForm",
    "MixedHodgeStructure",
    "DeligneBigrading",
    "LieAlgebraMHS",
    "NotMixedHodgeError",
    "deligne_bigrading",
    "is_r_split",
    "r_split",
    "is_polarized_pure",
    "polarization_report",
    "lie_algebra_mhs",
    "grading_operator",
    "induced_filtration_on_graded",
    "i_power",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: ``clause`` names the first failed condition."""

    passed: bool
    clause: str | None = None
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def fail(cls, clause: str, **witness) -> "Verdict":
        return cls(False, clause, dict(witness))


class NotMixedHodgeError(ValueError):
    """Raised when F does not induce a pure structure on some Gr_k^W."""

    def __init__(self, k: int, p: int, reason: str):
        super().__init__(f"Gr_{k} is not pure of weight {k}: {reason} (k={k}, p={p})")
        self.k = k
        self.p = p
        self.reason = reason


def i_power(k: int) -> GaussianRational:
    return [ONE, I, -ONE, -I][k % 4]


class WeightFiltration:
    """Increasing filtration W_k; unrecorded steps repeat the one below."""

    def __init__(self, center: int, steps: Mapping[int, Subspace]):
        if not steps:
            raise ValueError("a weight filtration needs at least one step")
        dims = {s.ambient_dim for s in steps.values()}
        if len(dims) != 1:
            raise DimensionError("weight filtration steps live in different ambients")
        self.center = int(center)
        self.ambient_dim = dims.pop()
        self._steps = dict(sorted((int(k), v) for k, v in steps.items()))
        keys = list(self._steps)
        for a, b in zip(keys, keys[1:]):
            if not self._steps[a] <= self._steps[b]:
                raise ValueError(f"W_{a} is not contained in W_{b}")
        if not self._steps[keys[-1]].is_full():
            raise ValueError("top step of the weight filtration must be the whole space")

    @property
    def steps(self) -> dict[int, Subspace]:
        return dict(self._steps)

    def __getitem__(self, k: int) -> Subspace:
        best = None
        for key, sub in self._steps.items():
            if key <= k:
                best = sub
            else:
                break
        return best if best is not None else Subspace.zero(self.ambient_dim)

    def weights(self) -> list[int]:
        """Weights k with Gr_k nonzero, ascending."""
        lo, hi = self.bounds()
        return [k for k in range(lo, hi + 1) if self[k].dim > self[k - 1].dim]

    def bounds(self) -> tuple[int, int]:
        """Smallest k with W_k != 0 and smallest k with W_k = V."""
        keys = list(self._steps)
        lo = next(k for k in keys if not self._steps[k].is_zero()) if any(
            not s.is_zero() for s in self._steps.values()
        ) else keys[-1]
        hi = next(k for k in keys if self._steps[k].is_full())
        return lo, hi

    def is_real(self) -> bool:
        return all(s.conj() == s for s in self._steps.values())

    def normalized(self) -> dict[int, Subspace]:
        lo, hi = self.bounds()
        return {k: self[k] for k in range(lo - 1, hi + 1)}

    def __eq__(self, other):
        if not isinstance(other, WeightFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        lo = min(self.bounds()[0], other.bounds()[0]) - 1
        hi = max(self.bounds()[1], other.bounds()[1])
        return all(self[k] == other[k] for k in range(lo, hi + 1))

    def __repr__(self):
        return f"WeightFiltration(center={self.center}, dims={ {k: s.dim for k, s in self.normalized().items()} })"


class HodgeFiltration:
    """Decreasing filtration F^p.

    Below the smallest recorded index the step is the whole space, above
    the largest it is zero, and gaps repeat the next step up.
    """

    def __init__(self, steps: Mapping[int, Subspace], ambient_dim: int | None = None):
        dims = {s.ambient_dim for s in steps.values()}
        if ambient_dim is not None:
            dims.add(ambient_dim)
        if len(dims) != 1:
            raise DimensionError("Hodge filtration steps live in different ambients")
        self.ambient_dim = dims.pop()
        self._steps = dict(sorted((int(p), v) for p, v in steps.items()))
        keys = list(self._steps)
        for a, b in zip(keys, keys[1:]):
            if not self._steps[b] <= self._steps[a]:
                raise ValueError(f"F^{b} is not contained in F^{a}")

    @property
    def steps(self) -> dict[int, Subspace]:
        return dict(self._steps)

    def __getitem__(self, p: int) -> Subspace:
        if not self._steps or p < min(self._steps):
            return Subspace.full(self.ambient_dim)
        for key, sub in self._steps.items():
            if key >= p:
                return sub
        return Subspace.zero(self.ambient_dim)

    def bounds(self) -> tuple[int, int]:
        """Largest p with F^p = V and largest p with F^p != 0."""
        if not self._steps:
            return (0, 0)
        keys = list(self._steps)
        full = [k for k in keys if self._steps[k].is_full()]
        lo = max(full) if full else keys[0] - 1
        nonzero = [k for k in keys if not self._steps[k].is_zero()]
        hi = max(nonzero) if nonzero else lo
        return lo, max(lo, hi)

    def normalized(self) -> dict[int, Subspace]:
        lo, hi = self.bounds()
        return {p: self[p] for p in range(lo, hi + 2)}

    def conj(self) -> "HodgeFiltration":
        return HodgeFiltration({p: s.conj() for p, s in self._steps.items()}, self.ambient_dim)

    def transform(self, g: Matrix) -> "HodgeFiltration":
        """Image filtration g·F for an invertible g."""
        return HodgeFiltration({p: s.image(g) for p, s in self._steps.items()}, self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, HodgeFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        lo = min(self.bounds()[0], other.bounds()[0])
        hi = max(self.bounds()[1], other.bounds()[1]) + 1
        return all(self[p] == other[p] for p in range(lo, hi + 1))

    def __hash__(self):
        return hash(tuple(self.normalized().items()))

    def __repr__(self):
        return f"HodgeFiltration(dims={ {p: s.dim for p, s in self.normalized().items()} })"


class PolarizationForm:
    """Bilinear form ``Q(u, v) = u^T M v`` with ``Q(u,v) = (-1)^m Q(v,u)``."""

    def __init__(self, matrix: Matrix, weight_parity: int):
        if not matrix.is_square():
            raise DimensionError("polarization matrix must be square")
        sign = -1 if weight_parity % 2 else 1
        if matrix.T != matrix.scale(sign):
            kind = "antisymmetric" if sign < 0 else "symmetric"
            raise ValueError(f"polarization for weight parity {weight_parity} must be {kind}")
        if not matrix.is_real():
            raise ValueError("polarization must be defined over Q")
        self.matrix = matrix
        self.weight_parity = weight_parity

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    def __call__(self, u, v) -> GaussianRational:
        return sum((a * b for a, b in zip(u, self.matrix.apply(v))), ZERO)

    def gram(self, left: list, right: list) -> Matrix:
        mv = [self.matrix.apply(v) for v in right]
        return Matrix([[sum((a * b for a, b in zip(u, w)), ZERO) for w in mv] for u in left]) if left else Matrix.zeros(0, len(right))

    def is_infinitesimal_isometry(self, a: Matrix) -> bool:
        """``Q(Au, v) + Q(u, Av) = 0`` for all u, v."""
        return (a.T @ self.matrix + self.matrix @ a).is_zero()


class MixedHodgeStructure:
    """Ambient ``Q(i)^n`` with weight filtration W, Hodge filtration F and optional Q."""

    def __init__(
        self,
        W: WeightFiltration,
        F: HodgeFiltration,
        Q: PolarizationForm | None = None,
    ):
        if W.ambient_dim != F.ambient_dim:
            raise DimensionError("W and F live in different ambients")
        if Q is not None and Q.dim != W.ambient_dim:
            raise DimensionError("polarization has the wrong size")
        if not W.is_real():
            raise ValueError("weight filtration must be defined over Q")
        self.W = W
        self.F = F
        self.Q = Q
        self.ambient_dim = W.ambient_dim

    @property
    def center(self) -> int:
        return self.W.center

    def conj_vector(self, v):
        return tuple(GaussianRational.coerce(x).conjugate() for x in v)

    def hodge_range(self) -> tuple[int, int]:
        return self.F.bounds()

    def with_filtration(self, F: HodgeFiltration) -> "MixedHodgeStructure":
        return MixedHodgeStructure(self.W, F, self.Q)

    def __repr__(self):
        return f"MixedHodgeStructure(n={self.ambient_dim}, W={self.W!r}, F={self.F!r})"


class DeligneBigrading:
    """Pieces I^{p,q}; only nonzero pieces are stored."""

    def __init__(self, pieces: Mapping[tuple[int, int], Subspace], ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.pieces = {pq: s for pq, s in sorted(pieces.items()) if not s.is_zero()}

    def __getitem__(self, pq: tuple[int, int]) -> Subspace:
        return self.pieces.get(pq, Subspace.zero(self.ambient_dim))

    def dims(self) -> dict[tuple[int, int], int]:
        return {pq: s.dim for pq, s in self.pieces.items()}

    def adapted_basis(self) -> tuple[Matrix, list[tuple[int, int]]]:
        """Basis matrix with columns grouped by piece, and each column's (p, q)."""
        cols, labels = [], []
        for pq, s in self.pieces.items():
            for v in s.vectors():
                cols.append(v)
                labels.append(pq)
        return Matrix.from_columns(cols, nrows=self.ambient_dim), labels

    def sum_where(self, predicate) -> Subspace:
        return join_all((s for pq, s in self.pieces.items() if predicate(*pq)), self.ambient_dim)

    def check(self, mhs: MixedHodgeStructure) -> list[str]:
        """Names of violated bigrading properties (empty when all hold)."""
        problems = []
        n = self.ambient_dim
        total = join_all(self.pieces.values(), n)
        if sum(s.dim for s in self.pieces.values()) != n or not total.is_full():
            problems.append("direct-sum")
        lo, hi = mhs.F.bounds()
        for p in range(lo, hi + 2):
            if self.sum_where(lambda a, b: a >= p) != mhs.F[p]:
                problems.append(f"F-sum p={p}")
        klo, khi = mhs.W.bounds()
        for k in range(klo - 1, khi + 1):
            if self.sum_where(lambda a, b: a + b <= k) != mhs.W[k]:
                problems.append(f"W-sum k={k}")
        for (p, q), s in self.pieces.items():
            lower = mhs.W[p + q - 2]
            if join(s, lower) != join(self[(q, p)].conj(), lower):
                problems.append(f"conjugation ({p},{q})")
        return problems


def _purity_witness(mhs: MixedHodgeStructure) -> tuple[int, int, str] | None:
    W, F = mhs.W, mhs.F
    lo, hi = F.bounds()
    for k in mhs.W.weights():
        wk, wk1 = W[k], W[k - 1]
        for p in range(lo, hi + 2):
            a = join(meet(F[p], wk), wk1)
            b = join(meet(F[k - p + 1].conj(), wk), wk1)
            if join(a, b) != wk:
                return k, p, "F^p and conj F^(k-p+1) do not span"
            if meet(a, b) != wk1:
                return k, p, "F^p and conj F^(k-p+1) intersect"
    return None


def deligne_bigrading(mhs: MixedHodgeStructure) -> DeligneBigrading:
    """Canonical splitting of (W, F), validated against its defining properties.

    Uses the closed formula
    ``I^{p,q} = F^p ∩ W_{p+q} ∩ (conj F^q ∩ W_{p+q} + Σ_{j≥1} conj F^{q-j} ∩ W_{p+q-j-1})``.
    """
    W, F = mhs.W, mhs.F
    n = mhs.ambient_dim
    lo, hi = F.bounds()
    weights = W.weights()
    if not weights:
        return DeligneBigrading({}, n)
    kmin = weights[0]
    cache: dict[tuple[int, int], Subspace] = {}

    def fw(p: int, k: int) -> Subspace:
        key = (p, k)
        if key not in cache:
            cache[key] = meet(F[p], W[k])
        return cache[key]

    pieces = {}
    for k in weights:
        for p in range(lo, hi + 1):
            q = k - p
            a = fw(p, k)
            if a.is_zero():
                continue
            parts = [fw(q, k).conj()]
            j = 1
            while k - j - 1 >= kmin:
                parts.append(fw(q - j, k - j - 1).conj())
                j += 1
            piece = meet(a, join_all(parts, n))
            if not piece.is_zero():
                pieces[(p, q)] = piece
    result = DeligneBigrading(pieces, n)
    problems = result.check(mhs)
    if problems:
        witness = _purity_witness(mhs)
        if witness is not None:
            raise NotMixedHodgeError(*witness)
        raise AssertionError(f"bigrading postconditions failed on a valid MHS: {problems}")
    return result


def is_r_split(mhs: MixedHodgeStructure, bigrading: DeligneBigrading | None = None) -> bool:
    big = bigrading or deligne_bigrading(mhs)
    return all(s.conj() == big[(q, p)] for (p, q), s in big.pieces.items())


def grading_operator(bigrading: DeligneBigrading) -> Matrix:
    """Semisimple Y acting by p+q on I^{p,q}."""
    b, labels = bigrading.adapted_basis()
    d = Matrix.diagonal([p + q for p, q in labels])
    return b @ d @ b.inverse()


def _exp_conjugate(x: Matrix, y: Matrix) -> Matrix:
    return x.exp_nilpotent() @ y @ x.exp_nilpotent(-1)


def r_split(mhs: MixedHodgeStructure) -> MixedHodgeStructure:
    """The canonical R-split MHS with the same W and the same graded pieces.

    Solves ``exp(X) Y exp(-X) = conj(Y)`` for X strictly lowering the
    p+q grading, degree by degree; the result is ``exp(X/2)·F``.
    """
    big = deligne_bigrading(mhs)
    if is_r_split(mhs, big):
        return mhs
    b, labels = big.adapted_basis()
    binv = b.inverse()
    weights = [p + q for p, q in labels]
    n = len(weights)
    d = Matrix.diagonal(weights)
    ybar = binv @ (b @ d @ binv).conj() @ b
    x = Matrix.zeros(n, n)
    spread = max(weights) - min(weights)
    for k in range(1, spread + 1):
        resid = ybar - _exp_conjugate(x, d)
        corr = [
            [resid[i, j] / k if weights[j] - weights[i] == k else ZERO for j in range(n)]
            for i in range(n)
        ]
        x = x + Matrix(corr)
    if _exp_conjugate(x, d) != ybar:
        raise AssertionError("R-splitting solve did not converge")
    x_std = b @ x @ binv
    if x_std.conj() != -x_std:
        raise AssertionError("splitting correction is not purely imaginary")
    g = x_std.exp_nilpotent(GaussianRational("1/2"))
    split = mhs.with_filtration(mhs.F.transform(g))
    if not is_r_split(split):
        raise AssertionError("R-splitting failed its postcondition")
    return split


def induced_filtration_on_graded(mhs: MixedHodgeStructure, k: int, p: int) -> Subspace:
    """Lift of F^p Gr_k^W, i.e. (F^p ∩ W_k) + W_{k-1}."""
    return join(meet(mhs.F[p], mhs.W[k]), mhs.W[k - 1])


def polarization_report(ambient_dim: int, Q: PolarizationForm, F: HodgeFiltration, m: int) -> Verdict:
    """Hodge-Riemann relations for a pure weight-m structure."""
    if Q.dim != ambient_dim or F.ambient_dim != ambient_dim:
        raise DimensionError("form, filtration and ambient dimension disagree")
    for p in range(0, m + 1):
        a, b = F[p], F[m - p + 1]
        if a.is_zero() or b.is_zero():
            continue
        if not Q.gram(a.vectors(), b.vectors()).is_zero():
            return Verdict.fail("first relation", p=p, q=m - p + 1)
    pieces = {}
    for p in range(0, m + 1):
        h = meet(F[p], F[m - p].conj())
        if not h.is_zero():
            pieces[p] = h
    if sum(h.dim for h in pieces.values()) != ambient_dim:
        return Verdict.fail("hodge decomposition", dims={p: h.dim for p, h in pieces.items()})
    for p, h in pieces.items():
        q = m - p
        vecs = h.vectors()
        conj_vecs = [tuple(x.conjugate() for x in v) for v in vecs]
        gram = Q.gram(vecs, conj_vecs).scale(i_power(p - q))
        if not is_positive_definite_hermitian(gram):
            return Verdict.fail("positivity", p=p, q=q)
    return Verdict.ok()


def is_polarized_pure(ambient_dim: int, Q: PolarizationForm, F: HodgeFiltration, m: int) -> bool:
    return polarization_report(ambient_dim, Q, F, m).passed


class LieAlgebraMHS(MixedHodgeStructure):
    """The induced MHS on g = {A : Q(Au, v) + Q(u, Av) = 0}.

    Coordinates on g are the pivot entries of its canonical rational basis,
    so conjugation on coordinates is again entrywise.
    """

    def __init__(self, W, F, basis: list[Matrix], vec_space: Subspace, n: int):
        super().__init__(W, F, None)
        self.basis = basis
        self.vec_space = vec_space
        self.n = n

    def to_coords(self, a: Matrix) -> tuple[GaussianRational, ...]:
        vec = [x for row in a.rows() for x in row]
        return self.vec_space.coordinates(vec)

    def from_coords(self, coords) -> Matrix:
        n = self.n
        acc = [ZERO] * (n * n)
        for c, v in zip(coords, self.vec_space.vectors()):
            c = GaussianRational.coerce(c)
            if c:
                acc = [x + c * y for x, y in zip(acc, v)]
        return Matrix([acc[i * n:(i + 1) * n] for i in range(n)])

    def subspace_of(self, elements: list[Matrix]) -> Subspace:
        return Subspace.span(len(self.basis), [self.to_coords(a) for a in elements])

    def stabilizer_of(self, pairs) -> Subspace:
        """Elements of g mapping each src into its dst, in g-coordinates."""
        return _restrict_to_lie(pairs, self.n, self.vec_space)

    def induced_filtration(self, F: HodgeFiltration) -> HodgeFiltration:
        """F^a g = {A in g : A F^p ⊆ F^{p+a}} for an arbitrary flag F on V."""
        return _induced_lie_filtration(F, self.n, self.vec_space)


def _stabilizing_constraints(pairs, n: int) -> list[list[GaussianRational]]:
    """Rows on vec(A) expressing A·src ⊆ dst for each (src, dst) pair."""
    rows = []
    for src, dst in pairs:
        eqs = dst.equations()
        for w in src.vectors():
            for e in eqs.rows():
                rows.append([e[r] * w[c] for r in range(n) for c in range(n)])
    return rows


def _restrict_to_lie(pairs, n: int, vec_space: Subspace) -> Subspace:
    d = vec_space.dim
    rows = _stabilizing_constraints(pairs, n)
    if not rows:
        return Subspace.full(d)
    gmat = Matrix.from_columns(vec_space.vectors(), nrows=n * n)
    return Subspace.span(d, (Matrix(rows) @ gmat).nullspace().columns())


def _induced_lie_filtration(F: HodgeFiltration, n: int, vec_space: Subspace) -> HodgeFiltration:
    plo, phi = F.bounds()
    spread = phi - plo
    steps = {
        a: _restrict_to_lie([(F[p], F[p + a]) for p in range(plo, phi + 1)], n, vec_space)
        for a in range(-spread, spread + 2)
    }
    return HodgeFiltration(steps, vec_space.dim)


def lie_algebra_mhs(mhs: MixedHodgeStructure, Q: PolarizationForm | None = None) -> LieAlgebraMHS:
    Q = Q or mhs.Q
    if Q is None:
        raise ValueError("a polarization form is required")
    n = mhs.ambient_dim
    qm = Q.matrix
    # A^T Q + Q A = 0 as linear conditions on vec(A)
    cond = []
    for i in range(n):
        for j in range(n):
            row = [ZERO] * (n * n)
            for r in range(n):
                row[r * n + i] = row[r * n + i] + qm[r, j]
                row[r * n + j] = row[r * n + j] + qm[i, r]
            cond.append(row)
    vec_space = Subspace.span(n * n, Matrix(cond).nullspace().columns())
    basis = [Matrix([v[i * n:(i + 1) * n] for i in range(n)]) for v in vec_space.vectors()]
    klo, khi = mhs.W.bounds()
    spread = khi - klo
    wsteps = {}
    for k in range(-spread - 1, spread + 1):
        wsteps[k] = _restrict_to_lie([(mhs.W[j], mhs.W[j + k]) for j in range(klo, khi + 1)], n, vec_space)
    W = WeightFiltration(0, wsteps)
    F = _induced_lie_filtration(mhs.F, n, vec_space)
    return LieAlgebraMHS(W, F, basis, vec_space, n)
