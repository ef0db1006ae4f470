"""Random inputs with known answers: nilpotents with a chosen Jordan type and
mixed Hodge structures with chosen Hodge numbers."""

from __future__ import annotations

import random
from fractions import Fraction

from sympy import Matrix as SMatrix

from lmhs.hodge import HodgeFiltration, MixedHodgeStructure, WeightFiltration
from lmhs.qlinalg import GaussianRational, Matrix, Subspace


def random_partition(rng: random.Random, n: int) -> list[int]:
    parts = []
    while n:
        k = rng.randint(1, n)
        parts.append(k)
        n -= k
    return parts


def random_invertible(rng: random.Random, n: int, spread: int = 3) -> list[list[int]]:
    while True:
        P = [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)]
        if SMatrix(P).det() != 0:
            return P


def random_hodge_numbers(rng: random.Random, max_dim: int) -> dict[tuple[int, int], int]:
    """Hodge numbers h^{p,q} with h^{p,q} = h^{q,p}, total dimension in 1..max_dim."""
    while True:
        h: dict[tuple[int, int], int] = {}
        total = 0
        for _ in range(rng.randint(2, 5)):
            p, q = rng.randint(-1, 2), rng.randint(-1, 2)
            step = 1 if p == q else 2
            if total + step > max_dim:
                continue
            h[(p, q)] = h.get((p, q), 0) + 1
            if p != q:
                h[(q, p)] = h.get((q, p), 0) + 1
            total += step
        if total:
            return h


class RandomMHS:
    """A mixed Hodge structure built from its Deligne splitting.

    Start from an R-split model where I^{p,q} and I^{q,p} are spanned by
    u + iv and u - iv, move it by a random real change of coordinates, then
    twist F by 1 + X with X lowering weight, which leaves the induced pure
    structures (and hence every h^{p,q}) unchanged.
    """

    def __init__(self, rng: random.Random, max_dim: int = 8, twist: bool = True):
        self.hodge_numbers = random_hodge_numbers(rng, max_dim)
        n = sum(self.hodge_numbers.values())
        self.ambient_dim = n
        I = GaussianRational(0, 1)
        vectors: list[tuple[tuple[int, int], list]] = []
        slot = 0
        done = set()
        for (p, q), h in sorted(self.hodge_numbers.items()):
            if (p, q) in done:
                continue
            for _ in range(h):
                if p == q:
                    vectors.append(((p, q), _unit(n, slot)))
                    slot += 1
                else:
                    u, v = _unit(n, slot), _unit(n, slot + 1)
                    vectors.append(((p, q), [a + I * b for a, b in zip(u, v)]))
                    vectors.append(((q, p), [a - I * b for a, b in zip(u, v)]))
                    slot += 2
            done.update({(p, q), (q, p)})
        g = Matrix(random_invertible(rng, n))
        weights = sorted({p + q for (p, q), _ in vectors})
        lowering = Matrix.identity(n)
        if twist:
            # X sends each vector of weight k into the span of lower-weight ones
            images = []
            for (p, q), vec in vectors:
                lower = [w for (a, b), w in vectors if a + b < p + q]
                coeffs = [GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in lower]
                shift = [sum((c * w[r] for c, w in zip(coeffs, lower)), GaussianRational(0)) for r in range(n)]
                images.append([x + y for x, y in zip(vec, shift)])
            # lowering maps vec_j to images_j
            src = Matrix.from_columns([v for _, v in vectors], nrows=n)
            dst = Matrix.from_columns(images, nrows=n)
            lowering = dst @ src.inverse()
        self.W_steps = {
            k: Subspace.span(n, [g.apply(v) for (p, q), v in vectors if p + q <= k]) for k in weights
        }
        F_steps = {}
        for p in sorted({a for (a, _), _ in vectors}):
            F_steps[p] = Subspace.span(n, [g.apply(lowering.apply(v)) for (a, _), v in vectors if a >= p])
        self.mhs = MixedHodgeStructure(
            WeightFiltration(weights[0], self.W_steps), HodgeFiltration(F_steps, n)
        )


def _unit(n: int, i: int) -> list:
    return [GaussianRational(1 if r == i else 0) for r in range(n)]


def random_rational(rng: random.Random, span: int = 9, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))
