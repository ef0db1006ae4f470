"""Reference computations for the test suite.

Everything here runs on sympy's exact domains or plain Fractions, so no
result depends on lmhs's own linear algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from sympy import QQ, QQ_I, Poly, S, symbols
from sympy import Matrix as SMatrix
from sympy.polys.matrices import DomainMatrix

z = symbols("z")


def qqi(x):
    """Any lmhs scalar, int, Fraction or (re, im) pair as a QQ_I element."""
    if isinstance(x, QQ_I.dtype):
        return x
    if isinstance(x, tuple):
        re, im = x
    else:
        re, im = getattr(x, "re", x), getattr(x, "im", 0)
    re, im = Fraction(re), Fraction(im)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def conj(e):
    return QQ_I(e.x, -e.y)


def conj_vectors(vectors):
    return [[conj(qqi(x)) for x in v] for v in vectors]


def _domain(vectors, n):
    vectors = [[qqi(x) for x in v] for v in vectors]
    if not vectors:
        return None
    # columns are the vectors
    return DomainMatrix([[v[r] for v in vectors] for r in range(n)], (n, len(vectors)), QQ_I)


def rank(vectors, n) -> int:
    m = _domain(vectors, n)
    return 0 if m is None else m.rank()


def contained(small, big, n) -> bool:
    return rank(list(big) + list(small), n) == rank(big, n)


def same_span(a, b, n) -> bool:
    ra, rb = rank(a, n), rank(b, n)
    return ra == rb == rank(list(a) + list(b), n)


# ---- monodromy weight filtration from a Jordan basis ----------------------


def jordan_nilpotent(blocks, P):
    """N = P J P^-1 where J has nilpotent Jordan blocks of the given sizes.

    Returns (N as Fraction rows, list of (column of P, weight offset)),
    the offset of a chain vector being its weight minus the center.
    """
    n = sum(blocks)
    J = [[0] * n for _ in range(n)]
    labels = []
    c = 0
    for L in blocks:
        for j in range(L):
            if j:
                J[c + j - 1][c + j] = 1
            labels.append((c + j, -(L - 1) + 2 * j))
        c += L
    Ps = SMatrix(P)
    Ns = Ps * SMatrix(J) * Ps.inv()
    N = [[Fraction(int(Ns[i, j].p), int(Ns[i, j].q)) for j in range(n)] for i in range(n)]
    basis = [([Fraction(int(Ps[r, col])) for r in range(n)], w) for col, w in labels]
    return N, basis


def jordan_weight_filtration(basis, center):
    """W_k = span of Jordan chain vectors with weight ≤ k."""
    offsets = [w for _, w in basis]
    lo, hi = min(offsets, default=0), max(offsets, default=0)
    return {
        center + k: [v for v, w in basis if w <= k] for k in range(lo - 1, hi + 1)
    }


# ---- Hermitian positivity by a Cholesky attempt --------------------------


def cholesky_positive(G) -> bool:
    """Attempt a rational LDL* factorisation; positive iff every pivot is > 0."""
    A = [[qqi(x) for x in row] for row in G]
    n = len(A)
    for k in range(n):
        d = A[k][k]
        if d.y != 0 or d.x <= 0:
            return False
        for i in range(k + 1, n):
            f = A[i][k] / d
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - f * A[k][j]
    return True


# ---- Grassmannian limit through Plücker coordinates -----------------------


def plucker_limit(columns, n):
    """Top-degree Plücker coordinates of a frame with polynomial entries.

    ``columns`` hold coefficient lists (constant term first).  Returns the
    limiting Plücker vector, indexed by sorted row subsets.
    """
    k = len(columns)
    M = SMatrix(
        n,
        k,
        lambda r, c: sum(
            (QQ_I.to_sympy(qqi(coef)) * z**d for d, coef in enumerate(columns[c][r])),
            0,
        ),
    )
    minors = {}
    for rows in itertools.combinations(range(n), k):
        minors[rows] = Poly(M.extract(list(rows), list(range(k))).det(), z)
    top = max(p.degree() for p in minors.values() if not p.is_zero)
    return {rows: (p.coeff_monomial(z**top) if p.degree() == top else 0) for rows, p in minors.items()}


def plucker_of_span(vectors, n):
    k = len(vectors)
    M = SMatrix(n, k, lambda r, c: QQ_I.to_sympy(qqi(vectors[c][r])))
    return {rows: M.extract(list(rows), list(range(k))).det() for rows in itertools.combinations(range(n), k)}


def proportional(u: dict, v: dict) -> bool:
    keys = sorted(u)
    pivot = next((key for key in keys if u[key] != 0), None)
    if pivot is None or S(v[pivot]) == 0:
        return False
    ratio = S(v[pivot]) / S(u[pivot])
    return all((S(v[key]) - ratio * S(u[key])).expand() == 0 for key in keys)


# ---- dual graph of a nodal curve -----------------------------------------


def dual_graph_b1(components: int, edges) -> int:
    """b1 = E - V + (number of connected components), via union-find."""
    parent = list(range(components))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    pieces = len({find(x) for x in range(components)})
    return len(edges) - components + pieces


# ---- first-order smoothability by sampling -------------------------------


def sampled_smoothable(localize_rows, ext_dim, rng, samples=1000) -> bool:
    """True once some rational ξ has every coordinate of localize(ξ) nonzero."""
    for _ in range(samples):
        xi = [Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for _ in range(ext_dim)]
        values = [sum(Fraction(getattr(a, "re", a)) * x for a, x in zip(row, xi)) for row in localize_rows]
        if all(values):
            return True
    return False


# ---- pure polarized Hodge structures -------------------------------------


def intersect(a, b, n):
    """Basis of span(a) ∩ span(b) from the kernel of [a | -b]."""
    a = [[qqi(x) for x in v] for v in a]
    b = [[qqi(x) for x in v] for v in b]
    if not a or not b:
        return []
    cols = a + [[-x for x in v] for v in b]
    M = DomainMatrix([[c[r] for c in cols] for r in range(n)], (n, len(cols)), QQ_I)
    out = []
    for row in M.nullspace().to_Matrix().tolist():
        coeffs = [QQ_I.from_sympy(x) for x in row[: len(a)]]
        out.append([sum((c * v[r] for c, v in zip(coeffs, a)), QQ_I(0, 0)) for r in range(n)])
    basis = []
    for v in out:
        if rank(basis + [v], n) > len(basis):
            basis.append(v)
    return basis


def _i_power(k):
    return [QQ_I(1, 0), QQ_I(0, 1), QQ_I(-1, 0), QQ_I(0, -1)][k % 4]


def weil_form_positive(Q, F, m, n) -> bool:
    """Pure weight m, first relation, and Q(Cu, v̄) positive definite on all of V.

    ``F`` maps p to a list of spanning vectors of F^p (missing p below the
    smallest key means V, above the largest means 0).
    """
    keys = sorted(F)

    def step(p):
        if p < keys[0]:
            return [[QQ_I(int(r == c), 0) for r in range(n)] for c in range(n)]
        later = [k for k in keys if k >= p]
        return [[qqi(x) for x in v] for v in F[later[0]]] if later else []

    Qd = [[qqi(x) for x in row] for row in Q]

    def form(u, v):
        return sum((u[r] * Qd[r][c] * v[c] for r in range(n) for c in range(n)), QQ_I(0, 0))

    for p in range(keys[0] - 1, keys[-1] + 2):
        for u in step(p):
            for v in step(m - p + 1):
                if form(u, v):
                    return False
    basis, weil = [], []
    for p in range(keys[0] - 1, keys[-1] + 2):
        piece = intersect(step(p), [[conj(x) for x in v] for v in step(m - p)], n)
        basis += piece
        weil += [_i_power(p - (m - p))] * len(piece)
    if len(basis) != n or rank(basis, n) != n:
        return False
    gram = [[form([weil[a] * x for x in basis[a]], [conj(x) for x in basis[b]]) for b in range(n)] for a in range(n)]
    return cholesky_positive(gram)
