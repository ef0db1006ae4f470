"""Univariate polynomials over Q(i), stored as coefficient tuples (constant first)."""

from __future__ import annotations

from typing import Sequence

from .qlinalg import ONE, ZERO, GaussianRational

Poly = tuple  # tuple[GaussianRational, ...]


def trim(coeffs: Sequence) -> Poly:
    c = [GaussianRational.coerce(x) for x in coeffs]
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n)])


def scale(p: Poly, s) -> Poly:
    s = GaussianRational.coerce(s)
    return trim([s * x for x in p])


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] = out[i + j] + a * b
    return trim(out)


def shift(p: Poly, k: int) -> Poly:
    """Multiply by z^k."""
    return tuple([ZERO] * k) + tuple(p) if p else ()


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [ZERO] * max(len(p) - len(q) + 1, 0)
    lead_inv = q[-1].inverse()
    while len(rem) >= len(q) and rem:
        k = len(rem) - len(q)
        f = rem[-1] * lead_inv
        quo[k] = f
        for j, b in enumerate(q):
            rem[k + j] = rem[k + j] - f * b
        rem = list(trim(rem))
    return trim(quo), trim(rem)


def monic(p: Poly) -> Poly:
    return scale(p, p[-1].inverse()) if p else ()


def gcd(p: Poly, q: Poly) -> Poly:
    a, b = trim(p), trim(q)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def evaluate(p: Poly, z) -> GaussianRational:
    z = GaussianRational.coerce(z)
    acc = ZERO
    for c in reversed(p):
        acc = acc * z + c
    return acc


def constant(c) -> Poly:
    return trim([c])


Z = (ZERO, ONE)
