"""Complete enumeration of lattice points of a positive-definite Gram matrix.

All pruning is done in exact integer arithmetic.  Writing the form as

    q(x) = sum_k d_k (x_k + sum_{j>k} u_kj x_j)^2

with ``d_k = D_{k+1}/D_k`` (ratios of leading minors) and ``u_kj = B_kj/D_{k+1}``
(``B`` the fraction-free elimination matrix), the k-th term equals
``(D_{k+1} x_k + C_k)^2 / (D_k D_{k+1})`` with ``C_k = sum_{j>k} B_kj x_j`` an
integer.  Scaling every term by a common multiple of the denominators turns
each interval bound into an integer square root, so no lattice point can be
lost to rounding.

Coordinates are fixed from the last one down to ``x_0``; the innermost
coordinate is solved directly (a quadratic in one variable).  Vectors are
produced once per sign pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import LatticeOverflow, NotPositiveDefinite
from .lattice import (
    INT64_MAX,
    Lattice,
    bareiss_upper,
    canonical_sign,
    check128,
    content,
    magnitude_key,
    validate,
)


@dataclass(frozen=True)
class RationalCholesky:
    diag: tuple
    upper: tuple  # upper[i][j] meaningful for j > i only

    def evaluate(self, x: Sequence[int]) -> Fraction:
        n = len(self.diag)
        total = Fraction(0)
        for i in range(n):
            s = x[i] + sum((self.upper[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
            total += self.diag[i] * s * s
        return total


def _lattice(L) -> Lattice:
    return L if isinstance(L, Lattice) else validate(L, require_definite=False)


def cholesky(L) -> RationalCholesky:
    L = _lattice(L)
    b = bareiss_upper(L.gram)
    n = L.rank
    minors = [1] + [b[k][k] for k in range(n)]
    diag = tuple(Fraction(minors[k + 1], minors[k]) for k in range(n))
    upper = tuple(
        tuple(Fraction(b[k][j], minors[k + 1]) if j > k else Fraction(0) for j in range(n))
        for k in range(n)
    )
    return RationalCholesky(diag, upper)


class _Scaled:
    """Integer-scaled Cholesky data driving the enumeration."""

    def __init__(self, L: Lattice):
        if not L.definite:
            raise NotPositiveDefinite(0)
        self.n = n = L.rank
        self.gram = L.gram
        b = bareiss_upper(L.gram)
        self.B = b
        D = [1] + [b[k][k] for k in range(n)]
        self.D = D
        scale = 1
        for k in range(n):
            scale = math.lcm(scale, D[k] * D[k + 1])
        self.scale = scale
        self.W = [scale // (D[k] * D[k + 1]) for k in range(n)]


@lru_cache(maxsize=64)
def _scaled(L: Lattice) -> _Scaled:
    return _Scaled(L)


def _check_bound(n: int) -> None:
    if n > INT64_MAX:
        raise LatticeOverflow(f"norm bound {n} exceeds 64-bit range")


def _ranges(sc: _Scaled, bound: int):
    """Yield ``(tail, rem0, C0)`` for every admissible assignment of x_1..x_{n-1}.

    ``tail`` is a list holding x_1..x_{n-1} at positions 1..n-1 (mutated in
    place), ``rem0`` is the scaled slack left for the x_0 term and ``C0`` the
    linear coefficient of x_0.  Only tails whose last nonzero entry is
    positive are produced, plus the all-zero tail.
    """
    n, B, D, W = sc.n, sc.B, sc.D, sc.W
    x = [0] * n
    top = check128(sc.scale * bound)

    def rec(k, rem, zero_above):
        Ck = 0
        row = B[k]
        for j in range(k + 1, n):
            if x[j]:
                Ck += row[j] * x[j]
        if k == 0:
            yield x, rem, Ck, zero_above
            return
        s = math.isqrt(rem // W[k])
        d = D[k + 1]
        lo = -((s + Ck) // d)
        hi = (s - Ck) // d
        if zero_above:
            lo = max(lo, 0)
        for xk in range(lo, hi + 1):
            t = d * xk + Ck
            x[k] = xk
            yield from rec(k - 1, rem - W[k] * t * t, zero_above and xk == 0)
        x[k] = 0

    yield from rec(n - 1, top, True)


def _tail_norm(sc: _Scaled, bound: int, rem0: int, C0: int) -> int:
    # norm of (0, x_1, ..., x_{n-1}) recovered from the scaled slack
    return (sc.scale * bound - rem0 + sc.W[0] * C0 * C0) // sc.scale


def _x0_range(sc: _Scaled, rem0: int, C0: int, zero_above: bool):
    s = math.isqrt(rem0 // sc.W[0])
    d = sc.D[1]
    lo = -((s + C0) // d)
    hi = (s - C0) // d
    if zero_above:
        lo = max(lo, 1)
    return lo, hi


def iter_ball(L: Lattice, bound: int) -> Iterator[tuple]:
    """Yield ``(vector, norm)`` for all nonzero ``v`` with ``q(v) <= bound``.

    One vector per sign pair; the vector yielded has its last nonzero
    coordinate positive.
    """
    _check_bound(bound)
    sc = _scaled(L)
    g00 = sc.gram[0][0]
    for x, rem0, C0, zero_above in _ranges(sc, bound):
        lo, hi = _x0_range(sc, rem0, C0, zero_above)
        if lo > hi:
            continue
        qt = _tail_norm(sc, bound, rem0, C0)
        tail = x[1:]
        for x0 in range(lo, hi + 1):
            yield (x0, *tail), qt + g00 * x0 * x0 + 2 * C0 * x0


def vectors_with_norm(L: Lattice, n: int) -> list:
    """All ``v`` with ``q(v) == n``: one per sign pair, first nonzero entry
    positive, sorted lexicographically."""
    if n < 0:
        raise ValueError("norm must be nonnegative")
    _check_bound(n)
    if n == 0:
        return []
    sc = _scaled(L)
    g00 = sc.gram[0][0]
    out = []
    for x, rem0, C0, zero_above in _ranges(sc, n):
        qt = _tail_norm(sc, n, rem0, C0)
        # g00 x0^2 + 2 C0 x0 + qt - n = 0
        disc = C0 * C0 - g00 * (qt - n)
        if disc < 0:
            continue
        s = math.isqrt(disc)
        if s * s != disc:
            continue
        tail = tuple(x[1:])
        for num in {-C0 - s, -C0 + s}:
            if num % g00 == 0:
                x0 = num // g00
                if zero_above and x0 <= 0:
                    continue
                out.append(canonical_sign((x0, *tail)))
    return sorted(set(out))


def min_norm(L: Lattice) -> int:
    """Minimal nonzero norm."""
    best = min(L.gram[i][i] for i in range(L.rank))
    for _, q in iter_ball(L, best):
        if q < best:
            best = q
    return best


def roots(L: Lattice) -> list:
    return vectors_with_norm(L, 2)


def represents_primitively(L: Lattice, n: int) -> Optional[tuple]:
    """A primitive ``v`` with ``q(v) == n`` or ``None``.

    Among all primitive solutions with canonical sign the one returned is
    least in the coordinate order 0, 1, -1, 2, -2, ...
    """
    if n < 1:
        raise ValueError("n must be positive")
    sols = [v for v in vectors_with_norm(L, n) if content(v) == 1]
    return min(sols, key=magnitude_key) if sols else None


@dataclass(frozen=True)
class ImageReport:
    bound: int
    primitive: bool
    values: tuple
    witnesses: Optional[dict] = field(default=None, compare=False)

    def to_dict(self, complement: bool = False) -> dict:
        d = {"bound": self.bound, "primitive": self.primitive, "values": list(self.values)}
        if complement:
            have = set(self.values)
            d["missed"] = [k for k in range(1, self.bound + 1) if k not in have]
        if self.witnesses is not None:
            d["witnesses"] = [
                {"value": k, "vector": list(self.witnesses[k])} for k in sorted(self.witnesses)
            ]
        return d


def orthogonal_blocks(L: Lattice) -> list:
    """Index sets of the orthogonal summands visible in the basis."""
    n = L.rank
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if L.gram[i][j]:
                parent[find(i)] = find(j)
    blocks = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def _image_numpy(L: Lattice, bound: int):
    """Represented / primitively represented flags for 0..bound."""
    sc = _scaled(L)
    g00 = sc.gram[0][0]
    hit = np.zeros(bound + 1, dtype=bool)
    phit = np.zeros(bound + 1, dtype=bool)
    for x, rem0, C0, zero_above in _ranges(sc, bound):
        lo, hi = _x0_range(sc, rem0, C0, zero_above)
        if lo > hi:
            continue
        qt = _tail_norm(sc, bound, rem0, C0)
        xs = np.arange(lo, hi + 1, dtype=np.int64)
        vals = qt + xs * (g00 * xs + 2 * C0)
        hit[vals] = True
        g = content(x[1:])
        if g == 1:
            phit[vals] = True
        else:
            phit[vals[np.gcd(xs, g) == 1]] = True
    return hit, phit


def _image_python(L: Lattice, bound: int, primitive_only: bool) -> dict:
    """value -> least witness (canonical sign, magnitude order)."""
    best = {}
    keys = {}
    for v, q in iter_ball(L, bound):
        if primitive_only and content(v) != 1:
            continue
        v = canonical_sign(v)
        k = magnitude_key(v)
        if q not in best or k < keys[q]:
            best[q] = v
            keys[q] = k
    return best


def _radical(g: int) -> int:
    r, p = 1, 2
    while p * p <= g:
        if g % p == 0:
            r *= p
            while g % p == 0:
                g //= p
        p += 1
    return r * g if g > 1 else r


def _block_table(L: Lattice, idx: list, bound: int) -> dict:
    """(value, radical of content) -> witness for one orthogonal block."""
    sub = Lattice(tuple(tuple(L.gram[i][j] for j in idx) for i in idx), True)
    table = {(0, 0): (0,) * len(idx)}
    for v, q in iter_ball(sub, bound):
        key = (q, _radical(content(v)))
        if key not in table:
            table[key] = canonical_sign(v)
    return table


def _image_blocks(L: Lattice, blocks: list, bound: int, primitive_only: bool) -> dict:
    n = L.rank
    combined = {(0, 0): {}}
    for idx in blocks:
        table = _block_table(L, idx, bound)
        if not primitive_only:
            table = {(q, 0): v for (q, _), v in sorted(table.items(), reverse=True)}
        nxt = {}
        for (q1, g1), w1 in sorted(combined.items()):
            for (q2, g2), w2 in sorted(table.items()):
                q = q1 + q2
                if q > bound:
                    continue
                key = (q, math.gcd(g1, g2))
                if key not in nxt:
                    w = dict(w1)
                    w.update(zip(idx, w2))
                    nxt[key] = w
        combined = nxt
    out = {}
    for (q, g), w in sorted(combined.items()):
        if q == 0 or (primitive_only and g != 1):
            continue
        if q not in out:
            out[q] = canonical_sign(tuple(w.get(i, 0) for i in range(n)))
    return out


def image_up_to(L: Lattice, bound: int, primitive_only: bool = False, witnesses: bool = False) -> ImageReport:
    """Exact set of values ``1..bound`` taken by the form (primitively if asked).

    Forms that split as an orthogonal sum in the given basis are handled
    block by block, tracking the content of each partial vector so that
    primitivity of the assembled vector is decided exactly.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    _check_bound(bound)
    if not L.definite:
        raise NotPositiveDefinite(0)
    blocks = orthogonal_blocks(L)
    if len(blocks) > 1:
        found = _image_blocks(L, blocks, bound, primitive_only)
        return ImageReport(bound, primitive_only, tuple(sorted(found)), found if witnesses else None)
    if witnesses:
        found = _image_python(L, bound, primitive_only)
        return ImageReport(bound, primitive_only, tuple(sorted(found)), dict(sorted(found.items())))
    hit, phit = _image_numpy(L, bound)
    flags = phit if primitive_only else hit
    values = tuple(int(k) for k in np.flatnonzero(flags) if k > 0)
    return ImageReport(bound, primitive_only, values, None)
