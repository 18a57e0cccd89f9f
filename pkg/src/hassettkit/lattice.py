"""Exact arithmetic on integer Gram matrices.

A lattice is stored as its Gram matrix in a fixed basis.  The same object
carries integer-matrix quadratic forms: the diagonal holds the form values
of the basis vectors and the off-diagonal entries are half the polarized
form, so ``q(x) = x^T G x``.

Python integers never wrap, but inputs are held to signed 64-bit entries and
elimination intermediates to signed 128-bit values; anything larger raises
:class:`~hassettkit.errors.LatticeOverflow` instead of silently continuing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    InvalidGram,
    LatticeOverflow,
    NotDistinguished,
    NotPositiveDefinite,
    NotSymmetric,
    Singular,
)

INT64_MAX = 2**63 - 1
INT128_MAX = 2**127 - 1

Vector = tuple  # tuple[int, ...]
Matrix = tuple  # tuple[tuple[int, ...], ...]


def check64(x: int) -> int:
    if not -INT64_MAX - 1 <= x <= INT64_MAX:
        raise LatticeOverflow(f"{x} does not fit in a signed 64-bit integer")
    return x


def check128(x: int) -> int:
    if not -INT128_MAX - 1 <= x <= INT128_MAX:
        raise LatticeOverflow("intermediate value exceeds signed 128-bit range")
    return x


@dataclass(frozen=True)
class Lattice:
    gram: Matrix
    definite: bool = True

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])

    def norm(self, v: Sequence[int]) -> int:
        return self.pair(v, v)

    def __str__(self):
        return "\n".join(" ".join(f"{x:4d}" for x in row) for row in self.gram)


def _as_matrix(m) -> Matrix:
    if isinstance(m, Lattice):
        return m.gram
    try:
        rows = [list(r) for r in m]
    except TypeError as exc:
        raise InvalidGram("Gram matrix must be a list of rows") from exc
    n = len(rows)
    if n == 0:
        raise InvalidGram("Gram matrix must have rank >= 1")
    for r in rows:
        if len(r) != n:
            raise InvalidGram("Gram matrix must be square")
        for x in r:
            # bool is an int subclass; reject it along with floats and strings
            if isinstance(x, bool) or not isinstance(x, int):
                raise InvalidGram(f"Gram entries must be integers, got {x!r}")
            check64(x)
    return tuple(tuple(r) for r in rows)


def _bareiss_pivots(a: Matrix) -> list[int]:
    """Leading principal minors D_1..D_n, stopping at the first nonpositive one.

    Plain fraction-free elimination without row exchanges, so the k-th pivot
    is exactly the k-th leading principal minor.
    """
    n = len(a)
    m = [list(r) for r in a]
    prev = 1
    pivots = []
    for k in range(n):
        p = m[k][k]
        pivots.append(p)
        if p <= 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = check128((p * m[i][j] - m[i][k] * m[k][j]) // prev)
        prev = p
    return pivots


def bareiss_upper(a: Matrix) -> list[list[int]]:
    """Fraction-free upper triangle of a positive-definite matrix.

    Row ``k`` of the result holds the elimination values at the moment row
    ``k`` became the pivot row; ``out[k][k]`` is the leading minor D_{k+1}.
    """
    n = len(a)
    m = [list(r) for r in a]
    prev = 1
    for k in range(n):
        p = m[k][k]
        if p <= 0:
            raise NotPositiveDefinite(k + 1)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = check128((p * m[i][j] - m[i][k] * m[k][j]) // prev)
        prev = p
    for i in range(n):
        for j in range(i):
            m[i][j] = 0
    return m


def validate(gram, require_definite: bool = True) -> Lattice:
    """Check a square integer matrix and wrap it as a :class:`Lattice`.

    Definiteness is decided exactly: every leading principal minor (the
    pivots of fraction-free Cholesky elimination) must be positive.
    """
    g = _as_matrix(gram)
    n = len(g)
    for i in range(n):
        for j in range(i + 1, n):
            if g[i][j] != g[j][i]:
                raise NotSymmetric(f"entry ({i},{j})={g[i][j]} differs from ({j},{i})={g[j][i]}")
    pivots = _bareiss_pivots(g)
    definite = len(pivots) == n and all(p > 0 for p in pivots)
    if require_definite and not definite:
        raise NotPositiveDefinite(len(pivots))
    return Lattice(g, definite)


def determinant(m) -> int:
    """Exact determinant by Bareiss elimination with row exchanges."""
    a = [list(r) for r in _as_matrix(m)]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = check128((a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev)
        prev = a[k][k]
    return check64(sign * a[n - 1][n - 1])


def is_even(L: Lattice) -> bool:
    # diagonal suffices: |u+w| = |u| + |w| + 2<u,w>
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def is_primitive(v: Iterable[int]) -> bool:
    return content(v) == 1


def canonical_sign(v: Sequence[int]) -> Vector:
    """Representative of ``±v`` whose first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def magnitude_key(v: Sequence[int]):
    """Sort key comparing coordinates in the order 0, 1, -1, 2, -2, ..."""
    return tuple((abs(x), x < 0) for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _column_reduce(w: Sequence[int]):
    """Unimodular ``V`` (and its inverse) with ``w V = (g, 0, ..., 0)``, g >= 0.

    Columns are combined pairwise with the first one by extended gcd, in
    increasing index order; a vector already of the form (g, 0, ...) is left
    untouched.
    """
    n = len(w)
    w = list(w)
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]
    for j in range(1, n):
        a, b = w[0], w[j]
        if b == 0:
            continue
        g, s, t = xgcd(a, b)
        ag, bg = a // g, b // g
        for row in V:
            c0, cj = row[0], row[j]
            row[0] = s * c0 + t * cj
            row[j] = -bg * c0 + ag * cj
        r0, rj = Vinv[0], Vinv[j]
        Vinv[0] = [ag * x + bg * y for x, y in zip(r0, rj)]
        Vinv[j] = [-t * x + s * y for x, y in zip(r0, rj)]
        w[0], w[j] = g, 0
    if w[0] < 0:
        for row in V:
            row[0] = -row[0]
        Vinv[0] = [-x for x in Vinv[0]]
        w[0] = -w[0]
    return w[0], V, Vinv


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of an integer matrix.

    Zero rows are dropped; pivots are positive and the entries above each
    pivot are reduced into ``[0, pivot)``.  Pivot columns are processed left
    to right.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return ()
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        # gcd-combine all rows below r into row r on column c
        for i in range(r + 1, len(a)):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = xgcd(x, y)
            xg, yg = x // g, y // g
            ra, rb = a[r], a[i]
            a[r] = [s * p + t * q for p, q in zip(ra, rb)]
            a[i] = [-yg * p + xg * q for p, q in zip(ra, rb)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


def gram_in_basis(L: Lattice, basis: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(L.pair(u, w) for w in basis) for u in basis)


def orthogonal_complement(L: Lattice, v: Sequence[int]):
    """Basis and Gram matrix of ``{w : <v, w> = 0}``.

    The basis is the integer kernel of the functional ``<v, ->`` taken from a
    unimodular column reduction, so it is saturated, and then put in Hermite
    normal form for a deterministic output.
    """
    if not any(v):
        raise ValueError("orthogonal complement of the zero vector")
    w = [sum(v[i] * L.gram[i][j] for i in range(L.rank)) for j in range(L.rank)]
    _, V, _ = _column_reduce(w)
    kernel = [tuple(V[i][j] for i in range(L.rank)) for j in range(1, L.rank)]
    basis = hermite_normal_form(kernel)
    return basis, gram_in_basis(L, basis)


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple

    @property
    def l(self) -> int:
        """Minimal number of generators: count of invariant factors above 1."""
        return sum(1 for d in self.invariant_factors if d > 1)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)


def smith_normal_form(m) -> DiscriminantGroup:
    a = [list(r) for r in _as_matrix(m)]
    n = len(a)
    for t in range(n):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                raise Singular("matrix is singular")
            i, j = piv
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    a[i] = [check128(x - q * y) for x, y in zip(a[i], a[t])]
                dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] = check128(row[j] - q * row[t])
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
    return DiscriminantGroup(tuple(abs(a[i][i]) for i in range(n)))


def is_distinguished(L: Lattice, o: Sequence[int]) -> bool:
    if L.norm(o) != 3:
        return False
    _, g = orthogonal_complement(L, o)
    return all(g[i][i] % 2 == 0 for i in range(len(g)))


def require_distinguished(L: Lattice, o: Sequence[int]) -> Vector:
    o = tuple(o)
    if len(o) != L.rank:
        raise NotDistinguished(f"vector {o} has length {len(o)}, lattice rank is {L.rank}")
    if L.norm(o) != 3:
        raise NotDistinguished(f"vector {o} has norm {L.norm(o)}, not 3")
    if not is_distinguished(L, o):
        raise NotDistinguished(f"orthogonal complement of {o} is not even")
    return o


def find_distinguished(L: Lattice) -> list:
    """All norm-3 vectors with even orthogonal complement, one per sign pair."""
    from .enumeration import vectors_with_norm

    return [o for o in vectors_with_norm(L, 3) if is_distinguished(L, o)]


def default_distinguished(L: Lattice):
    """The first basis vector that is distinguished, else the least one found."""
    for i in range(L.rank):
        e = tuple(int(i == j) for j in range(L.rank))
        if L.gram[i][i] == 3 and is_distinguished(L, e):
            return e
    ds = find_distinguished(L)
    return ds[0] if ds else None


def span2_disc(L: Lattice, o: Sequence[int], v: Sequence[int]) -> int:
    """Discriminant of Span(o, v); equals ``3|v| - <o,v>^2`` when ``|o| = 3``."""
    ov = L.pair(o, v)
    return L.norm(o) * L.norm(v) - ov * ov
