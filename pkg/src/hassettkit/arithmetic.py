"""Sums of squares with residue control, and the constructive solver for

    f0(x, y, z, u) = 8x^2 + 12xy + 18y^2 + 12yz + 12z^2 + 12u^2 + 12xu,

which primitively represents every Hassett discriminant.

The solver follows the residue-class argument: with

    5 f0 = 13x^2 + 3(5y + 2x)^2 + 15(y + 2z)^2 + 15(x + 2u)^2

and ``x`` fixed by ``d mod 24``, one needs ``T = (5d - 13x^2)/3`` written as
``A^2 + 5B^2 + 5C^2`` with ``A = 2x (mod 5)``, ``B = y (mod 2)`` and
``C = x (mod 2)`` where ``y = (A - 2x)/5``.  That decomposition is built from
a sum of three squares whose residues mod 5 are steered by
:func:`lower_five_height` and collapsed by :func:`lagrange5_down`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import (
    InternalContradiction,
    NotApplicable,
    NotDivisibleBy5,
    NotFound,
    NotInHassett,
    NotRepresentable,
    OnlyTrivial,
    ValueMismatch,
)


def in_hassett(d: int) -> bool:
    return d > 6 and d % 6 in (0, 2)


def f0(x: int, y: int, z: int, u: int) -> int:
    return 8 * x * x + 12 * x * y + 18 * y * y + 12 * y * z + 12 * z * z + 12 * u * u + 12 * x * u


F0_GRAM = ((8, 6, 0, 6), (6, 18, 6, 0), (0, 6, 12, 0), (6, 0, 0, 12))


def factorize(n: int) -> dict:
    """Trial division; inputs are desk-scale."""
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def is_sum_of_two_squares(n: int) -> bool:
    if n < 0:
        return False
    if n == 0:
        return True
    return all(e % 2 == 0 for p, e in factorize(n).items() if p % 4 == 3)


def two_squares(n: int) -> Optional[tuple]:
    """``(x, y)`` with ``0 <= x <= y`` and ``x^2 + y^2 = n``, smallest x first."""
    if not is_sum_of_two_squares(n):
        return None
    for x in range(math.isqrt(n // 2) + 1):
        r = n - x * x
        y = math.isqrt(r)
        if y * y == r:
            return x, y
    raise InternalContradiction(f"Fermat criterion holds for {n} but no decomposition found")


def is_three_square_exception(n: int) -> bool:
    """True iff n = 4^k (8m + 7)."""
    if n <= 0:
        return False
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def three_squares(n: int) -> Optional[tuple]:
    """``(a, b, c)`` with ``0 <= a <= b <= c``, or ``None`` iff n = 4^k(8m+7)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if is_three_square_exception(n):
        return None
    for c in range(math.isqrt(n), -1, -1):
        ab = two_squares(n - c * c)
        if ab is not None:
            return tuple(sorted((*ab, c)))
    raise InternalContradiction(f"no three-square decomposition of {n}")


def three_square_reps(n: int) -> Iterator[tuple]:
    """Every ``(a, b, c)`` with ``a >= b >= c >= 0`` and sum of squares ``n``."""
    for a in range(math.isqrt(n), -1, -1):
        r = n - a * a
        if 3 * a * a < n:
            break
        for b in range(min(a, math.isqrt(r)), -1, -1):
            s = r - b * b
            if 2 * b * b < r:
                break
            c = math.isqrt(s)
            if c * c == s:
                yield a, b, c


def is_nontrivial(t) -> bool:
    a, b, c = t
    return (a * b, b * c, c * a) != (0, 0, 0)


def _is_power_of_four(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0 and n.bit_length() % 2 == 1


def _prime_square_nontrivial(p: int) -> tuple:
    """Nontrivial three-square representation of p^2, p an odd prime."""
    if p % 4 == 1:
        x, y = two_squares(p)
        return (0, abs(x * x - y * y), 2 * x * y)
    # 4p^2 = (t^2 + u^2 - s^2)^2 + (2st)^2 + (2su)^2 with 2p = s^2 + t^2 + u^2
    s, t, u = three_squares(2 * p)
    a, b, c = t * t + u * u - s * s, 2 * s * t, 2 * s * u
    return (abs(a) // 2, b // 2, c // 2)


def nontrivial_three_squares(n: int) -> tuple:
    """Three squares summing to ``n`` with at least two nonzero entries.

    Raises OnlyTrivial for n = 4^k (and n = 0), NotRepresentable for
    n = 4^k(8m+7).  Result is sorted by absolute value.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0 or _is_power_of_four(n):
        raise OnlyTrivial(f"{n} has only trivial representations")
    if is_three_square_exception(n):
        raise NotRepresentable(f"{n} is not a sum of three squares")
    k = math.isqrt(n)
    if k * k != n:
        # a representation of a non-square can never be trivial
        return three_squares(n)
    p = next(q for q in sorted(factorize(k)) if q % 2)
    a, b, c = _prime_square_nontrivial(p)
    m = k // p
    rep = tuple(sorted((m * a, m * b, m * c)))
    if rep[0] ** 2 + rep[1] ** 2 + rep[2] ** 2 == n and is_nontrivial(rep):
        return rep
    for rep in three_square_reps(n):
        if is_nontrivial(rep):
            return tuple(sorted(rep))
    raise InternalContradiction(f"no nontrivial representation of {n}")


def lagrange5_up(x: int, y: int) -> tuple:
    """``(2x + y, x - 2y)``, whose sum of squares is 5 (x^2 + y^2)."""
    return 2 * x + y, x - 2 * y


def lagrange5_down(x: int, y: int) -> tuple:
    """Pair with sum of squares ``(x^2 + y^2)/5``."""
    if (x * x + y * y) % 5:
        raise NotDivisibleBy5(f"{x}^2 + {y}^2 is not divisible by 5")
    if (x - 2 * y) % 5 == 0:
        return (2 * x + y) // 5, (x - 2 * y) // 5
    return (2 * x - y) // 5, (x + 2 * y) // 5


def lower_five_height(n: int) -> tuple:
    """``(x, y)``, both >= 0, with ``x^2 + y^2 = 5n``, ``x^2 = 1`` and ``y^2 = 4 (mod 5)``."""
    if n <= 0:
        raise ValueError("n must be positive")
    k, m = 0, n
    while m % 5 == 0:
        m //= 5
        k += 1
    if not is_sum_of_two_squares(m):
        raise NotRepresentable(f"x^2 + y^2 = {5 * n} has no solution")
    # base case 5m with 5 not dividing m; scan x downward
    target = 5 * m
    for x in range(math.isqrt(target), -1, -1):
        if x * x % 5 != 1:
            continue
        r = target - x * x
        y = math.isqrt(r)
        if y * y == r:
            break
    else:
        raise InternalContradiction(f"no base solution for {target}")
    for _ in range(k):
        if x % 5 != 1:
            x = -x
        if y % 5 != 2:
            y = -y
        x, y = 2 * x + y, 2 * y - x
    return abs(x), abs(y)


def _v3(n: int) -> int:
    if n == 0:
        return 10**9
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k


def _mod3_step(x: int, y: int, sign: int) -> Optional[tuple]:
    a, b = 2 * x + sign * 5 * y, x - sign * 2 * y
    if a % 3 or b % 3:
        return None
    return a // 3, b // 3


def mod3_adjust(x: int, y: int) -> tuple:
    """Move a solution of ``x^2 + 5y^2 = v`` to one with ``x, y`` prime to 3.

    Each step multiplies by ``(2 +- sqrt(-5))/3``; the sign is the one that
    lowers the 3-adic valuation of ``gcd(x, y)``, ties going to ``+``.
    """
    v = x * x + 5 * y * y
    if v == 0:
        raise ValueError("x^2 + 5y^2 must be nonzero")
    while x % 3 == 0 or y % 3 == 0:
        if x % 3 or y % 3:
            raise NotApplicable(f"({x}, {y}): exactly one coordinate divisible by 3")
        h = _v3(math.gcd(x, y))
        steps = [s for s in (_mod3_step(x, y, 1), _mod3_step(x, y, -1)) if s is not None]
        nxt = min(steps, key=lambda s: _v3(math.gcd(*s)))
        if _v3(math.gcd(*nxt)) >= h:
            raise InternalContradiction(f"3-height of ({x}, {y}) did not drop")
        x, y = nxt
    assert x * x + 5 * y * y == v
    return x, y


def mod3_invariants_check(s1: tuple, s2: tuple) -> bool:
    """Parity and mod-5 relations between two solutions of ``x^2 + 5y^2 = v``."""
    (x1, y1), (x2, y2) = s1, s2
    if x1 * x1 + 5 * y1 * y1 != x2 * x2 + 5 * y2 * y2:
        raise ValueMismatch(f"{s1} and {s2} have different values")
    parity = x1 % 2 == y1 % 2 == x2 % 2 == y2 % 2
    return parity and ((x1 - x2) % 5 == 0 or (x1 + x2) % 5 == 0)


@dataclass(frozen=True)
class F0Solution:
    x: int
    y: int
    z: int
    u: int
    case: str = ""

    @property
    def vector(self) -> tuple:
        return (self.x, self.y, self.z, self.u)

    @property
    def value(self) -> int:
        return f0(*self.vector)

    @property
    def gcd(self) -> int:
        return math.gcd(*self.vector)

    @property
    def primitive(self) -> bool:
        return self.gcd == 1

    def to_dict(self) -> dict:
        return {"vector": list(self.vector), "value": self.value, "gcd": self.gcd, "case": self.case}


# Residues mod 24 of Hassett discriminants and the first coordinate used.
CASE_FIRST_COORD = {8: 1, 14: 1, 20: 1, 2: 2, 0: 3, 6: 3, 12: 3, 18: 6}

# d = 18 mod 24 below 114 cannot have first coordinate 6 (f0 >= 13/5 x^2), and
# d = 24 has no solution with first coordinate 3 (T = 1 forces C = 0, even).
# All five only have primitive solutions with first coordinate 0.
SMALL_EXCEPTIONS = (18, 24, 42, 66, 90)


def _signed(a: int, residue: int) -> Optional[int]:
    """``a`` or ``-a``, whichever is ``residue`` mod 5."""
    if a % 5 == residue % 5:
        return a
    if (-a) % 5 == residue % 5:
        return -a
    return None


def _assemble(x: int, A: int, B: int, C: int, case: str) -> Optional[F0Solution]:
    """Back-substitute ``A = 5y + 2x``, ``B = y + 2z``, ``C = x + 2u``."""
    if (A - 2 * x) % 5:
        return None
    y = (A - 2 * x) // 5
    if (B - y) % 2 or (C - x) % 2:
        return None
    return F0Solution(x, y, (B - y) // 2, (C - x) // 2, case)


def _finish(x: int, A: int, pair: tuple, T: int, case: str) -> Optional[F0Solution]:
    """Collapse the two squares in ``pair`` by 5 and pick the parity split."""
    B1, C1 = lagrange5_down(*pair)
    for B, C in ((B1, C1), (C1, B1)):
        sol = _assemble(x, A, B, C, case)
        if sol is None:
            continue
        if sol.primitive:
            return sol
        # all of A, B, C divisible by 3; A^2 + 5B^2 is even so adjust it
        if A % 3 == 0 and B % 3 == 0:
            A2, B2 = mod3_adjust(A, B)
            A2 = _signed(A2, 2 * x)
            if A2 is None:
                raise InternalContradiction(f"mod-3 adjustment broke the residue of A for T={T}")
            sol = _assemble(x, A2, B2, C, case)
            if sol is not None and sol.primitive:
                return sol
    return None


def _case_pipeline(d: int, x: int, a_sq_res: int, need_a_parity, case: str) -> F0Solution:
    """Shared proof pipeline for first coordinate ``x``.

    ``a_sq_res`` is the residue mod 5 of ``A^2 = (2x)^2``; ``need_a_parity``
    is the parity ``A`` must have.  Steps: pick a square of the right residue
    from a three-square representation of ``T``; lower the 5-height of the
    remaining two; choose ``A`` among the candidates of residue ``a_sq_res``
    with the right parity; collapse the other two by 5.
    """
    T = (5 * d - 13 * x * x) // 3
    target_res = 2 * x
    for rep in three_square_reps(T):
        for i in range(3):
            a = rep[i]
            if a * a % 5 != a_sq_res:
                continue
            rest = T - a * a
            if rest == 0:
                continue
            p, q = lower_five_height(rest // 5)
            for cand, others in ((a, (p, q)), (p, (a, q)), (q, (a, p))):
                if cand * cand % 5 != a_sq_res or cand % 2 != need_a_parity:
                    continue
                A = _signed(cand, target_res)
                sol = _finish(x, A, others, T, case)
                if sol is not None:
                    return sol
    raise InternalContradiction(f"proof pipeline found no admissible choice for d={d} ({case})")


def solve_hassett_proof(d: int) -> F0Solution:
    """Primitive solution of ``f0 = d`` built by the mod-24 case analysis."""
    if not in_hassett(d):
        raise NotInHassett(d)
    r = d % 24
    if d == 12:
        return F0Solution(0, 0, 0, 1, "d=12")
    if d in SMALL_EXCEPTIONS:
        return _small_search(d)
    if r == 14:
        # T = 40k + 19 = 3 (mod 8): all three squares odd
        return _case_pipeline(d, 1, 4, 1, "x=1, d=14 mod 24")
    if r in (8, 20):
        # T = 20k + 9: A even, A = 2 (mod 5)
        return _case_pipeline(d, 1, 4, 0, f"x=1, d={r} mod 24")
    if r == 2:
        # T = 40k + 26: A odd, A = 4 (mod 5)
        return _case_pipeline(d, 2, 1, 1, "x=2, d=2 mod 24")
    if r in (0, 6, 12):
        T = (5 * d - 117) // 3
        return _case_pipeline(d, 3, 1, ((T - 1) // 2) % 2, f"x=3, d={r} mod 24")
    if r == 18:
        # T = 40k + 34: A odd, A = 2 (mod 5)
        return _case_pipeline(d, 6, 4, 1, "x=6, d=18 mod 24")
    raise InternalContradiction(f"no case for d={d}")


def _small_search(d: int) -> F0Solution:
    """Least primitive solution with first coordinate 0 (f0/6 = 3y^2+2yz+2z^2+2u^2)."""
    from .lattice import magnitude_key

    bound = math.isqrt(d) + 1
    rng = range(-bound, bound + 1)
    sols = [
        (0, y, z, u)
        for y in rng
        for z in rng
        for u in rng
        if f0(0, y, z, u) == d and math.gcd(y, z, u) == 1
    ]
    sols = [s for s in sols if next(c for c in s if c) > 0]
    if not sols:
        raise InternalContradiction(f"no first-coordinate-0 solution for d={d}")
    v = min(sols, key=magnitude_key)
    return F0Solution(*v, case=f"x=0, exceptional d={d}")


@lru_cache(maxsize=8)
def _enum_table(bound: int) -> dict:
    from .enumeration import image_up_to
    from .lattice import Lattice

    rep = image_up_to(Lattice(F0_GRAM, True), bound, primitive_only=True, witnesses=True)
    return rep.witnesses


def solve_hassett_enum(d: int) -> F0Solution:
    """Least primitive solution of ``f0 = d`` found by lattice enumeration.

    Least means: canonical sign (first nonzero coordinate positive), then the
    coordinate order 0, 1, -1, 2, -2, ...
    """
    if not in_hassett(d):
        raise NotInHassett(d)
    bound = 1 << max(10, (d - 1).bit_length())
    v = _enum_table(bound).get(d)
    if v is None:
        raise NotFound(f"no primitive vector of f0-norm {d}")
    return F0Solution(*v, case="enumeration")


def ternary_missed_squarefree(F, bound: int) -> list:
    """Square-free ``n <= bound`` not represented by the ternary form over Z.

    Integral representability only: a value represented over Q but not over Z
    still shows up here.
    """
    from .enumeration import image_up_to

    if F.rank != 3:
        raise ValueError("ternary form required")
    if bound < 1:
        return []
    hit = set(image_up_to(F, bound).values)
    return [n for n in range(1, bound + 1) if n not in hit and is_squarefree(n)]
