import math

import pytest

from hassettkit import errors
from hassettkit.arithmetic import (
    CASE_FIRST_COORD,
    SMALL_EXCEPTIONS,
    f0,
    factorize,
    in_hassett,
    is_nontrivial,
    lagrange5_down,
    lagrange5_up,
    lower_five_height,
    mod3_adjust,
    mod3_invariants_check,
    nontrivial_three_squares,
    solve_hassett_enum,
    solve_hassett_proof,
    ternary_missed_squarefree,
    three_squares,
    two_squares,
)
from hassettkit.lattice import validate

from oracles import box, box_radius, image, qform, squarefree

F0 = [[8, 6, 0, 6], [6, 18, 6, 0], [0, 6, 12, 0], [6, 0, 0, 12]]


def expected_first_coord(d):
    if d == 12 or d in SMALL_EXCEPTIONS:
        return 0
    return CASE_FIRST_COORD[d % 24]


def test_in_hassett():
    assert [d for d in range(0, 40) if in_hassett(d)] == [8, 12, 14, 18, 20, 24, 26, 30, 32, 36, 38]
    assert not in_hassett(6)
    assert not in_hassett(2)


def test_f0_matches_gram():
    for v in box(4, 2):
        assert f0(*v) == qform(F0, v)
    assert f0(0, 0, 0, 1) == 12
    assert f0(1, 0, 0, 0) == 8


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


def test_two_squares():
    assert two_squares(13) == (2, 3)
    assert two_squares(21) is None
    assert two_squares(65) == (1, 8)
    assert two_squares(0) == (0, 0)


def test_three_squares():
    assert three_squares(3) == (1, 1, 1)
    assert three_squares(7) is None
    assert three_squares(19) == (1, 3, 3)
    for n in range(300):
        t = three_squares(n)
        if t is None:
            m = n
            while m and m % 4 == 0:
                m //= 4
            assert m % 8 == 7
        else:
            assert sum(x * x for x in t) == n


def test_nontrivial_three_squares_examples():
    assert nontrivial_three_squares(25) == (0, 3, 4)
    assert nontrivial_three_squares(9) == (1, 2, 2)
    with pytest.raises(errors.OnlyTrivial):
        nontrivial_three_squares(4)
    with pytest.raises(errors.OnlyTrivial):
        nontrivial_three_squares(1)
    with pytest.raises(errors.NotRepresentable):
        nontrivial_three_squares(28)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 19, 23, 29, 31, 43, 47])
def test_prime_square_identities(p):
    t = nontrivial_three_squares(p * p)
    assert sum(x * x for x in t) == p * p
    assert is_nontrivial(t)


def test_lagrange5_examples():
    assert lagrange5_down(8, 1) == (3, 2)
    assert lagrange5_up(3, 2) == (8, -1)
    assert lagrange5_down(5, 0) == (2, 1)
    with pytest.raises(errors.NotDivisibleBy5):
        lagrange5_down(1, 1)


def test_lower_five_height_examples():
    assert lower_five_height(13) == (4, 7)
    assert lower_five_height(1) == (1, 2)
    assert lower_five_height(2) == (1, 3)
    with pytest.raises(errors.NotRepresentable):
        lower_five_height(3)
    with pytest.raises(ValueError):
        lower_five_height(0)


@pytest.mark.parametrize("n", [5, 25, 125, 650, 3125, 5 * 13 * 25])
def test_lower_five_height_with_fives(n):
    x, y = lower_five_height(n)
    assert x * x + y * y == 5 * n
    assert (x * x % 5, y * y % 5) == (1, 4)


def test_mod3_adjust_examples():
    assert mod3_adjust(3, 3) == (7, -1)
    assert mod3_adjust(1, 1) == (1, 1)
    assert mod3_adjust(2, 2) == (2, 2)
    with pytest.raises(errors.NotApplicable):
        mod3_adjust(0, 2)


def test_mod3_adjust_deep():
    # (9, 9): both step choices keep a coordinate divisible by 3 but the
    # 3-adic valuation of the gcd still drops
    x, y = mod3_adjust(9, 9)
    assert x * x + 5 * y * y == 81 + 405
    assert x % 3 and y % 3


def test_mod3_invariants_examples():
    assert mod3_invariants_check((3, 3), (7, -1))
    assert mod3_invariants_check((2, 2), (2, -2))
    with pytest.raises(errors.ValueMismatch):
        mod3_invariants_check((1, 1), (2, 2))


def test_solver_examples():
    assert solve_hassett_proof(12).vector == (0, 0, 0, 1)
    s = solve_hassett_proof(14)
    assert s.value == 14 and s.primitive and abs(s.x) == 1
    s = solve_hassett_proof(26)
    assert s.value == 26 and s.primitive and abs(s.x) == 2
    assert solve_hassett_enum(8).vector == (1, 0, 0, 0)
    assert solve_hassett_enum(18).vector == (0, 1, 0, 0)
    assert solve_hassett_enum(14).vector == (1, -1, 0, 0)
    for bad in (10, 16, 6, 2, 0, -8):
        with pytest.raises(errors.NotInHassett):
            solve_hassett_proof(bad)
        with pytest.raises(errors.NotInHassett):
            solve_hassett_enum(bad)


@pytest.mark.parametrize("d", [d for d in range(8, 600) if in_hassett(d)])
def test_solver_cases(d):
    s = solve_hassett_proof(d)
    assert f0(*s.vector) == d
    assert s.primitive
    assert abs(s.x) == expected_first_coord(d)


def test_small_exceptions_have_no_case_solution():
    # brute force: no primitive solution with the case's first coordinate
    for d in SMALL_EXCEPTIONS:
        x = CASE_FIRST_COORD[d % 24]
        r = math.isqrt(d) + 2
        hits = [
            v for v in box(3, r) if f0(x, *v) == d and math.gcd(x, *v) == 1
        ]
        assert hits == [], d


def test_solution_dict():
    d = solve_hassett_proof(12).to_dict()
    assert d == {"vector": [0, 0, 0, 1], "value": 12, "gcd": 1, "case": "d=12"}


def test_ternary_examples():
    I3 = validate([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert ternary_missed_squarefree(I3, 50) == [7, 15, 23, 31, 39, 47]
    assert ternary_missed_squarefree(I3, 1) == []
    gram = [[2, 0, 0], [0, 3, 0], [0, 0, 10]]
    hit = set(image(gram, 30, box_radius(gram, 30)))
    want = [n for n in range(1, 31) if n not in hit and squarefree(n)]
    assert ternary_missed_squarefree(validate(gram), 30) == want


def test_ternary_needs_rank_three(k8):
    with pytest.raises(ValueError):
        ternary_missed_squarefree(k8, 10)
