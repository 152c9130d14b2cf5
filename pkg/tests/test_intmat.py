from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from liftobs.intmat import QQ, QZ, IntMatrix, image_basis, integer_kernel, invariant_factors, smith_normal_form, solve


def matrices(max_dim=5, bound=20):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows: IntMatrix.from_rows(rows, c))
        )
    )


def leibniz_det(rows) -> int:
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inv
        for i, p in enumerate(perm):
            term *= rows[i][p]
        total += term
    return total


def minor_gcds(m: IntMatrix) -> list[int]:
    """gcd of all k x k minors for k = 1..min(rows, cols); the classical oracle."""
    out = []
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ri in itertools.combinations(range(m.rows), k):
            for ci in itertools.combinations(range(m.cols), k):
                g = gcd(g, leibniz_det([[m[i, j] for j in ci] for i in ri]))
        out.append(g)
    return out


def check_snf(m: IntMatrix) -> tuple[int, ...]:
    u, s, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    diag = [s[i, i] for i in range(min(s.rows, s.cols))]
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s[i, j] == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    assert diag[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return tuple(nz)


def test_snf_examples():
    assert check_snf(IntMatrix.diagonal([2, 3])) == (1, 6)
    u, s, v = smith_normal_form(IntMatrix.zeros(2, 2))
    assert s.is_zero() and u == IntMatrix.identity(2) and v == IntMatrix.identity(2)
    assert check_snf(IntMatrix.from_rows([[2, 4], [6, 8]])) == (2, 4)


@given(matrices(max_dim=4, bound=12))
def test_snf_matches_minor_gcd_oracle(m):
    diag = check_snf(m)
    gs = minor_gcds(m)
    # d1 * ... * dk equals the gcd of the k x k minors (zero beyond the rank)
    got = [reduce(lambda a, b: a * b, diag[:k], 1) if k <= len(diag) else 0 for k in range(1, len(gs) + 1)]
    assert got == gs


@given(matrices())
def test_snf_is_deterministic(m):
    assert smith_normal_form(m) == smith_normal_form(m)
    assert invariant_factors(m) == check_snf(m)


def test_det_matches_leibniz():
    m = IntMatrix.from_rows([[3, -1, 4], [1, 5, -9], [2, 6, 5]])
    assert m.det() == leibniz_det(m.entries)


def test_empty_and_degenerate_shapes():
    for r, c in [(0, 0), (0, 3), (3, 0), (1, 1)]:
        u, s, v = smith_normal_form(IntMatrix.zeros(r, c))
        assert (s.rows, s.cols) == (r, c) and s.is_zero()
    assert integer_kernel(IntMatrix.zeros(2, 3)).cols == 3


@given(matrices())
def test_integer_kernel_and_image(m):
    k = integer_kernel(m)
    assert (m @ k).is_zero() if k.cols else True
    assert k.cols == m.cols - len(invariant_factors(m))
    img = image_basis(m)
    # every column of m is an integer combination of the image basis, and conversely
    for col in m.columns():
        assert solve(img, list(col), 0) is not None
    for col in img.columns():
        assert solve(m, list(col), 0) is not None


def brute_solutions(a: IntMatrix, rhs, d: int):
    for x in itertools.product(range(d), repeat=a.cols):
        if all((sum(r[j] * x[j] for j in range(a.cols)) - b) % d == 0 for r, b in zip(a.entries, rhs)):
            yield x


@given(matrices(max_dim=3, bound=6), st.integers(2, 6), st.data())
def test_solve_mod_d_against_enumeration(a, d, data):
    rhs = data.draw(st.lists(st.integers(0, d - 1), min_size=a.rows, max_size=a.rows))
    x = solve(a, rhs, d)
    exists = next(brute_solutions(a, rhs, d), None) is not None
    assert (x is not None) == exists
    if x is not None:
        assert all((sum(r[j] * x[j] for j in range(a.cols)) - b) % d == 0 for r, b in zip(a.entries, rhs))


@given(matrices(max_dim=4, bound=9), st.data())
def test_solve_over_z_q_and_qz(a, data):
    x0 = data.draw(st.lists(st.integers(-5, 5), min_size=a.cols, max_size=a.cols))
    rhs = a.apply(x0)
    x = solve(a, rhs, 0)
    assert x is not None and a.apply(x) == rhs
    q = [Fraction(v, 7) for v in rhs]
    xq = solve(a, q, QQ)
    assert xq is not None and a.apply(xq) == q
    xz = solve(a, q, QZ)
    assert xz is not None
    assert all((u - v).denominator == 1 for u, v in zip(a.apply(xz), q))
    assert all(0 <= v < 1 for v in xz)


def test_solve_qz_needs_integrality_on_zero_rows():
    a = IntMatrix.from_rows([[0]])
    assert solve(a, [Fraction(1, 2)], QZ) is None
    assert solve(a, [Fraction(3)], QZ) == [0]
    assert solve(IntMatrix.from_rows([[2]]), [Fraction(1, 2)], QZ) in ([Fraction(1, 4)], [Fraction(3, 4)])


def test_text_round_trip_and_errors():
    m = IntMatrix.from_rows([[1, -2, 3], [4, 5, -6]])
    assert IntMatrix.from_text(m.to_text()) == m
    with pytest.raises(ValueError, match=r"m\.txt:3: expected 3 entries"):
        IntMatrix.from_text("2 3\n1 2 3\n4 5\n", "m.txt")
    with pytest.raises(ValueError, match=r"m\.txt:2: non-integer"):
        IntMatrix.from_text("1 1\nx\n", "m.txt")
    with pytest.raises(ValueError, match="rows cols"):
        IntMatrix.from_text("junk\n1\n", "m.txt")
