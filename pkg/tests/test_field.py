from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biprojapn.errors import DivisionByZero, DomainError
from biprojapn.field import (FieldCtx, default_poly, gcd_exponent_facts, get_field, is_irreducible,
                             load_poly_config, primitive_prime_divisor, set_poly_overrides)


# --- independent oracles ------------------------------------------------------

def schoolbook_mul(a: int, b: int, poly: int, m: int) -> int:
    """Carry-less product bit by bit, then long division by poly."""
    prod = 0
    for i in range(m):
        if (b >> i) & 1:
            prod ^= a << i
    for i in range(2 * m - 2, m - 1, -1):
        if (prod >> i) & 1:
            prod ^= poly << (i - m)
    return prod


def euclid_inverse(a: int, poly: int, m: int) -> int:
    """Extended Euclid over F_2[x]."""
    def deg(p):
        return p.bit_length() - 1

    def pmul(x, y):
        r = 0
        while y:
            if y & 1:
                r ^= x
            x <<= 1
            y >>= 1
        return r

    r0, r1, s0, s1 = poly, a, 0, 1
    while r1:
        q = 0
        r = r0
        while r and deg(r) >= deg(r1):
            shift = deg(r) - deg(r1)
            q ^= 1 << shift
            r ^= r1 << shift
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ pmul(q, s1)
    assert r0 == 1
    return schoolbook_mul(s0, 1, poly, m) if deg(s0) >= m else s0


# --- examples -----------------------------------------------------------------

def test_mul_small_examples():
    ctx = FieldCtx(3, 0b1011)
    assert ctx.mul(0b10, 0b10) == 0b100
    assert ctx.mul(0b100, 0b10) == 0b011


@pytest.mark.parametrize("m", [5, 8, 17, 20])
def test_mul_agrees_with_schoolbook(m):
    ctx = get_field(m)
    rng = random.Random(m)
    for _ in range(1000):
        a, b = rng.randrange(ctx.size), rng.randrange(ctx.size)
        assert ctx.mul(a, b) == schoolbook_mul(a, b, ctx.poly, m)
    a = np.array([rng.randrange(ctx.size) for _ in range(500)])
    b = np.array([rng.randrange(ctx.size) for _ in range(500)])
    assert all(int(v) == schoolbook_mul(int(x), int(y), ctx.poly, m) for v, x, y in zip(ctx.vmul(a, b), a, b))


def test_pow_inv_frobenius():
    ctx = get_field(5)
    assert ctx.inv(1) == 1
    with pytest.raises(DivisionByZero):
        ctx.inv(0)
    rng = random.Random(1)
    for _ in range(100):
        a = rng.randrange(1, 32)
        assert ctx.pow(a, 2 ** 5 - 2) == ctx.inv(a) == euclid_inverse(a, ctx.poly, 5)
    for a in range(32):
        assert ctx.frobenius(a, 5) == a
        assert ctx.frobenius(a, 2) == ctx.pow(a, 4)
        assert ctx.frobenius(a, -1) == ctx.frobenius(a, 4)


def test_trace():
    for m in (3, 4, 5, 6):
        ctx = get_field(m)
        assert ctx.trace(0) == 0
        assert ctx.trace(1) == m % 2
    ctx = get_field(4)
    assert sum(1 for a in ctx.elements() if ctx.trace(a) == 0) == 8
    tt = ctx.trace_table()
    assert all(tt[a] == ctx.trace(a) for a in ctx.elements())


def test_cubes():
    ctx4 = get_field(4)
    assert ctx4.is_cube(1)
    assert not ctx4.is_cube(ctx4.generator)
    with pytest.raises(DomainError):
        ctx4.is_cube(0)
    assert len(get_field(6).cubes()) == 21
    assert all(get_field(5).is_cube(a) for a in range(1, 32))


def test_unit_decompose():
    ctx = get_field(6)
    Q = 8
    seen = set()
    for x in ctx.nonzero():
        c, g = ctx.unit_decompose(x)
        assert ctx.frobenius(c, 3) == c
        assert ctx.pow(g, Q + 1) == 1
        assert ctx.mul(c, g) == x
        seen.add((c, g))
    assert len(seen) == 63 == 7 * 9
    for x in ctx.subfield_units(3):
        assert ctx.unit_decompose(x) == (x, 1)
    for x in ctx.nonzero():
        if ctx.pow(x, Q + 1) == 1:
            assert ctx.unit_decompose(x) == (1, x)
    with pytest.raises(DomainError):
        ctx.unit_decompose(0)
    with pytest.raises(DomainError):
        get_field(4).unit_decompose(3)


@pytest.mark.parametrize("m", [6, 10])
def test_norm_image_is_subfield_and_subfield_is_cubic(m):
    ctx = get_field(m)
    Q = 1 << (m // 2)
    norms = {ctx.pow(x, Q + 1) for x in ctx.nonzero()}
    K = set(ctx.subfield_units(m // 2))
    assert norms == K
    assert all(ctx.is_cube(a) for a in K)


def test_gcd_facts():
    f = gcd_exponent_facts(6, 1).as_dict()
    assert (f["q_plus_1"], f["r_minus_1"], f["q2_minus_1"], f["q_minus_1"], f["r_plus_1"], f["q_plus_1_sub"]) \
        == (3, 3, 3, 1, 1, 1)
    assert gcd_exponent_facts(10, 1).as_dict()["r_minus_1"] == 3
    import math
    assert gcd_exponent_facts(10, 3).as_dict()["r_plus_1"] == math.gcd(2 ** 8 + 1, 2 ** 10 - 1) == 1
    with pytest.raises(DomainError):
        gcd_exponent_facts(4, 1)
    with pytest.raises(DomainError):
        gcd_exponent_facts(6, 3)


def test_default_polys_and_validation():
    expect = {3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011, 10: (1 << 10) | 0b1001}
    for m, p in expect.items():
        assert default_poly(m) == p
    for m in range(1, 33):
        assert is_irreducible(default_poly(m))
    with pytest.raises(DomainError):
        FieldCtx(4, 0b10101)          # (x^2+x+1)^2
    with pytest.raises(DomainError):
        FieldCtx(33)


def test_primitive_prime_divisor():
    assert primitive_prime_divisor(5) == 31
    assert primitive_prime_divisor(6) is None
    assert primitive_prime_divisor(10) == 11
    assert primitive_prime_divisor(2) == 3


def test_poly_config(tmp_path):
    cfg = tmp_path / "polys.txt"
    cfg.write_text("# overrides\n4 = 0x19\n\n")
    table = load_poly_config(cfg)
    assert table == {4: 0x19}
    set_poly_overrides(table)
    try:
        assert get_field(4).poly == 0x19
    finally:
        set_poly_overrides({})
    assert get_field(4).poly == 0x13
    cfg.write_text("4 = 0x15\n")
    with pytest.raises(DomainError):
        load_poly_config(cfg)


# --- properties -----------------------------------------------------------------

elems = st.integers(min_value=0, max_value=(1 << 13) - 1)


@settings(max_examples=300, deadline=None)
@given(elems, elems, elems, st.integers(0, 12))
def test_field_laws(a, b, c, k):
    ctx = get_field(13)
    mul = ctx.mul
    assert mul(a, b) == mul(b, a)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, b ^ c) == mul(a, b) ^ mul(a, c)
    if a:
        assert mul(a, ctx.inv(a)) == 1
    fr = ctx.frobenius
    assert fr(a ^ b, k) == fr(a, k) ^ fr(b, k)
    assert fr(mul(a, b), k) == mul(fr(a, k), fr(b, k))
    assert ctx.trace(fr(a, k)) == ctx.trace(a)
    assert ctx.trace(a ^ b) == ctx.trace(a) ^ ctx.trace(b)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, (1 << 20) - 1), st.integers(0, (1 << 20) - 1))
def test_table_free_mul(a, b):
    ctx = get_field(20)
    assert not ctx.has_tables
    assert ctx.mul(a, b) == schoolbook_mul(a, b, ctx.poly, 20)
