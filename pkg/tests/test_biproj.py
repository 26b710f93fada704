from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biprojapn.biproj import (INF, BiprojectivePair, ProjectivePolynomial, build_delta_system, delta_direct,
                              evaluate, parse_coeffs, rootless_check)
from biprojapn.errors import ConditionViolated, DomainError
from biprojapn.families import (enumerate_family, enumerate_params, family_supported, make_family,
                                normalize_tag, parse_instance, valid_k)
from biprojapn.field import get_field


def monomial_sum(ctx, k, p, x, y):
    """Each of the four monomials via pow, summed."""
    q = 1 << k
    pw = ctx.pow
    mul = ctx.mul
    return (mul(p[0], pw(x, q + 1)) ^ mul(p[1], mul(pw(x, q), y))
            ^ mul(p[2], mul(x, pw(y, q))) ^ mul(p[3], pw(y, q + 1)))


def random_pair(rng, ctx):
    k, l = rng.randrange(ctx.m), rng.randrange(ctx.m)
    c = [rng.randrange(ctx.size) for _ in range(8)]
    return BiprojectivePair(ctx, k, l, tuple(c[:4]), tuple(c[4:]))


def test_evaluate_examples():
    ctx = get_field(5)
    rng = random.Random(3)
    for _ in range(20):
        assert evaluate(random_pair(rng, ctx), 0, 0) == (0, 0)
    F = BiprojectivePair(ctx, 1, 2, (1, 0, 0, 0), (0, 0, 0, 1))
    for x in range(32):
        for y in (0, 1, 7, 30):
            assert evaluate(F, x, y) == (ctx.pow(x, 3), ctx.pow(y, 5))


def test_evaluate_against_monomial_oracle():
    ctx = get_field(5)
    rng = random.Random(5)
    for _ in range(10):
        F = random_pair(rng, ctx)
        for _ in range(100):
            x, y = rng.randrange(32), rng.randrange(32)
            assert evaluate(F, x, y) == (monomial_sum(ctx, F.k, F.coeffs0, x, y),
                                         monomial_sum(ctx, F.l, F.coeffs1, x, y))


def displayed_delta(ctx, k, p, u, x, y):
    a, b, c, d = p
    q = 1 << k
    pw, mul = ctx.pow, ctx.mul
    if u is INF:
        return mul(a, pw(x, q)) ^ mul(a, x) ^ mul(c, pw(y, q)) ^ mul(b, y)
    uq = pw(u, q)
    return (mul(mul(a, u) ^ b, pw(x, q)) ^ mul(mul(a, uq) ^ c, x)
            ^ mul(mul(c, u) ^ d, pw(y, q)) ^ mul(mul(b, uq) ^ d, y))


def test_delta_special_points():
    ctx = get_field(5)
    F = BiprojectivePair(ctx, 1, 2, (3, 5, 7, 11), (13, 17, 19, 23))
    a0, b0, c0, d0 = F.coeffs0
    D0 = build_delta_system(F, 0)
    Dinf = build_delta_system(F, INF)
    mul, fr = ctx.mul, ctx.frobenius
    for x in range(32):
        for y in range(0, 32, 3):
            assert D0.apply(x, y)[0] == mul(b0, fr(x, 1)) ^ mul(c0, x) ^ mul(d0, fr(y, 1)) ^ mul(d0, y)
            assert Dinf.apply(x, y)[0] == mul(a0, fr(x, 1)) ^ mul(a0, x) ^ mul(c0, fr(y, 1)) ^ mul(b0, y)


def test_delta_matrix_matches_formula_exhaustively():
    ctx = get_field(5)
    rng = random.Random(11)
    for u in [0, INF] + [rng.randrange(1, 32) for _ in range(4)]:
        F = random_pair(rng, ctx)
        D = build_delta_system(F, u)
        for x in range(32):
            for y in range(32):
                want = (displayed_delta(ctx, F.k, F.coeffs0, u, x, y), displayed_delta(ctx, F.l, F.coeffs1, u, x, y))
                assert D.apply(x, y) == want == delta_direct(F, u, x, y)


def test_delta_is_difference_of_f():
    # Delta_u(x, y) is the derivative of F at (u, 1) (or (1, 0) at infinity), minus F(x, y)
    ctx = get_field(4)
    rng = random.Random(2)
    F = random_pair(rng, ctx)
    for u in [INF, 0, 3, 9]:
        a = (1, 0) if u is INF else (u, 1)
        D = build_delta_system(F, u)
        for x in range(16):
            for y in range(16):
                fx = evaluate(F, x ^ a[0], y ^ a[1])
                f0 = evaluate(F, x, y)
                fa = evaluate(F, *a)
                assert D.apply(x, y) == (fx[0] ^ f0[0] ^ fa[0], fx[1] ^ f0[1] ^ fa[1])


def test_rootless_examples():
    ctx = get_field(4)
    u = next(a for a in ctx.nonzero() if not ctx.is_cube(a))
    assert rootless_check(ProjectivePolynomial(ctx, 1, (1, 0, 0, u)))
    assert not rootless_check(ProjectivePolynomial(ctx, 1, (1, 0, 0, 1)))
    with pytest.raises(DomainError):
        rootless_check(ProjectivePolynomial(ctx, 1, (0, 1, 0, 1)))


def test_rootless_count_m3_scan():
    ctx = get_field(3)
    xs = list(range(8))
    count = 0
    for p1 in range(1, 8):
        for p2 in range(8):
            for p3 in range(8):
                for p4 in range(8):
                    if all(monomial_sum(ctx, 1, (p1, p2, p3, p4), x, 1) for x in xs):
                        count += 1
    assert count == 1176 == (9 * 8 * 49) // 3


def test_make_family_f4():
    ctx = get_field(6)
    B = next(b for b in ctx.nonzero() if not ctx.is_cube(b))
    inst = make_family("f4", ctx, 1, B=B, a=1)
    assert inst.pair.k == 1 and inst.pair.l == 4
    cube = next(b for b in ctx.nonzero() if ctx.is_cube(b) and b != 1)
    with pytest.raises(ConditionViolated) as e:
        make_family("f4", ctx, 1, B=cube, a=1)
    assert e.value.condition == "B non-cube"
    with pytest.raises(ConditionViolated):
        make_family("f4", get_field(5), 1, B=2, a=1)


def test_taniguchi_count_matches_root_scan():
    ctx = get_field(5)
    admissible = [d for d in range(32) if all(monomial_sum(ctx, 1, (1, 0, 1, d), x, 1) for x in range(32))]
    got = [p["d"] for k, p in enumerate_params("taniguchi", ctx) if k == 1]
    assert got == admissible
    with pytest.raises(ConditionViolated) as e:
        make_family("taniguchi", ctx, 1, d=next(d for d in range(32) if d not in admissible))
    assert "rootless" in e.value.condition


def test_taniguchi_c_normalization():
    ctx = get_field(5)
    inst = make_family("taniguchi", ctx, 1, c=7, d=9)
    # y -> s y with s^q = 1/c turns (1, 0, c, d) into (1, 0, 1, d')
    s = ctx.frobenius(ctx.inv(7), -1)
    d2 = inst.param("d")
    for x in range(32):
        assert monomial_sum(ctx, 1, (1, 0, 7, 9), x, s) == monomial_sum(ctx, 1, (1, 0, 1, d2), x, 1)


def test_family_instances_revalidate():
    for m in (3, 4, 5, 6):
        ctx = get_field(m)
        for tag in ("carlet", "taniguchi", "zp", "f1", "f2", "f4", "gold"):
            if family_supported(tag, m) or (tag == "carlet" and m > 5):
                continue
            insts = enumerate_family(tag, ctx)
            assert insts, (tag, m)
            for inst in insts[:: max(1, len(insts) // 25)]:
                P = inst.pair
                if tag in ("carlet", "taniguchi"):
                    assert rootless_check(P.g if tag == "carlet" else P.f)
                if tag == "f4":
                    assert not ctx.is_cube(inst.param("B"))
                assert parse_instance(ctx, inst.label()) == inst


def test_enumerate_counts():
    assert valid_k("f1", 5) == [1, 2, 3, 4]
    assert len(enumerate_family("f1", get_field(5))) == 4
    f4 = enumerate_family("f4", get_field(6))
    ctx = get_field(6)
    n_expected = 0
    for k in (1, 5):
        q, r = 1 << k, 1 << (k + 3)
        for B in ctx.nonzero():
            if ctx.is_cube(B):
                continue
            for a in ctx.subfield_units(3):
                n_expected += ctx.pow(B, q + r) != ctx.pow(a, q + 1)
    assert len(f4) == n_expected
    assert {i.k for i in f4} == {1, 5}


def test_carlet_count_is_rootless_count():
    ctx = get_field(5)
    got = sum(1 for k, _ in enumerate_params("carlet", ctx) if k == 1)
    scan = 0
    for b in range(32):
        for c in range(32):
            vals = {monomial_sum(ctx, 1, (1, b, c, 0), x, 1) for x in range(32)}
            scan += 32 - len(vals)
    assert got == scan


def test_zp_condition():
    ctx = get_field(4)
    bad = {ctx.mul(ctx.pow(a, 3), ctx.pow(b ^ ctx.frobenius(b, 1), (1 - 4) % 15))
           for a in range(16) for b in range(16) if b ^ ctx.frobenius(b, 1)}
    for d in range(1, 16):
        if d in bad:
            with pytest.raises(ConditionViolated):
                make_family("zp", ctx, 1, j=2, d=d)
        else:
            make_family("zp", ctx, 1, j=2, d=d)


def test_tags_and_support():
    assert normalize_tag("ZhouPott") == "zp"
    assert normalize_tag("F4") == "f4"
    with pytest.raises(DomainError):
        normalize_tag("kim")
    assert family_supported("f4", 5)
    assert family_supported("f2", 6)
    assert family_supported("f4", 10) is None


def test_text_roundtrip():
    ctx = get_field(6)
    rng = random.Random(9)
    for _ in range(10):
        F = random_pair(rng, ctx)
        assert BiprojectivePair.from_text(F.to_text()) == F
    with pytest.raises(DomainError):
        BiprojectivePair.from_text("m=3 k=1")
    assert parse_coeffs("1,0,0x3,7", get_field(3)) == (1, 0, 3, 7)
    with pytest.raises(DomainError):
        parse_coeffs("1,0,9,0", get_field(3))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 63), st.integers(0, 63), st.integers(0, 63))
def test_bidegree_identity(seed, t, x, y):
    ctx = get_field(6)
    F = random_pair(random.Random(seed), ctx)
    f, g = evaluate(F, x, y)
    ft, gt = evaluate(F, ctx.mul(t, x), ctx.mul(t, y))
    assert ft == ctx.mul(ctx.pow(t, (1 << F.k) + 1), f)
    assert gt == ctx.mul(ctx.pow(t, (1 << F.l) + 1), g)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_delta_rows_are_linear(seed):
    rng = random.Random(seed)
    ctx = get_field(4)
    F = random_pair(rng, ctx)
    u = rng.choice([INF] + list(range(16)))
    D = build_delta_system(F, u)
    for _ in range(20):
        x1, y1, x2, y2 = (rng.randrange(16) for _ in range(4))
        a, b = D.apply(x1, y1), D.apply(x2, y2)
        assert D.apply(x1 ^ x2, y1 ^ y2) == (a[0] ^ b[0], a[1] ^ b[1])
    assert np.all(np.array(D.f_rows) < 16)
