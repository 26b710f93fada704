from __future__ import annotations

import random

import numpy as np
import pytest

from biprojapn.apn import (TruthTable, apn_naive, apn_naive_batch, apn_projective, apn_projective_batch,
                           is_apn_naive, projective_nullities, read_truth_table, table_from_function,
                           to_truth_table, write_truth_table)
from biprojapn.biproj import BiprojectivePair, evaluate
from biprojapn.errors import DomainError
from biprojapn.families import enumerate_family, family_arrays, make_family
from biprojapn.field import get_field


def brute_spectrum(T: TruthTable) -> dict[int, int]:
    """Differential spectrum by explicit loops over a != 0 and x."""
    N = 1 << T.n
    vals = [int(v) for v in T.values]
    out: dict[int, int] = {}
    for a in range(1, N):
        counts = [0] * N
        for x in range(N):
            counts[vals[x ^ a] ^ vals[x]] += 1
        for c in counts:
            out[c] = out.get(c, 0) + 1
    return out


def random_pair(rng, ctx):
    k, l = rng.randrange(ctx.m), rng.randrange(ctx.m)
    c = [rng.randrange(ctx.size) for _ in range(8)]
    return BiprojectivePair(ctx, k, l, tuple(c[:4]), tuple(c[4:]))


def test_zero_function():
    ctx = get_field(3)
    T = table_from_function(ctx, lambda x, y: (0, 0))
    ok, spec = apn_naive(T)
    assert not ok
    assert spec.counts == {0: 63 * 63, 64: 63}
    assert not is_apn_naive(T)


def test_gold_m3_spectrum():
    T = to_truth_table(make_family("gold", get_field(3), 1).pair)
    ok, spec = apn_naive(T)
    assert ok and spec.uniformity == 2
    assert spec.counts == {0: 63 * 32, 2: 63 * 32} == brute_spectrum(T)


def test_linear_map_not_apn():
    ctx = get_field(3)
    F = BiprojectivePair(ctx, 1, 1, (0, 0, 0, 0), (0, 0, 0, 0))
    assert not apn_projective(F)
    T = table_from_function(ctx, lambda x, y: (ctx.frobenius(x, 1), y))
    assert not is_apn_naive(T)


def test_truth_table_matches_evaluate():
    ctx = get_field(4)
    rng = random.Random(4)
    for _ in range(5):
        F = random_pair(rng, ctx)
        T = to_truth_table(F)
        for _ in range(50):
            x, y = rng.randrange(16), rng.randrange(16)
            assert T.at(x, y) == evaluate(F, x, y)
        assert T == table_from_function(ctx, lambda x, y: evaluate(F, x, y))


def test_f4_sample_is_apn():
    ctx = get_field(6)
    inst = enumerate_family("f4", ctx)[0]
    assert apn_projective(inst.pair)
    assert is_apn_naive(to_truth_table(inst.pair))
    assert np.all(projective_nullities(inst.pair) == 1)


def test_duplicated_component_fails():
    ctx = get_field(5)
    F = make_family("f1", ctx, 1).pair
    dup = BiprojectivePair(ctx, F.k, F.k, F.coeffs0, F.coeffs0)
    assert not apn_projective(dup)
    assert not is_apn_naive(to_truth_table(dup))


def test_single_bad_point_is_caught():
    # a pair whose Delta systems fail at exactly one point of the projective line
    ctx = get_field(3)
    rng = random.Random(0)
    for _ in range(20000):
        F = random_pair(rng, ctx)
        nul = projective_nullities(F)
        if np.count_nonzero(nul != 1) == 1:
            break
    else:
        pytest.fail("no single-failure pair found")
    assert len(nul) == 2 ** 3 + 1
    assert not apn_projective(F)
    assert not is_apn_naive(to_truth_table(F))


def test_methods_agree_on_random_pairs():
    rng = random.Random(12)
    seen = {True: 0, False: 0}
    for m, trials in ((2, 300), (3, 300), (4, 40), (5, 10)):
        ctx = get_field(m)
        for _ in range(trials):
            F = random_pair(rng, ctx)
            v = apn_projective(F)
            assert v == is_apn_naive(to_truth_table(F)), F.to_text()
            seen[v] += 1
    assert seen[True] > 0 and seen[False] > 0


def test_methods_agree_with_brute_force_m2():
    rng = random.Random(2)
    ctx = get_field(2)
    for _ in range(30):
        F = random_pair(rng, ctx)
        T = to_truth_table(F)
        brute = brute_spectrum(T)
        ok, spec = apn_naive(T)
        assert spec.counts == brute
        assert apn_projective(F) == ok == (max(brute) == 2)


@pytest.mark.parametrize("tag,m", [("f1", 5), ("taniguchi", 4), ("carlet", 4), ("zp", 4), ("f2", 5)])
def test_batch_kernels_agree(tag, m):
    ctx = get_field(m)
    ks, ls, coeffs = family_arrays(tag, ctx)
    proj = apn_projective_batch(ctx, ks, ls, coeffs, threads=2)
    naive = apn_naive_batch(ctx, ks, ls, coeffs)
    assert proj.all() and naive.all()
    assert len(proj) == len(enumerate_family(tag, ctx))


def test_batch_detects_failures():
    ctx = get_field(3)
    rng = random.Random(8)
    pairs = [random_pair(rng, ctx) for _ in range(200)]
    ks = np.array([F.k for F in pairs])
    ls = np.array([F.l for F in pairs])
    coeffs = np.array([F.coeff_vector for F in pairs])
    want = np.array([apn_projective(F) for F in pairs])
    assert np.array_equal(apn_projective_batch(ctx, ks, ls, coeffs), want)
    assert np.array_equal(apn_naive_batch(ctx, ks, ls, coeffs), want)


def test_binary_roundtrip(tmp_path):
    for m in (2, 3, 5):
        F = make_family("gold", get_field(m), 1).pair if m % 2 else random_pair(random.Random(m), get_field(m))
        T = to_truth_table(F)
        p = tmp_path / f"t{m}.bin"
        write_truth_table(T, p)
        assert read_truth_table(p) == T
    raw = p.read_bytes()
    (tmp_path / "bad.bin").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(DomainError):
        read_truth_table(tmp_path / "bad.bin")
    (tmp_path / "short.bin").write_bytes(raw[:-3])
    with pytest.raises(DomainError):
        read_truth_table(tmp_path / "short.bin")
