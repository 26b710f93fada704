from __future__ import annotations

import random

import numpy as np
import pytest

from biprojapn.apn import TruthTable, to_truth_table
from biprojapn.biproj import BiprojectivePair, evaluate
from biprojapn.classify import f4_canonical
from biprojapn.equivalence import (ELMap, apply_el, graph_set, is_graph_equiv, is_graph_equiv_setwise, mono,
                                   z_element, z_subgroup_member)
from biprojapn.equivalence.elmap import ZERO, lp, lp_eval
from biprojapn.errors import NonInvertible
from biprojapn.families import enumerate_family, make_family
from biprojapn.field import get_field


def random_pair(rng, ctx):
    k, l = rng.randrange(ctx.m), rng.randrange(ctx.m)
    c = [rng.randrange(ctx.size) for _ in range(8)]
    return BiprojectivePair(ctx, k, l, tuple(c[:4]), tuple(c[4:]))


def random_elmap(rng, ctx) -> ELMap:
    """Monomial M and L of one degree each, N an arbitrary linearized block."""
    while True:
        t, s = rng.randrange(ctx.m), rng.randrange(ctx.m)
        M = tuple(mono(ctx, rng.randrange(ctx.size), t) for _ in range(4))
        L = tuple(mono(ctx, rng.randrange(ctx.size), s) for _ in range(4))
        N = tuple(lp(ctx, [(rng.randrange(ctx.size), rng.randrange(ctx.m)) for _ in range(2)]) for _ in range(4))
        E = ELMap(ctx, M, N, L)
        if E.is_invertible():
            return E


def block_apply(ctx, blk, x, y):
    return lp_eval(ctx, blk[0], x) ^ lp_eval(ctx, blk[1], y), lp_eval(ctx, blk[2], x) ^ lp_eval(ctx, blk[3], y)


def transport(F: BiprojectivePair, E: ELMap) -> TruthTable:
    """Table of G with G(M u) = N u + L F(u), built point by point."""
    ctx = F.ctx
    m = ctx.m
    vals = np.zeros(1 << (2 * m), dtype=np.int64)
    for x in range(ctx.size):
        for y in range(ctx.size):
            mx, my = block_apply(ctx, E.M, x, y)
            nx, ny = block_apply(ctx, E.N, x, y)
            lx, ly = block_apply(ctx, E.L, *evaluate(F, x, y))
            vals[(mx << m) | my] = ((nx ^ lx) << m) | (ny ^ ly)
    return TruthTable(2 * m, m, ctx.poly, vals)


def test_identity_and_n_term():
    ctx = get_field(3)
    F = make_family("gold", ctx, 1).pair
    E = ELMap.identity(ctx)
    assert np.array_equal(apply_el(E, graph_set(F)), graph_set(F))
    assert is_graph_equiv(F, F, E)
    # adding N = diag(x, 0) adds the affine term (x, 0) to the output
    En = ELMap(ctx, E.M, (mono(ctx, 1), ZERO, ZERO, ZERO), E.L)
    G = transport(F, En)
    assert all(G.at(x, y) == (evaluate(F, x, y)[0] ^ x, evaluate(F, x, y)[1]) for x in range(8) for y in range(8))
    assert is_graph_equiv(F, G, En) and is_graph_equiv_setwise(F, G, En)
    assert not is_graph_equiv(F, F, En)


def test_random_maps_and_inverse():
    rng = random.Random(5)
    for m in (3, 4):
        ctx = get_field(m)
        for _ in range(6):
            F = random_pair(rng, ctx)
            E = random_elmap(rng, ctx)
            G = transport(F, E)
            assert is_graph_equiv(F, G, E)
            assert is_graph_equiv_setwise(F, G, E)
            Einv = E.inverse()
            assert is_graph_equiv(G, to_truth_table(F), Einv)
            assert is_graph_equiv(G, to_truth_table(F), E.matrix().inverse())
            assert E.compose(Einv).matrix() == ELMap.identity(ctx).matrix()


def test_matrix_and_polynomial_routes_compose_alike():
    rng = random.Random(6)
    ctx = get_field(4)
    for _ in range(10):
        A, B = random_elmap(rng, ctx), random_elmap(rng, ctx)
        assert A.compose(B).matrix() == A.matrix().compose(B.matrix())


def test_pointwise_and_setwise_agree_on_mismatches():
    rng = random.Random(7)
    ctx = get_field(3)
    F, G = random_pair(rng, ctx), random_pair(rng, ctx)
    for _ in range(30):
        E = random_elmap(rng, ctx)
        assert is_graph_equiv(F, G, E) == is_graph_equiv_setwise(F, G, E)


def test_singular_map_rejected():
    ctx = get_field(3)
    E = ELMap(ctx, (mono(ctx, 1), mono(ctx, 1), mono(ctx, 1), mono(ctx, 1)), (ZERO,) * 4,
              ELMap.identity(ctx).L)
    F = make_family("gold", ctx, 1).pair
    with pytest.raises(NonInvertible):
        is_graph_equiv(F, F, E)
    with pytest.raises(NonInvertible):
        apply_el(E, graph_set(F))


def _qbar_swap(ctx, kbar, t4):
    return ELMap(ctx, (ZERO, mono(ctx, 1, kbar), mono(ctx, 1, kbar), ZERO), (ZERO,) * 4,
                 (mono(ctx, 1), ZERO, ZERO, mono(ctx, 1, t4)))


@pytest.mark.parametrize("tag,fixed,printed", [("f1", 1, 4), ("f2", 2, 1)])
def test_qbar_witnesses_f1_f2(tag, fixed, printed):
    # F_qbar -> F_q with M = anti-diag(x^qbar, x^qbar), L = diag(x, L4)
    ctx = get_field(5)
    k, kbar = 1, 4
    Fq, Fb = make_family(tag, ctx, k).pair, make_family(tag, ctx, kbar).pair
    assert is_graph_equiv(Fb, Fq, _qbar_swap(ctx, kbar, fixed))
    assert not is_graph_equiv(Fb, Fq, _qbar_swap(ctx, kbar, printed))


def test_f4_qbar_witness():
    ctx = get_field(6)
    m, h, k = 6, 3, 1
    Q = 1 << h
    fixed = printed = 0
    for inst in enumerate_family("f4", ctx):
        if inst.k != k:
            continue
        B, a = inst.param("B"), inst.param("a")
        a2 = ctx.div(ctx.pow(B, Q + 1), a)
        target = make_family("f4", ctx, m - k, B=B, a=a2).pair
        M = (mono(ctx, 1, m - k), ZERO, ZERO, mono(ctx, 1, m - k))
        for coef, name in ((ctx.div(a, B), "fixed"), (ctx.div(ctx.pow(B, Q), a), "printed")):
            E = ELMap(ctx, M, (ZERO,) * 4, (mono(ctx, 1), ZERO, ZERO, mono(ctx, coef, h)))
            ok = is_graph_equiv(target, inst.pair, E)
            if name == "fixed":
                assert ok, inst.label()
                fixed += 1
            else:
                printed += ok
    assert fixed == 252
    assert printed < fixed


def test_f4_canonical_witnesses_verify():
    ctx = get_field(6)
    insts = enumerate_family("f4", ctx)
    for inst in insts[::7]:
        (k, B, a), w = f4_canonical(ctx, inst.k, inst.param("B"), inst.param("a"))
        canon = make_family("f4", ctx, k, B=B, a=a).pair
        assert is_graph_equiv(inst.pair, canon, w)


def test_z_subgroup():
    for tag, m, params in (("f1", 5, {}), ("taniguchi", 4, None), ("gold", 3, {})):
        ctx = get_field(m)
        F = (make_family(tag, ctx, 1, **params) if params is not None else enumerate_family(tag, ctx)[0]).pair
        for a in ctx.nonzero():
            assert z_subgroup_member(F, a)
            assert is_graph_equiv_setwise(F, F, z_element(F, a))


def test_conjugated_automorphism():
    # E o z(a) o E^-1 is an automorphism of the transported function
    rng = random.Random(11)
    ctx = get_field(4)
    F = enumerate_family("taniguchi", ctx)[0].pair
    E = random_elmap(rng, ctx)
    G = transport(F, E)
    for a in (1, 2, 7, 13):
        C = E.compose(z_element(F, a)).compose(E.inverse())
        assert is_graph_equiv(G, G, C)


def test_text_roundtrip():
    rng = random.Random(3)
    ctx = get_field(5)
    for _ in range(10):
        E = random_elmap(rng, ctx)
        assert ELMap.from_text(ctx, E.to_text()) == E
    assert ELMap.from_text(ctx, ELMap.identity(ctx).to_text()) == ELMap.identity(ctx)
