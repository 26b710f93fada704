from __future__ import annotations

import pytest

from biprojapn.biproj import evaluate
from biprojapn.equivalence import ELMap, centralizer_search, condition_c, is_graph_equiv, mono
from biprojapn.equivalence.centralizer import centralizer_elements, classify_element
from biprojapn.equivalence.elmap import ZERO, lp_eval
from biprojapn.errors import PreconditionViolated, TooLarge
from biprojapn.families import enumerate_family, make_family
from biprojapn.field import get_field


def commutes_with_scalars(ctx, E: ELMap) -> bool:
    """M has no Frobenius twist, so M(a u) = a M(u) for all a."""
    return all(t == 0 for blk in E.M for _, t in blk)


@pytest.mark.parametrize("tag,expected", [("taniguchi", 1), ("f1", 3), ("f2", 3), ("carlet", 3)])
def test_indices_m5(tag, expected):
    ctx = get_field(5)
    inst = make_family(tag, ctx, 1) if tag in ("f1", "f2") else enumerate_family(tag, ctx)[0]
    norm = centralizer_search(inst.pair)
    exh = centralizer_search(inst.pair, "exhaustive")
    assert norm.index == exh.index == expected
    assert norm.size == exh.size == 31 * expected
    assert norm.classes == exh.classes
    assert sum(norm.classes.values()) == norm.size
    for E in centralizer_elements(inst.pair, norm):
        assert commutes_with_scalars(ctx, E)
        assert is_graph_equiv(inst.pair, inst.pair, E)


def test_f1_swap_classes():
    # besides Z, the A and B cosets: M = [[c, c], [c, 0]] and [[0, c], [c, c]]
    ctx = get_field(5)
    F = make_family("f1", ctx, 1).pair
    rep = centralizer_search(F)
    assert rep.classes == {"Z": 31, "Z_omega": 0, "A": 31, "B": 31, "other": 0}
    assert sorted(classify_element(ctx, s.c) for s in rep.representatives) == ["A", "B", "Z"]
    for s, E in zip(rep.representatives, centralizer_elements(F, rep)):
        c1, c2, c3, c4 = s.c
        for x in range(0, 32, 3):
            for y in range(0, 32, 5):
                lhs = evaluate(F, ctx.mul(c1, x) ^ ctx.mul(c2, y), ctx.mul(c3, x) ^ ctx.mul(c4, y))
                f, g = evaluate(F, x, y)
                rhs = (lp_eval(ctx, E.L[0], f) ^ lp_eval(ctx, E.L[1], g),
                       lp_eval(ctx, E.L[2], f) ^ lp_eval(ctx, E.L[3], g))
                assert lhs == rhs


def test_m6_omega_class():
    ctx = get_field(6)
    for tag in ("f4", "zp"):
        F = enumerate_family(tag, ctx)[0].pair
        rep = centralizer_search(F)
        assert rep.index == 3
        assert rep.classes["Z"] == 63 and rep.classes["Z_omega"] == 126
    w = ctx.omega()
    assert classify_element(ctx, (1, 0, 0, w)) == "Z_omega"
    assert classify_element(ctx, (5, 0, 0, 5)) == "Z"
    assert classify_element(ctx, (1, 1, 0, 1)) == "other"


def test_m6_exhaustive_agrees():
    ctx = get_field(6)
    F = enumerate_family("f4", ctx)[0].pair
    assert centralizer_search(F, "exhaustive").classes == centralizer_search(F).classes


def test_condition_c():
    ctx = get_field(5)
    ok, info = condition_c(make_family("f1", ctx, 1).pair)
    assert ok and "p=31" in info and "index=3" in info
    ok, info = condition_c(enumerate_family("f4", get_field(6))[0].pair)
    assert not ok


def test_errors():
    with pytest.raises(PreconditionViolated):
        centralizer_search(make_family("gold", get_field(3), 1).pair)
    with pytest.raises(TooLarge):
        centralizer_search(make_family("f1", get_field(8), 1).pair, "exhaustive")
    with pytest.raises(ValueError):
        centralizer_search(make_family("f1", get_field(5), 1).pair, "magic")


def test_scalar_maps_generate_z():
    ctx = get_field(5)
    F = make_family("f2", ctx, 1).pair
    a = 9
    E = ELMap(ctx, (mono(ctx, a), ZERO, ZERO, mono(ctx, a)), (ZERO,) * 4,
              (mono(ctx, ctx.pow(a, 3)), ZERO, ZERO, mono(ctx, ctx.pow(a, 9))))
    assert is_graph_equiv(F, F, E)
