"""The seven known biprojective APN families and their side conditions.

Each constructor validates its conditions and raises ConditionViolated
naming the first one that fails.  ``enumerate_family`` lists every admissible
parameter tuple at a given m in a fixed order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .biproj import BiprojectivePair, ProjectivePolynomial, proj_eval_many, rootless_check
from .errors import ConditionViolated, DomainError, UnsupportedM
from .field import FieldCtx

FAMILIES = ("gold", "carlet", "taniguchi", "zp", "f1", "f2", "f4")

DISPLAY_NAMES = {
    "gold": "Gold", "carlet": "Carlet", "taniguchi": "Taniguchi", "zp": "ZhouPott",
    "f1": "F1", "f2": "F2", "f4": "F4",
}

_ALIASES = {"zhoupott": "zp", "zhou-pott": "zp", "g": "gold", "c": "carlet", "t": "taniguchi"}


def normalize_tag(tag: str) -> str:
    t = tag.lower()
    t = _ALIASES.get(t, t)
    if t not in FAMILIES:
        raise DomainError(f"unknown family {tag!r}; expected one of {', '.join(FAMILIES)}")
    return t


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    k: int
    params: tuple[tuple[str, int], ...]
    pair: BiprojectivePair

    @property
    def ctx(self) -> FieldCtx:
        return self.pair.ctx

    @property
    def m(self) -> int:
        return self.pair.m

    def param(self, name: str) -> int:
        return dict(self.params)[name]

    def params_dict(self) -> dict[str, int]:
        return {"k": self.k, **dict(self.params)}

    def label(self) -> str:
        ps = " ".join(f"{n}={v:#x}" if n not in ("j",) else f"{n}={v}" for n, v in self.params)
        return f"{DISPLAY_NAMES[self.family]}(m={self.m} k={self.k}{' ' + ps if ps else ''})"


def _need(cond: bool, name: str, detail: str = ""):
    if not cond:
        raise ConditionViolated(name, detail)


def _check_k(ctx: FieldCtx, k: int, gcd_mult: int = 1):
    m = ctx.m
    _need(0 < k < m, "0 < k < m", f"k={k}")
    if gcd_mult == 1:
        _need(math.gcd(k, m) == 1, "gcd(k,m)=1", f"k={k}, m={m}")
    else:
        _need(math.gcd(gcd_mult * k, m) == 1, f"gcd({gcd_mult}k,m)=1", f"k={k}, m={m}")


def _check_elem(ctx: FieldCtx, name: str, v: int):
    if not 0 <= v < ctx.size:
        raise DomainError(f"{name}={v:#x} is not in GF(2^{ctx.m})")


def default_gold_a(ctx: FieldCtx) -> int:
    return next(a for a in ctx.elements() if ctx.trace(a) == 1)


def gold_b(ctx: FieldCtx, k: int, a: int) -> int:
    """b = a + a^2 + ... + a^(2^(k-1))."""
    b = 0
    for i in range(k):
        b ^= ctx.frobenius(a, i)
    return b


def taniguchi_normalize(ctx: FieldCtx, k: int, c: int, d: int) -> int:
    """d' such that (1,0,c,d)_q is turned into (1,0,1,d')_q by y -> s y, s^q = 1/c."""
    s = ctx.frobenius(ctx.inv(c), -k)
    return ctx.mul(d, ctx.pow(s, (1 << k) + 1))


@lru_cache(maxsize=64)
def zp_forbidden(ctx: FieldCtx, k: int, j: int) -> frozenset[int]:
    """{a^(q+1) (b^q + b)^(1-r) : a, b in M, b^q + b != 0} (always contains 0)."""
    xs = np.arange(ctx.size, dtype=np.int64)
    w = np.unique(ctx.vfrob(xs, k) ^ xs)
    w = w[w != 0]
    e = (1 - (1 << j)) % ctx.order
    we = np.unique(ctx.vpow(w, e))
    aq = np.unique(ctx.vpow(xs, (1 << k) + 1))
    prods = ctx.vmul(aq[:, None], we[None, :])
    return frozenset(int(v) for v in np.unique(prods))


def make_family(tag: str, ctx: FieldCtx, k: int, **params) -> FamilyInstance:
    """Validated instance of a catalog family.

    Parameters by family: gold (a, m even only), carlet (b, c, d),
    taniguchi (d, optional c normalized to 1), zp (j, d), f1, f2, f4 (B, a).
    """
    tag = normalize_tag(tag)
    m = ctx.m
    for name, v in params.items():
        if name != "j":
            _check_elem(ctx, name, v)

    if tag == "gold":
        _check_k(ctx, k)
        if m % 2:
            if params:
                raise DomainError("gold takes no parameters for odd m")
            pair = BiprojectivePair(ctx, k, k, (0, 1, 1, 0), (1, 0, 1, 1))
            return FamilyInstance(tag, k, (), pair)
        a = params.get("a", default_gold_a(ctx))
        _need(ctx.trace(a) == 1, "Tr(a)=1", f"a={a:#x}")
        b = gold_b(ctx, k, a)
        pair = BiprojectivePair(ctx, k, k, (1, 0, b, a), (0, 1, 1, b ^ 1))
        return FamilyInstance(tag, k, (("a", a),), pair)

    if tag == "carlet":
        _check_k(ctx, k)
        b, c, d = params["b"], params["c"], params["d"]
        f = ProjectivePolynomial(ctx, k, (1, b, c, d))
        _need(rootless_check(f), "rootless x^(q+1)+bx^q+cx+d",
              f"projective polynomial has a root (b={b:#x}, c={c:#x}, d={d:#x})")
        # xy is the 1-projective form (0,1,0,0)_1
        pair = BiprojectivePair(ctx, 0, k, (0, 1, 0, 0), (1, b, c, d))
        return FamilyInstance(tag, k, (("b", b), ("c", c), ("d", d)), pair)

    if tag == "taniguchi":
        _check_k(ctx, k)
        d = params["d"]
        c = params.get("c", 1)
        _need(c != 0, "c != 0", "c = 0 gives a Zhou-Pott function")
        if c != 1:
            d = taniguchi_normalize(ctx, k, c, d)
        f = ProjectivePolynomial(ctx, k, (1, 0, 1, d))
        _need(rootless_check(f), "rootless x^(q+1)+x+d",
              f"projective polynomial has a root (d={d:#x})")
        pair = BiprojectivePair(ctx, k, (2 * k) % m, (1, 0, 1, d), (0, 0, 1, 0))
        return FamilyInstance(tag, k, (("d", d),), pair)

    if tag == "zp":
        _need(m % 2 == 0, "m even", f"m={m}")
        _check_k(ctx, k)
        j, d = params["j"], params["d"]
        # j = 0 is admitted: it is the image of the Carlet family
        _need(0 <= j < m, "0 <= j < m", f"j={j}")
        _need(d not in zp_forbidden(ctx, k, j), "d != a^(q+1)(b^q+b)^(1-r)", f"d={d:#x}")
        pair = BiprojectivePair(ctx, k, j, (1, 0, 0, d), (0, 0, 1, 0))
        return FamilyInstance(tag, k, (("j", j), ("d", d)), pair)

    if tag in ("f1", "f2"):
        if params:
            raise DomainError(f"{tag} takes no parameters")
        _check_k(ctx, k, gcd_mult=3)
        if tag == "f1":
            pair = BiprojectivePair(ctx, k, (2 * k) % m, (1, 0, 1, 1), (1, 1, 0, 1))
        else:
            _need(m % 2 == 1, "m odd", f"m={m}")
            pair = BiprojectivePair(ctx, k, (3 * k) % m, (1, 0, 1, 1), (0, 1, 1, 0))
        return FamilyInstance(tag, k, (), pair)

    # f4
    _need(m % 4 == 2, "m = 2 mod 4", f"m={m}")
    _check_k(ctx, k)
    B, a = params["B"], params["a"]
    _need(a != 0 and ctx.in_subfield(a, m // 2), "a in K^x", f"a={a:#x}")
    _need(B != 0 and not ctx.is_cube(B), "B non-cube", f"B={B:#x}")
    r = k + m // 2
    lhs = ctx.pow(B, (1 << k) + (1 << r))
    _need(lhs != ctx.pow(a, (1 << k) + 1), "B^(q+r) != a^(q+1)", f"B={B:#x}, a={a:#x}")
    pair = BiprojectivePair(ctx, k, r % m, (1, 0, 0, B), (0, 1, ctx.div(a, B), 0))
    return FamilyInstance(tag, k, (("B", B), ("a", a)), pair)


# --- enumeration -----------------------------------------------------------

def valid_k(tag: str, m: int) -> list[int]:
    tag = normalize_tag(tag)
    mult = 3 if tag in ("f1", "f2") else 1
    return [k for k in range(1, m) if math.gcd(mult * k, m) == 1]


def family_supported(tag: str, m: int) -> str | None:
    """None if the family exists at m, else the reason it does not."""
    tag = normalize_tag(tag)
    if m < 2:
        return "m must be at least 2"
    if tag == "zp" and m % 2:
        return "Zhou-Pott needs m even"
    if tag == "f2" and m % 2 == 0:
        return "F2 needs m odd"
    if tag == "f4" and m % 4 != 2:
        return "F4 needs m = 2 mod 4"
    if not valid_k(tag, m):
        return "no admissible k"
    return None


def _rootless_tail(ctx: FieldCtx, k: int, p1: int, p2: int, p3: int) -> list[int]:
    """All p4 with p1 x^{q+1} + p2 x^q + p3 x + p4 rootless."""
    xs = np.arange(ctx.size, dtype=np.int64)
    vals = proj_eval_many(ctx, k, (p1, p2, p3, 0), xs, np.ones_like(xs))
    hit = np.zeros(ctx.size, dtype=bool)
    hit[vals] = True
    return [int(d) for d in np.flatnonzero(~hit)]


def carlet_params(ctx: FieldCtx, k: int) -> Iterator[tuple[int, int, int]]:
    """(b, c, d) with x^{q+1}+bx^q+cx+d rootless, lexicographic."""
    xs = np.arange(ctx.size, dtype=np.int64)
    xq = ctx.vfrob(xs, k)
    base = ctx.vmul(xq, xs)
    for b in range(ctx.size):
        vb = base ^ ctx.vmul(b, xq)
        for c in range(ctx.size):
            vals = vb ^ ctx.vmul(c, xs)
            hit = np.zeros(ctx.size, dtype=bool)
            hit[vals] = True
            for d in np.flatnonzero(~hit):
                yield b, c, int(d)


def enumerate_params(tag: str, ctx: FieldCtx) -> Iterator[tuple[int, dict]]:
    """(k, params) for every admissible instance, in a fixed order."""
    tag = normalize_tag(tag)
    m = ctx.m
    reason = family_supported(tag, m)
    if reason:
        raise UnsupportedM(DISPLAY_NAMES[tag], m, reason)
    for k in valid_k(tag, m):
        if tag in ("f1", "f2") or (tag == "gold" and m % 2):
            yield k, {}
        elif tag == "gold":
            yield k, {"a": default_gold_a(ctx)}
        elif tag == "carlet":
            for b, c, d in carlet_params(ctx, k):
                yield k, {"b": b, "c": c, "d": d}
        elif tag == "taniguchi":
            for d in _rootless_tail(ctx, k, 1, 0, 1):
                yield k, {"d": d}
        elif tag == "zp":
            for j in range(1, m):
                bad = zp_forbidden(ctx, k, j)
                for d in range(1, ctx.size):
                    if d not in bad:
                        yield k, {"j": j, "d": d}
        else:  # f4
            h = m // 2
            subs = [a for a in ctx.nonzero() if ctx.in_subfield(a, h)]
            q, r = 1 << k, 1 << (k + h)
            for B in ctx.nonzero():
                if ctx.is_cube(B):
                    continue
                lhs = ctx.pow(B, q + r)
                for a in subs:
                    if lhs != ctx.pow(a, q + 1):
                        yield k, {"B": B, "a": a}


def parse_instance(ctx: FieldCtx, text: str) -> FamilyInstance:
    """Instance from a label ``F4(m=6 k=1 B=0x2 a=0x1)`` or the short form ``f4:k=1,B=0x2,a=1``."""
    text = text.strip()
    if "(" in text:
        fam, _, rest = text.partition("(")
        toks = rest.rstrip(")").split()
    else:
        fam, _, rest = text.partition(":")
        toks = [t for t in rest.replace(",", " ").split()]
    try:
        fields = dict(tok.split("=", 1) for tok in toks)
        vals = {n: int(v, 0) for n, v in fields.items()}
    except ValueError:
        raise DomainError(f"cannot parse instance {text!r}") from None
    m = vals.pop("m", ctx.m)
    if m != ctx.m:
        raise DomainError(f"instance has m={m} but the field has m={ctx.m}")
    if "k" not in vals:
        raise DomainError(f"instance {text!r} is missing k")
    k = vals.pop("k")
    return make_family(fam, ctx, k, **vals)


def enumerate_family(tag: str, ctx: FieldCtx) -> list[FamilyInstance]:
    tag = normalize_tag(tag)
    return [make_family(tag, ctx, k, **p) for k, p in enumerate_params(tag, ctx)]


def family_arrays(tag: str, ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(k, l, coeffs) arrays for every instance, skipping per-instance objects.

    Only for bulk verdicts; conditions are enforced by the enumeration itself.
    """
    tag = normalize_tag(tag)
    ks, ls, cs = [], [], []
    for k, p in enumerate_params(tag, ctx):
        if tag == "carlet":
            l, c = k, (0, 1, 0, 0, 1, p["b"], p["c"], p["d"])
            k = 0
        else:
            pair = make_family(tag, ctx, k, **p).pair
            k, l, c = pair.k, pair.l, pair.coeffs0 + pair.coeffs1
        ks.append(k)
        ls.append(l)
        cs.append(c)
    return (np.array(ks, dtype=np.int64), np.array(ls, dtype=np.int64),
            np.array(cs, dtype=np.int64).reshape(-1, 8))
