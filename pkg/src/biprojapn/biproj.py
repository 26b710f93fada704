"""Biprojective polynomial pairs and their Delta_u linear systems.

A (q, r)-biprojective pair is F(x, y) = [f, g] with

    f = a0 x^{q+1} + b0 x^q y + c0 x y^q + d0 y^{q+1} = (a0, b0, c0, d0)_q
    g = a1 x^{r+1} + b1 x^r y + c1 x y^r + d1 y^{r+1} = (a1, b1, c1, d1)_r

where q = 2^k and r = 2^l.  Exponents are stored as k and l.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import gf2
from .errors import DomainError
from .field import FieldCtx, get_field


class Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self):
        return "INF"


INF = Infinity.INF
P1Point = Union[int, Infinity]


def projective_line(ctx: FieldCtx):
    """All points of P^1(M): the field elements in order, then INF."""
    yield from range(ctx.size)
    yield INF


def _check_coeffs(ctx: FieldCtx, coeffs: Sequence[int]) -> tuple[int, int, int, int]:
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) != 4:
        raise DomainError("expected four coefficients")
    for c in coeffs:
        if not 0 <= c < ctx.size:
            raise DomainError(f"coefficient {c:#x} is not in GF(2^{ctx.m})")
    return coeffs


def proj_eval(ctx: FieldCtx, k: int, p: Sequence[int], x: int, y: int) -> int:
    """(p1, p2, p3, p4)_q evaluated at (x, y), q = 2^k."""
    xq, yq = ctx.frobenius(x, k), ctx.frobenius(y, k)
    mul = ctx.mul
    return (mul(p[0], mul(xq, x)) ^ mul(p[1], mul(xq, y))
            ^ mul(p[2], mul(x, yq)) ^ mul(p[3], mul(yq, y)))


def proj_eval_many(ctx: FieldCtx, k: int, p: Sequence[int], x, y) -> np.ndarray:
    xq, yq = ctx.vfrob(x, k), ctx.vfrob(y, k)
    vm = ctx.vmul
    return (vm(p[0], vm(xq, x)) ^ vm(p[1], vm(xq, y))
            ^ vm(p[2], vm(x, yq)) ^ vm(p[3], vm(yq, y)))


@dataclass(frozen=True)
class ProjectivePolynomial:
    """p1 x^{q+1} + p2 x^q y + p3 x y^q + p4 y^{q+1} with q = 2^k."""

    ctx: FieldCtx
    k: int
    coeffs: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _check_coeffs(self.ctx, self.coeffs))
        object.__setattr__(self, "k", self.k % self.ctx.m)

    def __call__(self, x: int, y: int) -> int:
        return proj_eval(self.ctx, self.k, self.coeffs, x, y)

    def univariate(self, x: int) -> int:
        return self(x, 1)

    def values_at_y1(self) -> np.ndarray:
        xs = np.arange(self.ctx.size, dtype=np.int64)
        return proj_eval_many(self.ctx, self.k, self.coeffs, xs, np.ones_like(xs))


def rootless_check(p: ProjectivePolynomial) -> bool:
    """True iff p(x, 1) has no root in M (equivalently p(x, y) = 0 only at (0, 0))."""
    if p.coeffs[0] == 0:
        raise DomainError("leading coefficient p1 must be nonzero")
    return bool(np.all(p.values_at_y1() != 0))


@dataclass(frozen=True)
class BiprojectivePair:
    ctx: FieldCtx
    k: int
    l: int
    coeffs0: tuple[int, int, int, int]
    coeffs1: tuple[int, int, int, int]

    def __post_init__(self):
        m = self.ctx.m
        if not (0 <= self.k < m and 0 <= self.l < m):
            raise DomainError(f"exponents k={self.k}, l={self.l} must lie in [0, {m - 1}]")
        object.__setattr__(self, "coeffs0", _check_coeffs(self.ctx, self.coeffs0))
        object.__setattr__(self, "coeffs1", _check_coeffs(self.ctx, self.coeffs1))

    @property
    def m(self) -> int:
        return self.ctx.m

    @property
    def f(self) -> ProjectivePolynomial:
        return ProjectivePolynomial(self.ctx, self.k, self.coeffs0)

    @property
    def g(self) -> ProjectivePolynomial:
        return ProjectivePolynomial(self.ctx, self.l, self.coeffs1)

    @property
    def coeff_vector(self) -> np.ndarray:
        return np.array(self.coeffs0 + self.coeffs1, dtype=np.int64)

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return evaluate(self, x, y)

    def to_text(self) -> str:
        c0 = ",".join(f"{c:#x}" for c in self.coeffs0)
        c1 = ",".join(f"{c:#x}" for c in self.coeffs1)
        return f"m={self.m} k={self.k} l={self.l} c0={c0} c1={c1} poly={self.ctx.poly:#x}"

    @classmethod
    def from_text(cls, text: str) -> "BiprojectivePair":
        fields = dict(tok.split("=", 1) for tok in text.split())
        missing = {"m", "k", "l", "c0", "c1", "poly"} - fields.keys()
        if missing:
            raise DomainError(f"missing fields: {sorted(missing)}")
        ctx = get_field(int(fields["m"]), int(fields["poly"], 16))
        c0 = tuple(int(w, 16) for w in fields["c0"].split(","))
        c1 = tuple(int(w, 16) for w in fields["c1"].split(","))
        return cls(ctx, int(fields["k"]), int(fields["l"]), c0, c1)


def evaluate(F: BiprojectivePair, x: int, y: int) -> tuple[int, int]:
    return (proj_eval(F.ctx, F.k, F.coeffs0, x, y),
            proj_eval(F.ctx, F.l, F.coeffs1, x, y))


def evaluate_many(F: BiprojectivePair, x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    return (proj_eval_many(F.ctx, F.k, F.coeffs0, x, y),
            proj_eval_many(F.ctx, F.l, F.coeffs1, x, y))


# --- Delta_u systems -------------------------------------------------------

def delta_coefficients(ctx: FieldCtx, k: int, p: Sequence[int], u: P1Point) -> tuple[int, int, int, int]:
    """(A, B, C, D) with Delta_u(x, y) = A x^q + B x + C y^q + D y for one component."""
    a, b, c, d = p
    if u is INF:
        return a, a, c, b
    if u == 0:
        return b, c, d, d
    uq = ctx.frobenius(u, k)
    mul = ctx.mul
    return mul(a, u) ^ b, mul(a, uq) ^ c, mul(c, u) ^ d, mul(b, uq) ^ d


def _linearized(ctx: FieldCtx, k: int, coeffs: tuple[int, int, int, int], x: int, y: int) -> int:
    A, B, C, D = coeffs
    mul, fr = ctx.mul, ctx.frobenius
    return mul(A, fr(x, k)) ^ mul(B, x) ^ mul(C, fr(y, k)) ^ mul(D, y)


@dataclass(frozen=True)
class DeltaSystem:
    """The two F_2-linear maps Delta_u^f, Delta_u^g on M x M.

    ``f_rows`` / ``g_rows`` hold the images of the 2m basis vectors
    (x-part bits first, then y-part bits), each an m-bit int.
    """

    u: P1Point
    m: int
    f_rows: tuple[int, ...]
    g_rows: tuple[int, ...]

    def apply(self, x: int, y: int) -> tuple[int, int]:
        v = x | (y << self.m)
        return gf2.apply_rows(self.f_rows, v), gf2.apply_rows(self.g_rows, v)

    def stacked_rows(self) -> list[int]:
        return [f | (g << self.m) for f, g in zip(self.f_rows, self.g_rows)]

    def nullity(self) -> int:
        return gf2.kernel_dim_f2(self.stacked_rows(), 2 * self.m)

    def kernel(self) -> list[tuple[int, int]]:
        """All common zeros (x, y), including (0, 0)."""
        mask = (1 << self.m) - 1
        basis = gf2.kernel_basis(self.stacked_rows())
        span = {0}
        for v in basis:
            span |= {s ^ v for s in span}
        return sorted((v & mask, v >> self.m) for v in span)


def build_delta_system(F: BiprojectivePair, u: P1Point) -> DeltaSystem:
    ctx, m = F.ctx, F.m
    cf = delta_coefficients(ctx, F.k, F.coeffs0, u)
    cg = delta_coefficients(ctx, F.l, F.coeffs1, u)
    basis = [(1 << i, 0) for i in range(m)] + [(0, 1 << i) for i in range(m)]
    f_rows = tuple(_linearized(ctx, F.k, cf, x, y) for x, y in basis)
    g_rows = tuple(_linearized(ctx, F.l, cg, x, y) for x, y in basis)
    return DeltaSystem(u, m, f_rows, g_rows)


def delta_direct(F: BiprojectivePair, u: P1Point, x: int, y: int) -> tuple[int, int]:
    """Delta_u evaluated straight from the displayed formulas (no matrices)."""
    ctx = F.ctx
    return (_linearized(ctx, F.k, delta_coefficients(ctx, F.k, F.coeffs0, u), x, y),
            _linearized(ctx, F.l, delta_coefficients(ctx, F.l, F.coeffs1, u), x, y))


def parse_coeffs(text: str, ctx: FieldCtx) -> tuple[int, ...]:
    """Parse "1,0,0x3,7" (decimal or 0x-prefixed hex) into four field elements."""
    try:
        words = [int(w.strip(), 0) for w in text.split(",")]
    except ValueError:
        raise DomainError(f"bad coefficient list {text!r}") from None
    return _check_coeffs(ctx, words)
