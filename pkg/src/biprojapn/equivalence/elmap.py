"""EL-maps on (M x M)^2 and graph transport.

An EL-map is the block matrix [[M, 0], [N, L]] acting on (u, v) in
(M x M) x (M x M) by (u, v) -> (M u, N u + L v).  Each of M, N, L is a 2x2
block of linearized polynomials M -> M, stored as ``LinPoly`` tuples of
(coefficient, frobenius power) terms; a one-term LinPoly is a monomial block.

Convention: ``is_graph_equiv(F, G, gamma)`` holds iff gamma maps the graph of
F onto the graph of G, i.e. G o M = L o F + N pointwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .. import gf2
from ..apn import TruthTable, to_truth_table
from ..biproj import BiprojectivePair
from ..errors import DomainError, NonInvertible, TooLarge
from ..field import FieldCtx

LinPoly = tuple[tuple[int, int], ...]   # ((coef, power), ...) sorted by power, coef != 0
Block = tuple[LinPoly, LinPoly, LinPoly, LinPoly]  # (B1, B2, B3, B4) = [[B1, B2], [B3, B4]]

ZERO: LinPoly = ()
BLOCK_NAMES = ("M1", "M2", "M3", "M4", "N1", "N2", "N3", "N4", "L1", "L2", "L3", "L4")
MAX_GRAPH_N = 24


# --- linearized polynomials ------------------------------------------------

def lp(ctx: FieldCtx, terms) -> LinPoly:
    """Normalize an iterable of (coef, power) pairs: merge powers mod m, drop zeros."""
    acc: dict[int, int] = {}
    for c, t in terms:
        t %= ctx.m
        acc[t] = acc.get(t, 0) ^ c
    return tuple((c, t) for t, c in sorted(acc.items()) if c)


def mono(ctx: FieldCtx, c: int, t: int = 0) -> LinPoly:
    return lp(ctx, [(c, t)])


def lp_add(ctx: FieldCtx, a: LinPoly, b: LinPoly) -> LinPoly:
    return lp(ctx, a + b)


def lp_compose(ctx: FieldCtx, a: LinPoly, b: LinPoly) -> LinPoly:
    """(a o b)(x) = a(b(x)); sum a_i (sum b_j x^(2^j))^(2^i)."""
    return lp(ctx, [(ctx.mul(ca, ctx.frobenius(cb, ta)), ta + tb) for ca, ta in a for cb, tb in b])


def lp_eval(ctx: FieldCtx, a: LinPoly, x: int) -> int:
    out = 0
    for c, t in a:
        out ^= ctx.mul(c, ctx.frobenius(x, t))
    return out


def lp_eval_many(ctx: FieldCtx, a: LinPoly, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for c, t in a:
        out ^= ctx.vmul(c, ctx.vfrob(x, t))
    return out


def block_mul(ctx: FieldCtx, A: Block, B: Block) -> Block:
    """2x2 block product A B (apply B first)."""
    a1, a2, a3, a4 = A
    b1, b2, b3, b4 = B
    c = lambda x, y: lp_compose(ctx, x, y)  # noqa: E731
    return (lp_add(ctx, c(a1, b1), c(a2, b3)), lp_add(ctx, c(a1, b2), c(a2, b4)),
            lp_add(ctx, c(a3, b1), c(a4, b3)), lp_add(ctx, c(a3, b2), c(a4, b4)))


def block_add(ctx: FieldCtx, A: Block, B: Block) -> Block:
    return tuple(lp_add(ctx, a, b) for a, b in zip(A, B))  # type: ignore[return-value]


def _mono_inverse(ctx: FieldCtx, a: LinPoly) -> LinPoly:
    (c, t), = a
    # y = c x^(2^t)  =>  x = (y / c)^(2^-t)
    return mono(ctx, ctx.frobenius(ctx.inv(c), -t), -t)


def block_inverse(ctx: FieldCtx, A: Block) -> Block:
    """Inverse of a block whose nonzero entries are monomials.

    Handles diagonal and anti-diagonal blocks (monomials of any degrees) and
    full blocks of monomials sharing one Frobenius degree.
    """
    a1, a2, a3, a4 = A
    if not a2 and not a3 and len(a1) == 1 and len(a4) == 1:
        return (_mono_inverse(ctx, a1), ZERO, ZERO, _mono_inverse(ctx, a4))
    if not a1 and not a4 and len(a2) == 1 and len(a3) == 1:
        # (u, v) -> (a2 v, a3 u), so the inverse sends (u, v) to (a3^-1 v, a2^-1 u)
        return (ZERO, _mono_inverse(ctx, a3), _mono_inverse(ctx, a2), ZERO)
    ts = {t for blk in A for _, t in blk}
    if len(ts) != 1 or any(len(blk) > 1 for blk in A):
        raise DomainError("block inverse only for monomial blocks of a common degree")
    t = ts.pop()
    c = [blk[0][0] if blk else 0 for blk in A]
    det = ctx.mul(c[0], c[3]) ^ ctx.mul(c[1], c[2])
    if not det:
        raise NonInvertible("singular block")
    di = ctx.inv(det)
    # inverse of D Phi_t is Phi_-t D^-1; D^-1 = det^-1 [[c4, c2], [c3, c1]]
    e = [ctx.mul(di, c[3]), ctx.mul(di, c[1]), ctx.mul(di, c[2]), ctx.mul(di, c[0])]
    return tuple(mono(ctx, ctx.frobenius(x, -t), -t) for x in e)  # type: ignore[return-value]


def _block_rows(ctx: FieldCtx, A: Block) -> list[int]:
    """Images of the 2m basis vectors of M x M (x bits, then y bits) packed as x | y << m."""
    m = ctx.m
    rows = []
    for i in range(2 * m):
        x, y = (1 << i, 0) if i < m else (0, 1 << (i - m))
        u = lp_eval(ctx, A[0], x) ^ lp_eval(ctx, A[1], y)
        v = lp_eval(ctx, A[2], x) ^ lp_eval(ctx, A[3], y)
        rows.append(u | (v << m))
    return rows


# --- EL maps ---------------------------------------------------------------

@dataclass(frozen=True)
class ELMap:
    ctx: FieldCtx
    M: Block
    N: Block
    L: Block

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "ELMap":
        one = mono(ctx, 1)
        return cls(ctx, (one, ZERO, ZERO, one), (ZERO,) * 4, (one, ZERO, ZERO, one))

    @classmethod
    def from_monomials(cls, ctx: FieldCtx, c: Sequence[int], t: int, L: Block,
                       N: Block | None = None) -> "ELMap":
        """M_i = c_i x^(2^t)."""
        M = tuple(mono(ctx, ci, t) for ci in c)
        return cls(ctx, M, N or (ZERO,) * 4, L)  # type: ignore[arg-type]

    def blocks(self) -> dict[str, LinPoly]:
        return dict(zip(BLOCK_NAMES, self.M + self.N + self.L))

    def matrix(self) -> "ELMatrix":
        return ELMatrix(self.ctx.m, tuple(_block_rows(self.ctx, self.M)),
                        tuple(_block_rows(self.ctx, self.N)), tuple(_block_rows(self.ctx, self.L)))

    def compose(self, other: "ELMap") -> "ELMap":
        """self o other (apply other first)."""
        ctx = self.ctx
        M = block_mul(ctx, self.M, other.M)
        N = block_add(ctx, block_mul(ctx, self.N, other.M), block_mul(ctx, self.L, other.N))
        L = block_mul(ctx, self.L, other.L)
        return ELMap(ctx, M, N, L)

    def inverse(self) -> "ELMap":
        """[[M,0],[N,L]]^-1 = [[M^-1, 0], [L^-1 N M^-1, L^-1]] (monomial M and L only)."""
        ctx = self.ctx
        Mi = block_inverse(ctx, self.M)
        Li = block_inverse(ctx, self.L)
        N = block_mul(ctx, Li, block_mul(ctx, self.N, Mi))
        return ELMap(ctx, Mi, N, Li)

    def is_invertible(self) -> bool:
        return self.matrix().is_invertible()

    def to_text(self) -> str:
        parts = []
        for name, blk in self.blocks().items():
            for c, t in blk:
                parts.append(f"({name},{c:#x},{t})")
        return " ".join(parts)

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> "ELMap":
        terms: dict[str, list] = {n: [] for n in BLOCK_NAMES}
        for name, c, t in re.findall(r"\(\s*([MNL][1-4])\s*,\s*(0x[0-9a-fA-F]+|\d+)\s*,\s*(-?\d+)\s*\)", text):
            terms[name].append((int(c, 0), int(t)))
        b = [lp(ctx, terms[n]) for n in BLOCK_NAMES]
        return cls(ctx, tuple(b[0:4]), tuple(b[4:8]), tuple(b[8:12]))  # type: ignore[arg-type]


@dataclass(frozen=True)
class ELMatrix:
    """An EL-map as three F_2 matrices on M x M (rows = basis images, x | y << m)."""

    m: int
    M: tuple[int, ...]
    N: tuple[int, ...]
    L: tuple[int, ...]

    def is_invertible(self) -> bool:
        n = 2 * self.m
        return gf2.kernel_dim_f2(self.M, n) == 0 and gf2.kernel_dim_f2(self.L, n) == 0

    def rows(self) -> list[int]:
        """The full 4m x 4m map on codes (input bits low, output bits high)."""
        n = 2 * self.m
        return [self.M[i] | (self.N[i] << n) for i in range(n)] + [r << n for r in self.L]

    def compose(self, other: "ELMatrix") -> "ELMatrix":
        ap = gf2.apply_rows
        M = tuple(ap(self.M, r) for r in other.M)
        N = tuple(ap(self.N, a) ^ ap(self.L, b) for a, b in zip(other.M, other.N))
        L = tuple(ap(self.L, r) for r in other.L)
        return ELMatrix(self.m, M, N, L)

    def inverse(self) -> "ELMatrix":
        n = 2 * self.m
        try:
            Mi = gf2.inverse_f2(self.M, n)
            Li = gf2.inverse_f2(self.L, n)
        except ValueError:
            raise NonInvertible("M or L is singular") from None
        ap = gf2.apply_rows
        N = tuple(ap(Li, ap(self.N, r)) for r in Mi)
        return ELMatrix(self.m, tuple(Mi), N, tuple(Li))


def _apply_rows_many(rows: Sequence[int], v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    for i, r in enumerate(rows):
        if r:
            out ^= np.where((v >> i) & 1, np.int64(r), np.int64(0))
    return out


# --- graphs ----------------------------------------------------------------

Function = Union[BiprojectivePair, TruthTable]


def _table(F: Function) -> TruthTable:
    return F if isinstance(F, TruthTable) else to_truth_table(F)


def _half_swap(values: np.ndarray, m: int) -> np.ndarray:
    """Truth-table value f << m | g  ->  packed pair f | g << m."""
    mask = (1 << m) - 1
    return (values >> m) | ((values & mask) << m)


def graph_set(F: Function) -> np.ndarray:
    """Sorted codes x | y<<m | f<<2m | g<<3m over all inputs."""
    T = _table(F)
    m = T.m
    if T.n > MAX_GRAPH_N:
        raise TooLarge(f"n={T.n} too large to materialize the graph")
    idx = np.arange(1 << T.n, dtype=np.int64)
    xy = (idx >> m) | ((idx & ((1 << m) - 1)) << m)
    codes = xy | (_half_swap(T.values, m) << (2 * m))
    return np.sort(codes)


def _as_matrix(mapping) -> ELMatrix:
    return mapping if isinstance(mapping, ELMatrix) else mapping.matrix()


def apply_el(mapping, graph: np.ndarray) -> np.ndarray:
    """Image of a graph (sorted code array) under an EL-map, sorted."""
    A = _as_matrix(mapping)
    if not A.is_invertible():
        raise NonInvertible("EL-map is not invertible")
    return np.sort(_apply_rows_many(A.rows(), graph))


def is_graph_equiv(F: Function, G: Function, mapping) -> bool:
    """True iff the EL-map sends the graph of F onto the graph of G (pointwise check)."""
    A = _as_matrix(mapping)
    if not A.is_invertible():
        raise NonInvertible("EL-map is not invertible")
    TF, TG = _table(F), _table(G)
    if TF.m != TG.m:
        raise DomainError("F and G live on different fields")
    m = TF.m
    idx = np.arange(1 << TF.n, dtype=np.int64)
    u = (idx >> m) | ((idx & ((1 << m) - 1)) << m)          # packed x | y << m
    Fu = _half_swap(TF.values, m)                            # F(x, y) packed
    Mu = _apply_rows_many(A.M, u)
    # truth-table index of M(u) is x' << m | y'
    mask = (1 << m) - 1
    G_at = _half_swap(TG.values[((Mu & mask) << m) | (Mu >> m)], m)
    rhs = _apply_rows_many(A.N, u) ^ _apply_rows_many(A.L, Fu)
    return bool(np.array_equal(G_at, rhs))


def is_graph_equiv_setwise(F: Function, G: Function, mapping) -> bool:
    """Reference check: materialize both graphs and compare as sets."""
    return bool(np.array_equal(apply_el(mapping, graph_set(F)), graph_set(G)))


# --- the cyclic automorphisms Z^(q,r) ---------------------------------------

def z_element(F: BiprojectivePair, a: int) -> ELMap:
    """diag(m_a, m_a, m_{a^(q+1)}, m_{a^(r+1)})."""
    ctx = F.ctx
    if not a:
        raise DomainError("a must be nonzero")
    da = mono(ctx, a)
    L = (mono(ctx, ctx.pow(a, (1 << F.k) + 1)), ZERO, ZERO, mono(ctx, ctx.pow(a, (1 << F.l) + 1)))
    return ELMap(ctx, (da, ZERO, ZERO, da), (ZERO,) * 4, L)


def z_subgroup_member(F: BiprojectivePair, a: int) -> bool:
    return is_graph_equiv(F, F, z_element(F, a))
