"""The action of G = M^x x GL(2, M) on projective polynomials.

(a, [[c1, c3], [c2, c4]]) sends f to a * f(c1 x + c2 y, c3 x + c4 y).  With
this matrix layout (g h).f = g.(h.f) for the product (a_g a_h, M_g M_h).
The Carlet function [xy, f] composed with M = (c1 x + c2 y, c3 x + c4 y) is
[c1c3 x^2 + det xy + c2c4 y^2, f o M], which is how G-orbits of rootless
polynomials turn into EL-equivalences between Carlet functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .. import gf2
from .._kernels import count_rootless, gmul
from ..biproj import BiprojectivePair, ProjectivePolynomial, rootless_check
from ..errors import DomainError, SearchFailed, TooLarge
from ..families import FamilyInstance, make_family
from ..field import FieldCtx
from ._solver import _q
from .elmap import ZERO, ELMap, is_graph_equiv, mono

MAX_BFS_STATES = 1 << 24


@dataclass(frozen=True)
class GGroupElement:
    ctx: FieldCtx
    a: int
    c1: int
    c2: int
    c3: int
    c4: int

    def __post_init__(self):
        if not self.a:
            raise DomainError("scalar must be nonzero")
        if not self.det:
            raise DomainError("singular matrix")

    @property
    def det(self) -> int:
        mul = self.ctx.mul
        return mul(self.c1, self.c4) ^ mul(self.c2, self.c3)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "GGroupElement":
        return cls(ctx, 1, 1, 0, 0, 1)

    def __mul__(self, h: "GGroupElement") -> "GGroupElement":
        """Product with (g h).f = g.(h.f): matrices [[c1, c3], [c2, c4]] multiply as usual."""
        mul = self.ctx.mul
        g = self
        return GGroupElement(self.ctx, mul(g.a, h.a),
                             mul(g.c1, h.c1) ^ mul(g.c3, h.c2),
                             mul(g.c2, h.c1) ^ mul(g.c4, h.c2),
                             mul(g.c1, h.c3) ^ mul(g.c3, h.c4),
                             mul(g.c2, h.c3) ^ mul(g.c4, h.c4))

    def inverse(self) -> "GGroupElement":
        ctx = self.ctx
        di = ctx.inv(self.det)
        return GGroupElement(ctx, ctx.inv(self.a), ctx.mul(di, self.c4), ctx.mul(di, self.c2),
                             ctx.mul(di, self.c3), ctx.mul(di, self.c1))


def transform_coeffs(ctx: FieldCtx, k: int, p, c1, c2, c3, c4) -> tuple[int, int, int, int]:
    """Coefficients of p(c1 x + c2 y, c3 x + c4 y) as a (q)-projective polynomial."""
    mul, fr = ctx.mul, ctx.frobenius
    p1, p2, p3, p4 = p
    c1q, c3q = fr(c1, k), fr(c3, k)
    pe = lambda x, y: (mul(p1, mul(fr(x, k), x)) ^ mul(p2, mul(fr(x, k), y))  # noqa: E731
                       ^ mul(p3, mul(x, fr(y, k))) ^ mul(p4, mul(fr(y, k), y)))
    n2 = mul(mul(p1, c1q) ^ mul(p3, c3q), c2) ^ mul(mul(p2, c1q) ^ mul(p4, c3q), c4)
    n3 = mul(mul(p1, c1) ^ mul(p2, c3), fr(c2, k)) ^ mul(mul(p3, c1) ^ mul(p4, c3), fr(c4, k))
    return pe(c1, c3), n2, n3, pe(c2, c4)


def g_action(g: GGroupElement, f: ProjectivePolynomial) -> ProjectivePolynomial:
    ctx = f.ctx
    if g.ctx != ctx:
        raise DomainError("group element and polynomial live on different fields")
    t = transform_coeffs(ctx, f.k, f.coeffs, g.c1, g.c2, g.c3, g.c4)
    return ProjectivePolynomial(ctx, f.k, tuple(ctx.mul(g.a, v) for v in t))


def g_action_many(ctx: FieldCtx, k: int, P, c, a=None):
    """Vectorized action of one matrix (and optional scalar array a) on coefficient arrays."""
    vm = ctx.vmul
    p1, p2, p3, p4 = P
    c1, c2, c3, c4 = c
    c1q, c3q, c2q, c4q = (ctx.frobenius(v, k) for v in (c1, c3, c2, c4))

    def pe(x, xq, y, yq):
        return vm(p1, ctx.mul(xq, x)) ^ vm(p2, ctx.mul(xq, y)) ^ vm(p3, ctx.mul(x, yq)) ^ vm(p4, ctx.mul(yq, y))

    out = [pe(c1, c1q, c3, c3q),
           vm(vm(p1, c1q) ^ vm(p3, c3q), c2) ^ vm(vm(p2, c1q) ^ vm(p4, c3q), c4),
           vm(vm(p1, c1) ^ vm(p2, c3), c2q) ^ vm(vm(p3, c1) ^ vm(p4, c3), c4q),
           pe(c2, c2q, c4, c4q)]
    if a is not None:
        out = [vm(a, v) for v in out]
    return out


# --- orbit and stabilizer ---------------------------------------------------

@njit(cache=True, nogil=True)
def _stabilizer_count(m, fq, p, exp, log):
    """Number of (a, M) in G fixing p; a is determined by M when it exists."""
    size = 1 << m
    order = size - 1
    cnt = 0
    for c1 in range(size):
        for c3 in range(size):
            if c1 == 0 and c3 == 0:
                continue
            n1 = _q(p, c1, fq[c1], c3, fq[c3], exp, log)
            if n1 == 0:
                continue
            # a * n1 = p1  =>  a = p1 / n1
            a = exp[log[p[0]] - log[n1] + order]
            for c2 in range(size):
                for c4 in range(size):
                    if gmul(c1, c4, exp, log) ^ gmul(c2, c3, exp, log) == 0:
                        continue
                    n2 = (gmul(gmul(p[0], fq[c1], exp, log) ^ gmul(p[2], fq[c3], exp, log), c2, exp, log)
                          ^ gmul(gmul(p[1], fq[c1], exp, log) ^ gmul(p[3], fq[c3], exp, log), c4, exp, log))
                    if gmul(a, n2, exp, log) != p[1]:
                        continue
                    n3 = (gmul(gmul(p[0], c1, exp, log) ^ gmul(p[1], c3, exp, log), fq[c2], exp, log)
                          ^ gmul(gmul(p[2], c1, exp, log) ^ gmul(p[3], c3, exp, log), fq[c4], exp, log))
                    if gmul(a, n3, exp, log) != p[2]:
                        continue
                    n4 = _q(p, c2, fq[c2], c4, fq[c4], exp, log)
                    if gmul(a, n4, exp, log) == p[3]:
                        cnt += 1
    return cnt


def group_order(m: int) -> int:
    s = 1 << m
    return (s - 1) * (s * s - 1) * (s * s - s)


def orbit_and_stabilizer(f: ProjectivePolynomial) -> tuple[int, int]:
    """(orbit size, stabilizer size) of a rootless f under G."""
    ctx = f.ctx
    if f.coeffs[0] == 0 or not rootless_check(f):
        raise DomainError("f must have p1 != 0 and no roots")
    if ctx.m > 6:
        raise TooLarge("stabilizer scan is limited to m <= 6")
    stab = int(_stabilizer_count(ctx.m, ctx.frob_table(f.k), np.array(f.coeffs, dtype=np.int64),
                                 ctx.exp, ctx.log))
    return group_order(ctx.m) // stab, stab


def _generators(ctx: FieldCtx):
    g = ctx.generator
    # scalar, diag(g, 1), f(x + y, y), f(y, x)
    return [(g, (1, 0, 0, 1)), (1, (g, 0, 0, 1)), (1, (1, 1, 0, 1)), (1, (0, 1, 1, 0))]


def _encode(P, m):
    return (P[0] << (3 * m)) | (P[1] << (2 * m)) | (P[2] << m) | P[3]


def bfs_orbit(f: ProjectivePolynomial) -> int:
    """Orbit size by breadth-first search over generators of G (independent of the stabilizer scan)."""
    ctx, m = f.ctx, f.ctx.m
    if 1 << (4 * m) > MAX_BFS_STATES:
        raise TooLarge("state space too large for BFS")
    seen = np.zeros(1 << (4 * m), dtype=np.bool_)
    front = [np.array([v], dtype=np.int64) for v in f.coeffs]
    seen[_encode(front, m)] = True
    count = 1
    gens = _generators(ctx)
    while front[0].size:
        nxt = []
        for a, c in gens:
            Q = g_action_many(ctx, f.k, front, c, a)
            codes = _encode(Q, m)
            new = ~seen[codes]
            codes = np.unique(codes[new])
            seen[codes] = True
            count += codes.size
            nxt.append(codes)
        codes = np.concatenate(nxt)
        mask = (1 << m) - 1
        front = [(codes >> (3 * m)) & mask, (codes >> (2 * m)) & mask, (codes >> m) & mask, codes & mask]
    return count


def bluher_formula(m: int) -> int:
    """Number of rootless (p1 != 0, p2, p3, p4)_q when gcd(k, m) = 1."""
    s = 1 << m
    return (s + 1) * s * (s - 1) ** 2 // 3


def rootless_count(ctx: FieldCtx, k: int) -> int:
    """Exhaustive count of rootless projective polynomials with p1 != 0."""
    return int(count_rootless(ctx.m, k, ctx.frob_table(k), ctx.exp, ctx.log))


# --- Carlet orbits ----------------------------------------------------------

@dataclass
class CarletOrbits:
    """Orbits of monic rootless polynomials (1, b, c, d)_q under G, found by BFS.

    States are indexed b << 2m | c << m | d.  label[s] is the orbit number
    (-1 if unreached); parent/gen record the BFS tree so that a G-element
    from the orbit's root to any state can be rebuilt.
    """

    ctx: FieldCtx
    k: int
    label: np.ndarray
    parent: np.ndarray
    gen: np.ndarray
    roots: list[int]

    def path_element(self, s: int) -> GGroupElement:
        """g with g.(root of s's orbit) = state s."""
        ctx, m = self.ctx, self.ctx.m
        gens = _generators(ctx)
        g = GGroupElement.identity(ctx)
        mask = (1 << m) - 1
        while self.parent[s] >= 0:
            p = int(self.parent[s])
            _, c = gens[int(self.gen[s])]
            # rescale so that the image of the parent is monic again
            b, cc, d = (p >> (2 * m)) & mask, (p >> m) & mask, p & mask
            p1 = transform_coeffs(ctx, self.k, (1, b, cc, d), *c)[0]
            h = GGroupElement(ctx, ctx.inv(p1), *c)
            g = g * h   # walking back, later steps sit on the left
            s = p
        return g


def carlet_orbits(ctx: FieldCtx, k: int, starts) -> CarletOrbits:
    """BFS over monic states from each given start state (skipping those already reached)."""
    m = ctx.m
    n = 1 << (3 * m)
    if n > MAX_BFS_STATES:
        raise TooLarge("state space too large for BFS")
    mask = (1 << m) - 1
    label = np.full(n, -1, dtype=np.int32)
    parent = np.full(n, -1, dtype=np.int64)
    gen = np.zeros(n, dtype=np.int8)
    gens = [c for a, c in _generators(ctx) if a == 1]
    roots = []
    for s0 in starts:
        s0 = int(s0)
        if label[s0] >= 0:
            continue
        lab = len(roots)
        roots.append(s0)
        label[s0] = lab
        front = np.array([s0], dtype=np.int64)
        while front.size:
            P = [np.ones_like(front), (front >> (2 * m)) & mask, (front >> m) & mask, front & mask]
            nxt = []
            for gi, c in enumerate(gens):
                Q = g_action_many(ctx, k, P, c)
                inv = ctx.vinv(Q[0])
                codes = (ctx.vmul(inv, Q[1]) << (2 * m)) | (ctx.vmul(inv, Q[2]) << m) | ctx.vmul(inv, Q[3])
                new = label[codes] < 0
                codes, src = codes[new], front[new]
                codes, first = np.unique(codes, return_index=True)
                label[codes] = lab
                parent[codes] = src[first]
                gen[codes] = gi + 1  # scalar generator is index 0
                nxt.append(codes)
            front = np.concatenate(nxt)
    return CarletOrbits(ctx, k, label, parent, gen, roots)


def carlet_pair(ctx: FieldCtx, k: int, p) -> BiprojectivePair:
    return BiprojectivePair(ctx, 0, k, (0, 1, 0, 0), tuple(p))


def carlet_g_witness(ctx: FieldCtx, k: int, f, g: GGroupElement) -> ELMap:
    """EL-map Gamma_{[xy, g.f]} -> Gamma_{[xy, f]} built from a G-element.

    [xy, f] o M = diag(det, 1/a) o [xy, g.f] + (c1c3 x^2 + c2c4 y^2, 0).
    """
    mul = ctx.mul
    M = tuple(mono(ctx, c) for c in (g.c1, g.c2, g.c3, g.c4))
    N = (mono(ctx, mul(g.c1, g.c3), 1), mono(ctx, mul(g.c2, g.c4), 1), ZERO, ZERO)
    L = (mono(ctx, g.det), ZERO, ZERO, mono(ctx, ctx.inv(g.a)))
    return ELMap(ctx, M, N, L)  # type: ignore[arg-type]


# --- Carlet to Zhou-Pott ------------------------------------------------------

def _solve_to_target(ctx: FieldCtx, k: int, p, u: int):
    """First (c1..c4, lam) with p(c1x+c2y, c3x+c4y) = lam (1, 0, 0, u)_q."""
    m, mul, fr = ctx.m, ctx.mul, ctx.frobenius
    p1, p2, p3, p4 = p
    for c1 in range(ctx.size):
        for c3 in range(ctx.size):
            if not (c1 or c3):
                continue
            c1q, c3q = fr(c1, k), fr(c3, k)
            k2, k4 = mul(p1, c1q) ^ mul(p3, c3q), mul(p2, c1q) ^ mul(p4, c3q)
            j2, j4 = mul(p1, c1) ^ mul(p2, c3), mul(p3, c1) ^ mul(p4, c3)
            # (c2, c4) -> (coefficient of x^q y, coefficient of x y^q), both must vanish
            rows = []
            for i in range(2 * m):
                c2, c4 = (1 << i, 0) if i < m else (0, 1 << (i - m))
                b = mul(k2, c2) ^ mul(k4, c4)
                g = mul(j2, fr(c2, k)) ^ mul(j4, fr(c4, k))
                rows.append(b | (g << m))
            span = [0]
            for v in gf2.kernel_basis(rows):
                span += [s ^ v for s in span]
            mask = (1 << m) - 1
            for v in sorted(span):
                c2, c4 = v & mask, v >> m
                if not mul(c1, c4) ^ mul(c2, c3):
                    continue
                t = transform_coeffs(ctx, k, p, c1, c2, c3, c4)
                if t[1] == 0 and t[2] == 0 and t[3] == mul(u, t[0]):
                    return (c1, c2, c3, c4), t[0]
    return None


def carlet_to_zp(C: FamilyInstance, u: int | None = None) -> tuple[FamilyInstance, ELMap]:
    """Zhou-Pott instance [(1, 0, 0, u)_q, xy] and a witness Gamma_C -> Gamma_ZP."""
    if C.family != "carlet":
        raise DomainError("expected a Carlet instance")
    ctx, k = C.ctx, C.k
    if ctx.m % 2:
        raise DomainError("Carlet to Zhou-Pott needs m even")
    if u is None:
        u = ctx.non_cubes()[0]
    p = C.pair.coeffs1
    hit = _solve_to_target(ctx, k, p, u)
    if hit is None:
        raise SearchFailed("no G-element reaches (1,0,0,u); transitivity says this cannot happen")
    (c1, c2, c3, c4), lam = hit
    Z = make_family("zp", ctx, k, j=0, d=u)
    mul = ctx.mul
    det = mul(c1, c4) ^ mul(c2, c3)
    # C o M = L o ZP + N with ZP's components in the order [(1,0,0,u)_q, xy]
    M = tuple(mono(ctx, c) for c in (c1, c2, c3, c4))
    N = (mono(ctx, mul(c1, c3), 1), mono(ctx, mul(c2, c4), 1), ZERO, ZERO)
    L = (ZERO, mono(ctx, det), mono(ctx, lam), ZERO)
    to_c = ELMap(ctx, M, N, L)  # type: ignore[arg-type]
    w = to_c.inverse()
    if not is_graph_equiv(C.pair, Z.pair, w):
        raise SearchFailed("assembled witness does not verify")
    return Z, w
