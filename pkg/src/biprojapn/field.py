"""Arithmetic in GF(2^m) in a polynomial basis.

Elements are plain Python ints (or numpy integer arrays) whose bits are the
coefficients with respect to the defining polynomial.  A pair ``(x, y)`` of
elements is an element of the product GF(2^m) x GF(2^m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DivisionByZero, DomainError

MAX_M = 32
TABLE_MAX_M = 16


# --- polynomials over F_2 packed into ints --------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-packed F_2[x] polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, p: int) -> int:
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a: int, b: int, p: int) -> int:
    return poly_mod(clmul(a, b), p)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin's test: x^(2^m) = x mod p and gcd(x^(2^(m/s)) - x, p) = 1 for primes s | m."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    # xpow[i] = x^(2^i) mod p
    xpow = [2]
    for _ in range(m):
        xpow.append(poly_mulmod(xpow[-1], xpow[-1], poly))
    if xpow[m] != poly_mod(2, poly):
        return False
    for s in _prime_factors(m):
        if poly_gcd(poly, xpow[m // s] ^ 2) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_poly(m: int) -> int:
    """Smallest (as an integer) irreducible polynomial of degree m."""
    if not 1 <= m <= MAX_M:
        raise DomainError(f"m={m} outside 1..{MAX_M}")
    for p in range((1 << m) | 1, 1 << (m + 1)):
        if is_irreducible(p):
            return p
    raise AssertionError("unreachable")  # pragma: no cover


def load_poly_config(path: str | Path) -> dict[int, int]:
    """Read a defining-polynomial override file.

    One entry per line, ``<m> = <hex mask>`` (for instance ``10 = 0x409``);
    blank lines and ``#`` comments are ignored.
    """
    table: dict[int, int] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected '<m> = <hex>'")
        key, val = (s.strip() for s in line.split("=", 1))
        m, poly = int(key), int(val, 16)
        if poly.bit_length() - 1 != m or not is_irreducible(poly):
            raise DomainError(f"{path}:{lineno}: {val} is not an irreducible polynomial of degree {m}")
        table[m] = poly
    return table


# --- integer facts ---------------------------------------------------------

def gcd_pow2(e: int, m: int, sign: int) -> int:
    """gcd(2^e + sign, 2^m - 1) without forming 2^e (sign is +1 or -1)."""
    e %= m
    return math.gcd((1 << e) + sign, (1 << m) - 1)


@dataclass(frozen=True)
class GcdFacts:
    m: int
    k: int
    q_plus_1: int       # gcd(q+1, 2^m-1)
    r_minus_1: int      # gcd(r-1, 2^m-1)
    q2_minus_1: int     # gcd(q^2-1, 2^m-1)
    q_minus_1: int      # gcd(q-1, 2^m-1)
    r_plus_1: int       # gcd(r+1, 2^m-1)
    q_plus_1_sub: int   # gcd(q+1, Q-1), Q = 2^(m/2)

    def as_dict(self) -> dict[str, int]:
        return {k: v for k, v in self.__dict__.items()}


def gcd_exponent_facts(m: int, k: int) -> GcdFacts:
    """The six gcds underlying the F4 family, with q = 2^k and r = 2^(k+m/2)."""
    if m % 4 != 2:
        raise DomainError(f"m={m} is not 2 mod 4")
    if math.gcd(k, m) != 1:
        raise DomainError(f"gcd(k={k}, m={m}) != 1")
    h = m // 2
    return GcdFacts(
        m=m, k=k,
        q_plus_1=gcd_pow2(k, m, 1),
        r_minus_1=gcd_pow2(k + h, m, -1),
        q2_minus_1=gcd_pow2(2 * k, m, -1),
        q_minus_1=gcd_pow2(k, m, -1),
        r_plus_1=gcd_pow2(k + h, m, 1),
        q_plus_1_sub=math.gcd((1 << (k % h)) + 1 if h > 1 else 2, (1 << h) - 1) if h > 1 else 1,
    )


def primitive_prime_divisor(m: int) -> int | None:
    """Least prime dividing 2^m - 1 but no 2^i - 1 with i < m (None if absent)."""
    for p in _prime_factors((1 << m) - 1):
        if all(((1 << i) - 1) % p for i in range(1, m)):
            return p
    return None


def sylow_order(m: int, p: int) -> int:
    n = (1 << m) - 1
    s = 1
    while n % p == 0:
        n //= p
        s *= p
    return s


# --- the field -------------------------------------------------------------

class FieldCtx:
    """GF(2^m) modulo a fixed irreducible polynomial.

    Immutable after construction.  For m <= 16 multiplication goes through
    log/antilog tables (scalar: Python lists, vector: numpy arrays); above
    that it falls back to shift-and-add carry-less multiplication.
    """

    def __init__(self, m: int, poly: int | None = None):
        if not 1 <= m <= MAX_M:
            raise DomainError(f"m={m} outside 1..{MAX_M}")
        if poly is None:
            poly = default_poly(m)
        if poly.bit_length() - 1 != m:
            raise DomainError(f"poly {poly:#x} does not have degree {m}")
        if not is_irreducible(poly):
            raise DomainError(f"poly {poly:#x} is reducible")
        self.m = m
        self.poly = poly
        self.size = 1 << m
        self.mask = self.size - 1
        self.order = self.size - 1          # |M^x|
        self.has_tables = m <= TABLE_MAX_M
        self._frob_cache: dict[int, np.ndarray] = {}
        self.generator = self._find_generator()
        if self.has_tables:
            self._build_tables()

    # identity is (m, poly): contexts are interchangeable when these agree
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))

    def __repr__(self):
        return f"FieldCtx(m={self.m}, poly={self.poly:#x})"

    # -- construction helpers
    def _slow_mul(self, a: int, b: int) -> int:
        return poly_mulmod(a, b, self.poly)

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        n = self.order
        if n == 1:
            return 1
        factors = _prime_factors(n)
        for g in range(2, self.size):
            if all(self._slow_pow(g, n // p) != 1 for p in factors):
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def _build_tables(self):
        n = self.order
        exp = [0] * (2 * n + 1)
        x = 1
        for i in range(n):
            exp[i] = x
            x = self._slow_mul(x, self.generator)
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        log = [0] * self.size
        for i in range(n):
            log[exp[i]] = i
        self._exp = exp
        self._log = log
        self.exp = np.array(exp, dtype=np.int64)
        self.log = np.array(log, dtype=np.int64)

    # -- scalar arithmetic
    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.has_tables:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if not a:
            return 0
        if self.has_tables:
            return self._exp[(self._log[a] * e) % self.order]
        return self._slow_pow(a, e)

    def inv(self, a: int) -> int:
        if not a:
            raise DivisionByZero("inverse of 0")
        if self.has_tables:
            return self._exp[(self.order - self._log[a]) % self.order]
        return self._slow_pow(a, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, k: int) -> int:
        """a^(2^k), k taken mod m (negative k allowed)."""
        return self.pow(a, 1 << (k % self.m))

    def trace(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.m):
            t ^= x
            x = self.mul(x, x)
        return t & 1

    def is_cube(self, a: int) -> bool:
        if not a:
            raise DomainError("is_cube(0)")
        if self.order % 3:
            return True
        return self.pow(a, self.order // 3) == 1

    def in_subfield(self, a: int, d: int) -> bool:
        """True iff a lies in GF(2^d) (d must divide m)."""
        return self.frobenius(a, d) == a

    def omega(self) -> int:
        """A primitive cube root of unity (m even only)."""
        if self.m % 2:
            raise DomainError("F_4 is not a subfield for odd m")
        return self.pow(self.generator, self.order // 3)

    def elements(self) -> range:
        return range(self.size)

    def nonzero(self) -> range:
        return range(1, self.size)

    def subfield_units(self, d: int) -> list[int]:
        if self.m % d:
            raise DomainError(f"{d} does not divide {self.m}")
        return [a for a in self.nonzero() if self.in_subfield(a, d)]

    def cubes(self) -> list[int]:
        return [a for a in self.nonzero() if self.is_cube(a)]

    def non_cubes(self) -> list[int]:
        return [a for a in self.nonzero() if not self.is_cube(a)]

    def unit_decompose(self, x: int) -> tuple[int, int]:
        """Split x = c*g with c in GF(2^(m/2))^x and g^(Q+1) = 1, Q = 2^(m/2)."""
        if self.m % 4 != 2:
            raise DomainError(f"unit decomposition needs m = 2 mod 4, got m={self.m}")
        if not x:
            raise DomainError("unit_decompose(0)")
        Q = 1 << (self.m // 2)
        n = self.order
        # CRT idempotents for n = (Q-1)(Q+1); gcd(Q-1, Q+1) = 1
        e1 = (Q + 1) * pow(Q + 1, -1, Q - 1) % n if Q > 2 else 0
        e2 = (Q - 1) * pow(Q - 1, -1, Q + 1) % n
        return self.pow(x, e1), self.pow(x, e2)

    def trace_dual(self, a: int) -> int:
        """Bit mask d with popcount(d & x) = Tr(a*x) mod 2 for all x."""
        d = 0
        for i in range(self.m):
            d |= self.trace(self.mul(a, 1 << i)) << i
        return d

    # -- vectorised arithmetic (numpy int64 arrays)
    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.has_tables:
            r = self.exp[self.log[a] + self.log[b]]
            return np.where((a == 0) | (b == 0), 0, r)
        return self._vclmul(a, b)

    def _vclmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        a = a.copy()
        r = np.zeros_like(a)
        red = self.poly & self.mask
        top = 1 << (self.m - 1)
        for i in range(self.m):
            r ^= np.where((b >> i) & 1, a, 0)
            hi = (a & top) != 0
            a = ((a << 1) & self.mask) ^ np.where(hi, red, 0)
        return r

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.has_tables:
            r = self.exp[(self.log[a] * (e % self.order)) % self.order]
            if e % self.order == 0:
                r = np.ones_like(a)
            return np.where(a == 0, 0, r)
        r = np.ones_like(a)
        base = a.copy()
        while e:
            if e & 1:
                r = self._vclmul(r, base)
            base = self._vclmul(base, base)
            e >>= 1
        return r

    def frob_table(self, k: int) -> np.ndarray:
        """Array T with T[x] = x^(2^k)."""
        k %= self.m
        t = self._frob_cache.get(k)
        if t is None:
            if self.m > 24:
                raise DomainError("frobenius tables limited to m <= 24")
            t = self.vpow(np.arange(self.size, dtype=np.int64), 1 << k)
            t.setflags(write=False)
            self._frob_cache[k] = t
        return t

    def vfrob(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.has_tables:
            return self.frob_table(k)[a]
        return self.vpow(a, 1 << (k % self.m))

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of 0")
        return self.vpow(a, self.order - 1)

    def trace_table(self) -> np.ndarray:
        t = self._frob_cache.get(-1)
        if t is None:
            x = np.arange(self.size, dtype=np.int64)
            acc = np.zeros_like(x)
            y = x
            for _ in range(self.m):
                acc ^= y
                y = self.vmul(y, y)
            t = acc & 1
            t.setflags(write=False)
            self._frob_cache[-1] = t
        return t


@lru_cache(maxsize=None)
def _cached_ctx(m: int, poly: int) -> FieldCtx:
    return FieldCtx(m, poly)


_overrides: dict[int, int] = {}


def set_poly_overrides(table: dict[int, int]) -> None:
    """Install m -> polynomial overrides (as produced by load_poly_config)."""
    for m, p in table.items():
        if p.bit_length() - 1 != m or not is_irreducible(p):
            raise DomainError(f"override for m={m} is not irreducible of degree {m}")
    _overrides.clear()
    _overrides.update(table)


def get_field(m: int, poly: int | None = None) -> FieldCtx:
    """Shared FieldCtx for (m, poly); poly defaults to the override table, then default_poly."""
    if poly is None:
        poly = _overrides.get(m) or default_poly(m)
    return _cached_ctx(m, poly)


def parse_elements(ctx: FieldCtx, words: Iterable[str]) -> list[int]:
    out = []
    for w in words:
        v = int(w, 0)
        if not 0 <= v < ctx.size:
            raise DomainError(f"{w} is not an element of GF(2^{ctx.m})")
        out.append(v)
    return out
