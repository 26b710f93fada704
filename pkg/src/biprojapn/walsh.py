"""Walsh spectra, classical-spectrum test and image profiles.

On F = M x M the trace form is Tr(<b, F(x)> + <a, x>) with the componentwise
pairing <(u1, u2), (v1, v2)> = u1 v1 + u2 v2 and Tr the absolute trace of M.
Extended spectra do not depend on which nondegenerate pairing is used.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .apn import TruthTable, apn_naive, to_truth_table
from .biproj import BiprojectivePair
from .errors import TooLarge
from .field import get_field

MAX_WALSH_N = 14


@dataclass
class WalshSpectrum:
    """|W| value -> multiplicity over b != 0 and all a."""

    n: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {"n": self.n,
                "values": [{"abs_w": w, "count": c} for w, c in sorted(self.counts.items())],
                "classical": is_classical(self)}


@dataclass
class ImageProfile:
    """preimage count -> number of image values with that many preimages."""

    histogram: dict[int, int]
    zero_preimages: int

    @property
    def image_size(self) -> int:
        return sum(self.histogram.values())

    def to_json(self) -> dict:
        return {"histogram": {str(k): v for k, v in sorted(self.histogram.items())},
                "zero_preimages": self.zero_preimages, "image_size": self.image_size}


def _split(T: TruthTable):
    mask = (1 << T.m) - 1
    return T.values >> T.m, T.values & mask


def walsh_coefficient(T: TruthTable, b: tuple[int, int], a: tuple[int, int]) -> int:
    """Direct sum of (-1)^Tr(b1 f + b2 g + a1 x + a2 y) over all (x, y)."""
    ctx = get_field(T.m, T.poly)
    tr = ctx.trace_table()
    f, g = _split(T)
    idx = np.arange(1 << T.n, dtype=np.int64)
    x, y = idx >> T.m, idx & ((1 << T.m) - 1)
    s = (tr[ctx.vmul(b[0], f)] ^ tr[ctx.vmul(b[1], g)]
         ^ tr[ctx.vmul(a[0], x)] ^ tr[ctx.vmul(a[1], y)])
    return int((1 << T.n) - 2 * int(np.count_nonzero(s)))


def trace_mask(m: int, poly: int, a: tuple[int, int]) -> int:
    """Bit mask w with parity(w & (x << m | y)) = Tr(a1 x + a2 y)."""
    ctx = get_field(m, poly)
    w = 0
    for i in range(m):
        w |= ctx.trace(ctx.mul(a[0], 1 << i)) << (m + i)
        w |= ctx.trace(ctx.mul(a[1], 1 << i)) << i
    return w


def walsh_row(T: TruthTable, b: tuple[int, int]) -> np.ndarray:
    """FWHT of the sign vector of Tr(<b, F(x)>), indexed by trace_mask(a)."""
    ctx = get_field(T.m, T.poly)
    tr = ctx.trace_table()
    f, g = _split(T)
    buf = (1 - 2 * (tr[ctx.vmul(b[0], f)] ^ tr[ctx.vmul(b[1], g)])).astype(np.int64)
    _kernels.fwht_inplace(buf)
    return buf


def extended_walsh_spectrum(T: TruthTable, threads: int = 1) -> WalshSpectrum:
    if T.n > MAX_WALSH_N:
        raise TooLarge(f"n={T.n} exceeds {MAX_WALSH_N}")
    ctx = get_field(T.m, T.poly)
    size = 1 << T.n
    tr = ctx.trace_table().astype(np.int64)
    threads = max(1, threads)
    bounds = np.linspace(1, size, threads + 1).astype(int)
    hists = [np.zeros(size + 1, dtype=np.int64) for _ in range(threads)]

    def work(i):
        _kernels.walsh_trace_histogram(T.values, T.m, bounds[i], bounds[i + 1], ctx.exp, ctx.log, tr, hists[i])

    if threads == 1:
        work(0)
    else:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, range(threads)))
    hist = sum(hists)
    return WalshSpectrum(T.n, {int(w): int(c) for w, c in enumerate(hist) if c})


def classical_triple(n: int) -> dict[int, int]:
    """The Gold-like spectrum: {0, 2^(n/2), 2^((n+2)/2)} with Parseval-consistent multiplicities."""
    s = (1 << n) - 1
    return {0: s * (1 << (n - 2)), 1 << (n // 2): 2 * s * (1 << n) // 3,
            1 << ((n + 2) // 2): s * (1 << (n - 2)) // 3}


def is_classical(spec: WalshSpectrum) -> bool:
    if spec.n % 2:
        return False
    return spec.counts == classical_triple(spec.n)


def image_profile(T: TruthTable) -> ImageProfile:
    counts = np.bincount(T.values, minlength=1 << T.n)
    hist = np.bincount(counts[counts > 0])
    return ImageProfile({int(k): int(v) for k, v in enumerate(hist) if v}, int(counts[0]))


def three_to_one_precondition(T: TruthTable) -> bool:
    """F(0) = 0 and every nonzero image value has at least 3 preimages."""
    counts = np.bincount(T.values, minlength=1 << T.n)
    nz = counts[1:]
    return int(T.values[0]) == 0 and bool(np.all((nz == 0) | (nz >= 3)))


def three_to_one_check(T: TruthTable) -> bool:
    """Zero has exactly one preimage and every other image value exactly three."""
    counts = np.bincount(T.values, minlength=1 << T.n)
    nz = counts[1:]
    return int(counts[0]) == 1 and bool(np.all((nz == 0) | (nz == 3)))


@lru_cache(maxsize=512)
def _invariants(F: BiprojectivePair) -> dict:
    T = to_truth_table(F)
    out = {"differential": apn_naive(T)[1].counts, "image": image_profile(T).histogram}
    if T.n <= 12:
        out["walsh"] = extended_walsh_spectrum(T).counts
    return out


def invariants_differ(F: BiprojectivePair, G: BiprojectivePair) -> str | None:
    """Name of the first CCZ/EL invariant that separates F and G, if any (n <= 14)."""
    if 2 * F.m > MAX_WALSH_N:
        return None
    a, b = _invariants(F), _invariants(G)
    for key in ("differential", "walsh", "image"):
        if key in a and key in b and a[key] != b[key]:
            return key
    return None
