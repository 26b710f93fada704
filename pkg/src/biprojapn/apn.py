"""APN decisions: naive differential uniformity and the projective-line criterion.

Truth tables index the input as x * 2^m + y and store the output as
f << m | g, so a table entry is the 2m-bit concatenation of both halves.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .biproj import BiprojectivePair
from .errors import DomainError, TooLarge
from .field import FieldCtx, get_field

MAX_TABLE_N = 24
_MAGIC = b"BPTT"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    m: int
    poly: int
    values: np.ndarray

    def __post_init__(self):
        if self.n != 2 * self.m:
            raise DomainError("n must equal 2m")
        if self.values.shape != (1 << self.n,):
            raise DomainError(f"expected {1 << self.n} values")

    def index(self, x: int, y: int) -> int:
        return (x << self.m) | y

    def at(self, x: int, y: int) -> tuple[int, int]:
        v = int(self.values[self.index(x, y)])
        return v >> self.m, v & ((1 << self.m) - 1)

    def __eq__(self, other):
        return (isinstance(other, TruthTable) and (self.n, self.poly) == (other.n, other.poly)
                and np.array_equal(self.values, other.values))


def _require_tables(ctx: FieldCtx):
    if not ctx.has_tables:
        raise TooLarge(f"m={ctx.m} exceeds the table-driven range")


def frob_tables(ctx: FieldCtx) -> np.ndarray:
    """Row k is the table x -> x^(2^k)."""
    return np.stack([ctx.frob_table(k) for k in range(ctx.m)])


def to_truth_table(F: BiprojectivePair) -> TruthTable:
    ctx = F.ctx
    if 2 * ctx.m > MAX_TABLE_N:
        raise TooLarge(f"n={2 * ctx.m} exceeds {MAX_TABLE_N}")
    _require_tables(ctx)
    out = np.empty(1 << (2 * ctx.m), dtype=np.int64)
    _kernels.truth_table(ctx.m, F.coeff_vector, ctx.frob_table(F.k), ctx.frob_table(F.l),
                         ctx.exp, ctx.log, out)
    return TruthTable(2 * ctx.m, ctx.m, ctx.poly, out)


def table_from_function(ctx: FieldCtx, fn) -> TruthTable:
    """Truth table of an arbitrary fn(x, y) -> (u, v) (slow; for fixtures)."""
    m = ctx.m
    vals = np.empty(1 << (2 * m), dtype=np.int64)
    for x in range(ctx.size):
        for y in range(ctx.size):
            u, v = fn(x, y)
            vals[(x << m) | y] = (u << m) | v
    return TruthTable(2 * m, m, ctx.poly, vals)


@dataclass
class DifferentialSpectrum:
    """delta -> number of (a, b), a != 0, with exactly delta solutions."""

    n: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def uniformity(self) -> int:
        return max(d for d, c in self.counts.items() if c)

    def to_json(self) -> dict:
        return {"n": self.n, "values": [{"delta": d, "count": c} for d, c in sorted(self.counts.items())]}


def apn_naive(T: TruthTable) -> tuple[bool, DifferentialSpectrum]:
    """Full differential spectrum; APN iff every count is 0 or 2."""
    hist = np.zeros((1 << T.n) + 1, dtype=np.int64)
    _kernels.differential_counts(T.values, T.n, False, hist)
    spec = DifferentialSpectrum(T.n, {int(d): int(c) for d, c in enumerate(hist) if c})
    return spec.uniformity <= 2, spec


def is_apn_naive(T: TruthTable) -> bool:
    """Verdict only: stops at the first derivative that is not 2-to-1."""
    return bool(_kernels.is_apn_table(T.values, T.n))


def projective_nullities(F: BiprojectivePair, stop_early: bool = False) -> np.ndarray:
    """Nullity of the Delta_u system per u; entry 2^m is u = infinity."""
    ctx = F.ctx
    _require_tables(ctx)
    out = np.empty(ctx.size + 1, dtype=np.int64)
    _kernels.projective_nullities(ctx.m, F.coeff_vector, ctx.frob_table(F.k), ctx.frob_table(F.l),
                                  ctx.exp, ctx.log, stop_early, out)
    return out


def apn_projective(F: BiprojectivePair) -> bool:
    """APN iff every Delta_u system on P^1(M) has a one-dimensional kernel."""
    return bool(np.all(projective_nullities(F, stop_early=True) == 1))


def _run_chunks(kernel, ctx: FieldCtx, ks, ls, coeffs, threads: int) -> np.ndarray:
    _require_tables(ctx)
    verdict = np.zeros(len(coeffs), dtype=np.bool_)
    ft = frob_tables(ctx)
    threads = max(1, threads)
    bounds = np.linspace(0, len(coeffs), threads + 1).astype(int)

    def work(i):
        lo, hi = bounds[i], bounds[i + 1]
        if hi > lo:
            part = verdict[lo:hi]
            kernel(ctx.m, ks[lo:hi], ls[lo:hi], coeffs[lo:hi], ft, ctx.exp, ctx.log, part)

    if threads == 1:
        work(0)
    else:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, range(threads)))
    return verdict


def apn_projective_batch(ctx: FieldCtx, ks, ls, coeffs, threads: int = 1) -> np.ndarray:
    """Projective verdicts for a batch given as (k, l, 8-coefficient) arrays."""
    return _run_chunks(_kernels.projective_batch, ctx, np.asarray(ks), np.asarray(ls),
                       np.ascontiguousarray(coeffs, dtype=np.int64), threads)


def apn_naive_batch(ctx: FieldCtx, ks, ls, coeffs, threads: int = 1) -> np.ndarray:
    """Truth-table verdicts for a batch (the table is rebuilt per instance)."""
    if 2 * ctx.m > MAX_TABLE_N:
        raise TooLarge(f"n={2 * ctx.m} exceeds {MAX_TABLE_N}")
    return _run_chunks(_kernels.naive_batch, ctx, np.asarray(ks), np.asarray(ls),
                       np.ascontiguousarray(coeffs, dtype=np.int64), threads)


# --- binary serialization --------------------------------------------------

def write_truth_table(T: TruthTable, path: str | Path) -> None:
    """Header: magic, version, n, m, defining polynomial; then little-endian values."""
    width = (T.n + 7) // 8
    header = _MAGIC + struct.pack("<BBBQ", _VERSION, T.n, T.m, T.poly)
    raw = T.values.astype("<u8").view(np.uint8).reshape(-1, 8)[:, :width]
    Path(path).write_bytes(header + raw.tobytes())


def read_truth_table(path: str | Path) -> TruthTable:
    data = Path(path).read_bytes()
    hsize = len(_MAGIC) + struct.calcsize("<BBBQ")
    if data[:4] != _MAGIC:
        raise DomainError("not a truth-table file")
    version, n, m, poly = struct.unpack("<BBBQ", data[4:hsize])
    if version != _VERSION:
        raise DomainError(f"unsupported version {version}")
    width = (n + 7) // 8
    body = np.frombuffer(data[hsize:], dtype=np.uint8)
    if body.size != width << n:
        raise DomainError("truncated truth table")
    padded = np.zeros((1 << n, 8), dtype=np.uint8)
    padded[:, :width] = body.reshape(-1, width)
    values = padded.view("<u8").reshape(-1).astype(np.int64)
    get_field(m, poly)  # validates the polynomial
    return TruthTable(n, m, poly, values)

