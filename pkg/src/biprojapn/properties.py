"""Sampled property suites, runnable on their own.

    python -m biprojapn.properties --samples 10000 --seed 1

Each law is checked on ``samples`` random instances per field size and
reports the first counterexample it meets.  Exit code 1 if any law fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .biproj import BiprojectivePair, ProjectivePolynomial, evaluate_many, rootless_check
from .equivalence.gaction import GGroupElement, g_action
from .apn import to_truth_table
from .field import FieldCtx, get_field
from .walsh import walsh_row

FIELD_MS = (3, 8, 13, 20)      # 20 exercises the table-free multiply
PAIR_MS = (3, 4, 5, 6, 8)
GACTION_MS = (3, 4, 5)
PARSEVAL_MS = (2, 3, 4)


@dataclass
class LawResult:
    suite: str
    law: str
    m: int
    samples: int
    failures: int = 0
    example: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"suite": self.suite, "law": self.law, "m": self.m, "samples": self.samples,
                "failures": self.failures, "ok": self.ok, "example": self.example}


@dataclass
class SuiteReport:
    results: list[LawResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> dict:
        return {"ok": self.ok, "laws": [r.to_json() for r in self.results]}


def _record(res: LawResult, bad: np.ndarray, **cols) -> LawResult:
    bad = np.asarray(bad)
    res.failures = int(np.count_nonzero(bad))
    if res.failures:
        i = int(np.flatnonzero(bad)[0])
        res.example = {k: int(np.asarray(v)[i]) for k, v in cols.items()}
    return res


def _elems(rng, ctx: FieldCtx, n: int, nonzero: bool = False) -> np.ndarray:
    return rng.integers(1 if nonzero else 0, ctx.size, size=n, dtype=np.int64)


# --- field axioms -----------------------------------------------------------

def field_axioms(rng, samples: int, ms=FIELD_MS) -> list[LawResult]:
    out = []
    for m in ms:
        ctx = get_field(m)
        mul = ctx.vmul
        a, b, c = (_elems(rng, ctx, samples) for _ in range(3))
        u = _elems(rng, ctx, samples, nonzero=True)
        k = int(rng.integers(0, m))
        laws = {
            "commutativity": mul(a, b) != mul(b, a),
            "associativity": mul(mul(a, b), c) != mul(a, mul(b, c)),
            "distributivity": mul(a, b ^ c) != (mul(a, b) ^ mul(a, c)),
            "inverse": mul(u, ctx.vinv(u)) != 1,
            "frobenius additive": ctx.vfrob(a ^ b, k) != (ctx.vfrob(a, k) ^ ctx.vfrob(b, k)),
            "frobenius multiplicative": ctx.vfrob(mul(a, b), k) != mul(ctx.vfrob(a, k), ctx.vfrob(b, k)),
            "frobenius order m": ctx.vfrob(a, m) != a,
        }
        for name, bad in laws.items():
            out.append(_record(LawResult("field", name, m, samples), bad, a=a, b=b, c=c, u=u))
        if ctx.has_tables:
            tr = ctx.trace_table()
            bad = tr[ctx.vfrob(a, k)] != tr[a]
        else:
            bad = np.array([ctx.trace(ctx.frobenius(int(x), k)) != ctx.trace(int(x)) for x in a])
        out.append(_record(LawResult("field", "trace frobenius-invariant", m, len(bad)), bad, a=a))
    return out


# --- bidegree identity --------------------------------------------------------

def _random_pair(rng, ctx: FieldCtx) -> BiprojectivePair:
    m = ctx.m
    k, l = (int(v) for v in rng.integers(0, m, size=2))
    c = [int(v) for v in _elems(rng, ctx, 8)]
    return BiprojectivePair(ctx, k, l, tuple(c[:4]), tuple(c[4:]))


def bidegree_identity(rng, samples: int, ms=PAIR_MS, pairs: int = 20) -> list[LawResult]:
    """F(tx, ty) = (t^(q+1) f(x, y), t^(r+1) g(x, y)) for random F, t, x, y."""
    out = []
    for m in ms:
        ctx = get_field(m)
        res = LawResult("biproj", "bidegree identity", m, 0)
        per = -(-samples // pairs)
        bad_all, cols = [], {"t": [], "x": [], "y": []}
        for _ in range(pairs):
            F = _random_pair(rng, ctx)
            t = _elems(rng, ctx, per, nonzero=True)
            x, y = _elems(rng, ctx, per), _elems(rng, ctx, per)
            f, g = evaluate_many(F, x, y)
            ft, gt = evaluate_many(F, ctx.vmul(t, x), ctx.vmul(t, y))
            bad_all.append((ft != ctx.vmul(ctx.vpow(t, (1 << F.k) + 1), f))
                           | (gt != ctx.vmul(ctx.vpow(t, (1 << F.l) + 1), g)))
            cols["t"].append(t)
            cols["x"].append(x)
            cols["y"].append(y)
        res.samples = per * pairs
        out.append(_record(res, np.concatenate(bad_all), **{k: np.concatenate(v) for k, v in cols.items()}))
    return out


# --- group-action laws --------------------------------------------------------

def _random_g(rng, ctx: FieldCtx) -> GGroupElement:
    while True:
        a = int(rng.integers(1, ctx.size))
        c = [int(v) for v in rng.integers(0, ctx.size, size=4)]
        if ctx.mul(c[0], c[3]) ^ ctx.mul(c[1], c[2]):
            return GGroupElement(ctx, a, *c)


def g_action_laws(rng, samples: int, ms=GACTION_MS) -> list[LawResult]:
    """(gh).f = g.(h.f), 1.f = f, and rootlessness is preserved."""
    out = []
    for m in ms:
        ctx = get_field(m)
        one = GGroupElement.identity(ctx)
        comp = LawResult("g-action", "compatibility", m, samples)
        ident = LawResult("g-action", "identity", m, samples)
        roots = LawResult("g-action", "rootlessness preserved", m, 0)
        for _ in range(samples):
            k = int(rng.integers(1, m))
            p = (int(rng.integers(1, ctx.size)),) + tuple(int(v) for v in rng.integers(0, ctx.size, size=3))
            f = ProjectivePolynomial(ctx, k, p)
            g, h = _random_g(rng, ctx), _random_g(rng, ctx)
            if g_action(g * h, f) != g_action(g, g_action(h, f)):
                comp.failures += 1
                comp.example = comp.example or {"f": list(p), "k": k}
            if g_action(one, f) != f:
                ident.failures += 1
                ident.example = ident.example or {"f": list(p), "k": k}
        # rootless_check needs a nonzero x^(q+1) coefficient on both sides, so redraw until
        # `samples` usable pairs have been seen
        while roots.samples < samples:
            k = int(rng.integers(1, m))
            p = (int(rng.integers(1, ctx.size)),) + tuple(int(v) for v in rng.integers(0, ctx.size, size=3))
            f = ProjectivePolynomial(ctx, k, p)
            gf = g_action(_random_g(rng, ctx), f)
            if not gf.coeffs[0]:
                continue
            roots.samples += 1
            if rootless_check(gf) != rootless_check(f):
                roots.failures += 1
                roots.example = roots.example or {"f": list(p), "k": k}
        out += [comp, ident, roots]
    return out


# --- Parseval -----------------------------------------------------------------

def parseval(rng, samples: int, ms=PARSEVAL_MS, pairs: int = 50) -> list[LawResult]:
    """sum_a W_F(b, a)^2 = 2^(2n) for every component b of random pairs."""
    out = []
    for m in ms:
        ctx = get_field(m)
        n = 2 * m
        res = LawResult("walsh", "parseval per component", m, 0)
        per = -(-samples // pairs)
        for _ in range(pairs):
            T = to_truth_table(_random_pair(rng, ctx))
            for _ in range(per):
                b = (int(rng.integers(0, ctx.size)), int(rng.integers(0, ctx.size)))
                if b == (0, 0):
                    b = (1, 0)
                W = walsh_row(T, b)
                res.samples += 1
                if int(np.dot(W, W)) != 1 << (2 * n):
                    res.failures += 1
                    res.example = res.example or {"b0": b[0], "b1": b[1]}
        out.append(res)
    return out


SUITES = {"field": field_axioms, "bidegree": bidegree_identity, "g-action": g_action_laws,
          "parseval": parseval}


def run_suites(samples: int = 10_000, seed: int = 0, suites=None) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport()
    for name in suites or SUITES:
        rep.results.extend(SUITES[name](rng, samples))
    return rep


def format_report(rep: SuiteReport) -> str:
    lines = []
    for r in rep.results:
        mark = "PASS" if r.ok else "FAIL"
        extra = "" if r.ok else f"  first counterexample {r.example}"
        lines.append(f"{mark}  {r.suite:9s} {r.law:28s} m={r.m:<3d} n={r.samples}{extra}")
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m biprojapn.properties", description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--suite", action="append", choices=sorted(SUITES))
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rep = run_suites(args.samples, args.seed, args.suite)
    print(json.dumps(rep.to_json(), indent=2) if args.json else format_report(rep))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
