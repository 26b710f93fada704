"""The centralizer of the scalar maps Z_P inside Aut_EL(F).

Its elements are the maps with M = [[c1, c2], [c3, c4]] (no Frobenius
twist), L diagonal with monomial entries and N = 0 (N absorbs the square
terms on an xy-type component).  Scaling M by a in M^x stays inside, so the
size is (2^m - 1) times the number of solutions with (c1, c3) normalized;
that quotient is the index reported here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..biproj import BiprojectivePair
from ..errors import PreconditionViolated, TooLarge
from ..field import primitive_prime_divisor
from . import _solver
from .restricted import XY, MonomialSolution, preconditions, solution_to_elmap, solve_monomial

CLASSES = ("Z", "Z_omega", "A", "B", "other")
MAX_EXHAUSTIVE_M = 7


@dataclass
class CentralizerReport:
    m: int
    size: int
    index: int
    classes: dict[str, int]               # element counts per class
    representatives: list[MonomialSolution] = field(default_factory=list)
    method: str = "normalized"

    def to_json(self) -> dict:
        return {"m": self.m, "size": self.size, "index": self.index, "classes": self.classes,
                "method": self.method}


def classify_element(ctx, c: tuple[int, int, int, int]) -> str:
    c1, c2, c3, c4 = c
    if c2 == 0 and c3 == 0:
        if c4 == c1:
            return "Z"
        if ctx.m % 2 == 0:
            w = ctx.omega()
            if c4 in (ctx.mul(w, c1), ctx.mul(ctx.mul(w, w), c1)):
                return "Z_omega"
    if c1 == c2 == c3 and c4 == 0:
        return "A"
    if c1 == 0 and c2 == c3 == c4:
        return "B"
    return "other"


def _types(F: BiprojectivePair) -> np.ndarray:
    return np.array([XY if e == 0 else 0 for e in (F.k, F.l)], dtype=np.int64)


def centralizer_search(F: BiprojectivePair, method: str = "normalized") -> CentralizerReport:
    """Enumerate the centralizer; ``method`` is "normalized" or "exhaustive" (m <= 7)."""
    if preconditions(F):
        raise PreconditionViolated("; ".join(preconditions(F)))
    ctx = F.ctx
    unit = ctx.order
    if method == "normalized":
        total, sols = solve_monomial(F, F, t_values=[0], branches=(0,), first_only=False)
        classes = dict.fromkeys(CLASSES, 0)
        for s in sols:
            classes[classify_element(ctx, s.c)] += unit
        return CentralizerReport(ctx.m, total * unit, total, classes, sols, method)
    if method == "exhaustive":
        if ctx.m > MAX_EXHAUSTIVE_M:
            raise TooLarge(f"exhaustive scan is limited to m <= {MAX_EXHAUSTIVE_M}")
        counts = np.zeros(5, dtype=np.int64)
        omega = ctx.omega() if ctx.m % 2 == 0 else 0
        total = _solver.centralizer_exhaustive(ctx.m, ctx.exp, ctx.log, ctx.frob_table(F.k),
                                               ctx.frob_table(F.l), F.coeff_vector, _types(F),
                                               omega, counts)
        classes = {name: int(v) for name, v in zip(CLASSES, counts)}
        return CentralizerReport(ctx.m, int(total), int(total) // unit, classes, [], method)
    raise ValueError(f"unknown method {method!r}")


def centralizer_elements(F: BiprojectivePair, report: CentralizerReport):
    """EL-maps for the normalized representatives of a report."""
    return [solution_to_elmap(F, F, s) for s in report.representatives]


@lru_cache(maxsize=4096)
def _index(F: BiprojectivePair) -> int:
    return centralizer_search(F).index


def condition_c(F: BiprojectivePair) -> tuple[bool, str]:
    """The index condition: a primitive prime divisor p of 2^m - 1 exists and p does not divide the index."""
    p = primitive_prime_divisor(F.m)
    if p is None:
        return False, f"no primitive prime divisor of 2^{F.m}-1"
    idx = _index(F)
    if idx % p == 0:
        return False, f"p={p} divides index {idx}"
    return True, f"p={p}, index={idx}"
