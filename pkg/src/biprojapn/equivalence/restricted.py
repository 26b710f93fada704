"""Restricted EL-equivalence between biprojective pairs.

When F has exponents k, l with l not in {0, m/2}, k != +-l (mod m) (and the
same for k), any EL-equivalence from F to another biprojective pair can be
replaced by one with monomial blocks: M_i = c_i x^(2^t), L diagonal or
anti-diagonal with monomial entries, and N = 0 except on an xy-type
component (exponent 0), where N absorbs the x^2 and y^2 terms.  So deciding
equivalence reduces to a finite search, done by the kernels in ``_solver``.

The search itself is sound for positive answers without any precondition;
a negative answer is a proof of inequivalence only under the preconditions
plus the centralizer condition checked in ``centralizer``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..apn import frob_tables
from ..biproj import BiprojectivePair
from ..errors import DomainError, PreconditionViolated, SearchFailed
from . import _solver
from .elmap import ZERO, ELMap, mono

PLUS, MINUS, XY = 0, 1, 2
FREE_CAP = 22


def preconditions(F: BiprojectivePair) -> list[str]:
    """Reasons the reduction to monomial maps does not apply to F (empty if it does)."""
    m, k, l = F.m, F.k, F.l
    bad = []
    if 2 * k == m or 2 * l == m:
        bad.append("an exponent equals m/2")
    if k == 0 and l == 0:
        bad.append("both exponents are zero")
    if (k - l) % m == 0 or (k + l) % m == 0:
        bad.append("k = +-l (mod m)")
    return bad


def _exps(P: BiprojectivePair) -> tuple[int, int]:
    return P.k, P.l


def _coeffs(P: BiprojectivePair, i: int) -> tuple[int, int, int, int]:
    return P.coeffs0 if i == 0 else P.coeffs1


@dataclass(frozen=True)
class PlanRow:
    t: int
    branch: int                 # 0: G_i matched with F_i, 1: with F_(1-i)
    types: tuple[int, int]
    tprime: tuple[int, int]     # Frobenius degree of L's block for component i


def match_types(e: int, k: int, m: int) -> list[int]:
    """Ways G-exponent e can match F-exponent k."""
    if e % m == 0 and k % m == 0:
        return [XY]
    out = []
    if (e - k) % m == 0:
        out.append(PLUS)
    if (e + k) % m == 0:
        out.append(MINUS)
    return out


def build_plan(F: BiprojectivePair, G: BiprojectivePair, t_values=None, branches=(0, 1)) -> list[PlanRow]:
    """All (t, branch, sign) combinations consistent with the exponents, t ascending."""
    m = F.m
    rows = []
    for t in (range(m) if t_values is None else t_values):
        for br in branches:
            j = (0, 1) if br == 0 else (1, 0)
            opts = [match_types(_exps(G)[i], _exps(F)[j[i]], m) for i in range(2)]
            for s0 in opts[0]:
                for s1 in opts[1]:
                    tp = tuple((t + _exps(G)[i]) % m if s == MINUS else t for i, s in enumerate((s0, s1)))
                    rows.append(PlanRow(t, br, (s0, s1), tp))  # type: ignore[arg-type]
    return rows


def _targets(F: BiprojectivePair, row: PlanRow) -> np.ndarray:
    ctx = F.ctx
    T = np.zeros((2, 4), dtype=np.int64)
    for i in range(2):
        j = i if row.branch == 0 else 1 - i
        a, b, c, d = _coeffs(F, j)
        if row.types[i] == MINUS:
            b, c = c, b
        T[i] = [ctx.frobenius(x, row.tprime[i]) for x in (a, b, c, d)]
    return T


@dataclass(frozen=True)
class MonomialSolution:
    row: PlanRow
    c: tuple[int, int, int, int]
    d: tuple[int, int]


def solve_monomial(F: BiprojectivePair, G: BiprojectivePair, *, t_values=None, branches=(0, 1),
                   first_only: bool = True, max_out: int = 1 << 16) -> tuple[int, list[MonomialSolution]]:
    """Solve G o M = L o F + N over monomial maps with (c1, c3) normalized.

    Returns (count, solutions).  In first_only mode at most one solution: the
    first in (t, branch, sign, c1 = 1 before 0, c3) order, least (c2, c4, d0, d1) within.
    """
    if F.ctx != G.ctx:
        raise DomainError("F and G live on different fields")
    ctx = F.ctx
    plan = build_plan(F, G, t_values, branches)
    if not plan:
        return 0, []
    targets = np.stack([_targets(F, r) for r in plan])
    types = np.array([r.types for r in plan], dtype=np.int64)
    out = np.zeros((max(1, max_out), 6), dtype=np.int64)
    plan_of = np.zeros(max(1, max_out), dtype=np.int64)
    total = _solver.monomial_search(ctx.m, ctx.exp, ctx.log, frob_tables(ctx), G.coeff_vector,
                                    np.array(_exps(G), dtype=np.int64), targets, types,
                                    first_only, max_out, FREE_CAP, out, plan_of)
    if total < 0:
        raise SearchFailed("solution space too large to enumerate")
    sols = [MonomialSolution(plan[int(plan_of[i])], tuple(int(v) for v in out[i, :4]),
                             (int(out[i, 4]), int(out[i, 5])))
            for i in range(min(total, max_out))]
    return int(total), sols


def solution_to_elmap(F: BiprojectivePair, G: BiprojectivePair, sol: MonomialSolution) -> ELMap:
    """The EL-map (Gamma_F -> Gamma_G) described by a monomial solution."""
    ctx = F.ctx
    row = sol.row
    t = row.t
    L = [ZERO] * 4
    N = [ZERO] * 4
    c1, c2, c3, c4 = sol.c
    for i in range(2):
        j = i if row.branch == 0 else 1 - i
        L[2 * i + j] = mono(ctx, sol.d[i], row.tprime[i])
        if row.types[i] == XY:
            # leftover x^2 / y^2 terms: coefficient of G_i o M_0 minus d * F_j^(2^t)
            gp = _coeffs(G, i)
            fp = _coeffs(F, j)
            e = _exps(G)[i]
            alpha = _qeval(ctx, gp, c1, c3, e) ^ ctx.mul(sol.d[i], ctx.frobenius(fp[0], t))
            delta = _qeval(ctx, gp, c2, c4, e) ^ ctx.mul(sol.d[i], ctx.frobenius(fp[3], t))
            N[2 * i] = mono(ctx, alpha, t + 1)
            N[2 * i + 1] = mono(ctx, delta, t + 1)
    return ELMap.from_monomials(ctx, sol.c, t, tuple(L), tuple(N))  # type: ignore[arg-type]


def _qeval(ctx, p, x, y, e):
    xe, ye = ctx.frobenius(x, e), ctx.frobenius(y, e)
    mul = ctx.mul
    return mul(p[0], mul(xe, x)) ^ mul(p[1], mul(xe, y)) ^ mul(p[2], mul(x, ye)) ^ mul(p[3], mul(ye, y))


def monomial_witness(F: BiprojectivePair, G: BiprojectivePair) -> ELMap | None:
    """First monomial EL-map from Gamma_F to Gamma_G, no preconditions assumed."""
    _, sols = solve_monomial(F, G, first_only=True)
    return solution_to_elmap(F, G, sols[0]) if sols else None


def restricted_equiv(F: BiprojectivePair, G: BiprojectivePair) -> ELMap | None:
    """Witness Gamma_F -> Gamma_G, or None when no monomial map exists.

    Raises PreconditionViolated if F's exponents fall outside the range where
    monomial maps suffice.
    """
    bad = preconditions(F)
    if bad:
        raise PreconditionViolated("; ".join(bad))
    return monomial_witness(F, G)


# --- verdicts --------------------------------------------------------------

@dataclass
class Verdict:
    equivalent: bool | None
    justification: str          # witness | exponent-filter | coefficient-obstruction | invariant-separation | undecided
    witness: ELMap | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"equivalent": self.equivalent, "justification": self.justification, **self.detail}
        if self.witness is not None:
            out["witness"] = self.witness.to_text()
        return out


def negative_is_proof(F: BiprojectivePair) -> tuple[bool, str]:
    """Whether an empty monomial search certifies inequivalence from F's side."""
    from .centralizer import condition_c

    m = F.m
    if preconditions(F):
        return False, "preconditions fail"
    if m <= 2 or m == 6:
        return False, f"no usable prime divisor at m={m}"
    ok, info = condition_c(F)
    return ok, info


def decide_equivalence(F: BiprojectivePair, G: BiprojectivePair, *, use_invariants: bool = True) -> Verdict:
    """Decide EL-equivalence of two biprojective pairs, with a justification."""
    sides = [(F, G, False), (G, F, True)]
    proof_side = None
    for A, B, swapped in sides:
        if not preconditions(A):
            proof_side = (A, B, swapped)
            break
    A, B, swapped = proof_side or sides[0]
    plan = build_plan(A, B)
    w = monomial_witness(A, B) if plan else None
    if w is None and proof_side is None:
        # neither side qualifies; a positive search from the other side is still sound
        w2 = monomial_witness(G, F)
        if w2 is not None:
            A, B, swapped, w = G, F, True, w2
    if w is not None:
        if swapped:
            w = w.inverse()
        return Verdict(True, "witness", w)
    if proof_side is not None:
        ok, info = negative_is_proof(A)
        if ok:
            return Verdict(False, "exponent-filter" if not plan else "coefficient-obstruction",
                           detail={"condition_c": info})
        reason = info
    else:
        reason = "preconditions fail on both sides"
    if use_invariants:
        from ..walsh import invariants_differ

        diff = invariants_differ(F, G)
        if diff:
            return Verdict(False, "invariant-separation", detail={"invariant": diff})
    return Verdict(None, "undecided", detail={"reason": reason})
