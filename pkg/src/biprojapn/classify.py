"""Classification of family instances into EL-equivalence classes.

Instances are first merged by cheap exact rules that come with witnesses:
G-orbits for Carlet functions (a BFS over monic rootless polynomials) and
the closed-form F4 maps.  The surviving representatives are compared
pairwise with ``decide_equivalence`` and joined with union-find.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .biproj import BiprojectivePair
from .equivalence.elmap import ZERO, ELMap, is_graph_equiv, mono
from .equivalence.gaction import carlet_orbits, carlet_pair, carlet_to_zp
from .equivalence.restricted import decide_equivalence
from .errors import ConditionViolated, UnsupportedM
from .families import (DISPLAY_NAMES, FAMILIES, FamilyInstance, carlet_params, enumerate_family,
                       enumerate_params, family_supported, make_family, normalize_tag, parse_instance,
                       valid_k)
from .field import FieldCtx, get_field, primitive_prime_divisor


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            # the smaller index stays root, so results do not depend on merge order
            self.parent[max(a, b)] = min(a, b)


@dataclass
class ClassificationReport:
    m: int
    family: str
    instance_count: int
    class_count: int
    representatives: list[str]
    class_sizes: list[int]
    assignment: np.ndarray                      # class id per instance
    joined_by: np.ndarray                       # how each instance joined its class (code into JOIN)
    verdicts: list[dict] = field(default_factory=list)
    bounds: dict | None = None
    notes: list[str] = field(default_factory=list)
    labels: list[str] | None = None             # per-instance labels when instances were objects

    JOIN = ("representative", "g-orbit", "closed-form", "witness")

    @property
    def justifications(self) -> dict[str, int]:
        return dict(Counter(v["justification"] for v in self.verdicts if not v["equivalent"]))

    @property
    def undecided(self) -> int:
        return sum(1 for v in self.verdicts if v["equivalent"] is None)

    def to_json(self) -> dict:
        return {"m": self.m, "family": self.family, "instances": self.instance_count,
                "classes": self.class_count,
                "representatives": [{"id": i, "instance": r, "size": s}
                                    for i, (r, s) in enumerate(zip(self.representatives, self.class_sizes))],
                "inequivalence_justifications": self.justifications,
                "undecided_pairs": self.undecided,
                "bounds": self.bounds, "notes": self.notes,
                "verdicts": self.verdicts}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["instance", "class_id", "joined_by"])
        for i in range(self.instance_count):
            lab = self.labels[i] if self.labels else str(i)
            w.writerow([lab, int(self.assignment[i]), self.JOIN[int(self.joined_by[i])]])
        return buf.getvalue()


# --- pairwise stage ---------------------------------------------------------

def _pairwise(reps: list[BiprojectivePair], names: list[str], use_invariants: bool = True,
              verify: bool = True) -> tuple[UnionFind, list[dict], list[int]]:
    """Union-find over representatives; returns (uf, verdict records, join codes)."""
    uf = UnionFind(len(reps))
    verdicts = []
    joined = [0] * len(reps)
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if uf.find(i) == uf.find(j):
                continue
            v = decide_equivalence(reps[i], reps[j], use_invariants=use_invariants)
            rec = {"a": names[i], "b": names[j], **v.to_json()}
            if v.equivalent:
                if verify and not is_graph_equiv(reps[i], reps[j], v.witness):
                    raise AssertionError(f"witness failed to verify for {names[i]} / {names[j]}")
                uf.union(i, j)
                joined[j] = 3
            verdicts.append(rec)
    return uf, verdicts, joined


def _finish(m, family, keys_of_instance, reps, rep_names, premerge_join, use_invariants,
            labels=None, notes=None, bounds=None) -> ClassificationReport:
    uf, verdicts, joined = _pairwise(reps, rep_names, use_invariants)
    roots = sorted({uf.find(i) for i in range(len(reps))})
    cid = {r: n for n, r in enumerate(roots)}
    rep_class = np.array([cid[uf.find(i)] for i in range(len(reps))], dtype=np.int64)
    assignment = rep_class[keys_of_instance]
    joined_by = np.asarray(premerge_join, dtype=np.int8).copy()
    # the instance that stands for a representative inherits the pairwise join code
    sizes = np.bincount(assignment, minlength=len(roots)).tolist()
    keys_of_instance = np.asarray(keys_of_instance)
    uniq, first = np.unique(keys_of_instance, return_index=True)
    joined_by[first] = np.asarray(joined, dtype=np.int8)[uniq]
    return ClassificationReport(m, family, len(keys_of_instance), len(roots),
                                [rep_names[r] for r in roots], sizes, assignment, joined_by,
                                verdicts, bounds, notes or [], labels)


# --- Carlet: G-orbits -------------------------------------------------------

def _carlet_state(m: int, b, c, d):
    return (b << (2 * m)) | (c << m) | d


def classify_carlet(ctx: FieldCtx, use_invariants: bool = True) -> ClassificationReport:
    """All Carlet instances at m, array-based (no per-instance objects)."""
    m = ctx.m
    keys, reps, names = [], [], []
    for k in valid_k("carlet", m):
        states = np.array([_carlet_state(m, b, c, d) for b, c, d in carlet_params(ctx, k)], dtype=np.int64)
        orb = carlet_orbits(ctx, k, states)
        base = len(reps)
        for root in orb.roots:
            mask = (1 << m) - 1
            p = (1, (root >> (2 * m)) & mask, (root >> m) & mask, root & mask)
            reps.append(carlet_pair(ctx, k, p))
            names.append(f"Carlet(m={m} k={k} b={p[1]:#x} c={p[2]:#x} d={p[3]:#x})")
        keys.append(base + orb.label[states])
    keys = np.concatenate(keys)
    join = np.ones(len(keys), dtype=np.int8)
    notes = ["Carlet instances within one k are merged along G-orbits (BFS with explicit G-elements)"]
    return _finish(m, "carlet", keys, reps, names, join, use_invariants, notes=notes)


# --- F4: closed-form maps ---------------------------------------------------

def f4_bounds(m: int) -> dict:
    phi = sum(1 for i in range(1, m + 1) if math.gcd(i, m) == 1)
    h = (1 << (m // 2)) - 2
    return {"lower": phi * h // (2 * m) if phi * h % (2 * m) == 0 else phi * h / (2 * m),
            "upper": phi * h // 2, "within_hypothesis": m > 2 and m != 6}


def _f4_qbar_params(ctx: FieldCtx, k: int, B: int, a: int) -> tuple[int, int, int]:
    Q = 1 << (ctx.m // 2)
    return ctx.m - k, B, ctx.div(ctx.pow(B, Q + 1), a)


def _f4_qbar_map(ctx: FieldCtx, k: int, B: int, a: int) -> ELMap:
    """F_{q,B,a} o M = L o F_{qbar,B,B^(Q+1)/a}, as a map Gamma_target -> Gamma_inst."""
    m, h = ctx.m, ctx.m // 2
    M = (mono(ctx, 1, m - k), ZERO, ZERO, mono(ctx, 1, m - k))
    L = (mono(ctx, 1), ZERO, ZERO, mono(ctx, ctx.div(a, B), h))
    return ELMap(ctx, M, (ZERO,) * 4, L)  # type: ignore[arg-type]


def _f4_b_move(ctx: FieldCtx, k: int, B: int, a: int, B0: int, roots) -> tuple[int, int, int, int] | None:
    """(t, rho, B0, a'') moving B to the fixed non-cube B0 with M = diag(rho x^(2^t), x^(2^t)); None if no t works."""
    Q = 1 << (ctx.m // 2)
    q = 1 << k
    for t in (0, 1):
        rho = roots.get(ctx.div(B, ctx.frobenius(B0, t)))
        if rho is None:
            continue
        # a''^(2^t) = a / rho^(q(Q+1))
        return t, rho, B0, ctx.frobenius(ctx.div(a, ctx.pow(rho, q * (Q + 1))), -t)
    return None


def _f4_b_map(ctx: FieldCtx, k: int, t: int, rho: int) -> ELMap:
    """The B-move as a map Gamma_target -> Gamma_inst."""
    r = 1 << ((k + ctx.m // 2) % ctx.m)
    M = (mono(ctx, rho, t), ZERO, ZERO, mono(ctx, 1, t))
    L = (mono(ctx, ctx.pow(rho, (1 << k) + 1), t), ZERO, ZERO, mono(ctx, ctx.pow(rho, r), t))
    return ELMap(ctx, M, (ZERO,) * 4, L)  # type: ignore[arg-type]


@lru_cache(maxsize=64)
def _qplus1_roots(ctx: FieldCtx, k: int) -> dict[int, int]:
    """v -> least x with x^(q+1) = v."""
    q = 1 << k
    return {ctx.pow(x, q + 1): x for x in range(ctx.size - 1, 0, -1)}


@lru_cache(maxsize=16)
def _least_non_cube(ctx: FieldCtx) -> int:
    return next(a for a in ctx.nonzero() if not ctx.is_cube(a))


def f4_canonical(ctx: FieldCtx, k: int, B: int, a: int, *, witness: bool = True) -> tuple[tuple, ELMap | None]:
    """Canonical (k, B0, a) for an F4 instance and a witness Gamma_inst -> Gamma_canonical.

    With witness=False only the canonical parameters are computed (second item None).
    """
    m = ctx.m
    w = ELMap.identity(ctx) if witness else None
    if k > m // 2:
        if witness:
            w = _f4_qbar_map(ctx, k, B, a).inverse().compose(w)
        k, B, a = _f4_qbar_params(ctx, k, B, a)
    hit = _f4_b_move(ctx, k, B, a, _least_non_cube(ctx), _qplus1_roots(ctx, k))
    if hit is not None:
        t, rho, B0, a2 = hit
        try:
            make_family("f4", ctx, k, B=B0, a=a2)
        except ConditionViolated:
            return (k, B, a), w
        if witness:
            w = _f4_b_map(ctx, k, t, rho).inverse().compose(w)
        B, a = B0, a2
    return (k, B, a), w


# --- generic entry points ----------------------------------------------------

def _premerge(instances: list[FamilyInstance]):
    """Keys and join codes from the exact pre-merge rules."""
    keys, join = [], []
    carlet_groups: dict[tuple, list[int]] = {}
    for idx, inst in enumerate(instances):
        if inst.family == "f4":
            params, _ = f4_canonical(inst.ctx, inst.k, inst.param("B"), inst.param("a"), witness=False)
            keys.append(("f4",) + params)
            join.append(2 if params != (inst.k, inst.param("B"), inst.param("a")) else 0)
        elif inst.family == "carlet":
            carlet_groups.setdefault((inst.ctx, inst.k), []).append(idx)
            keys.append(None)
            join.append(1)
        else:
            keys.append((inst.family, inst.k, inst.params))
            join.append(0)
    for (ctx, k), idxs in carlet_groups.items():
        m = ctx.m
        states = np.array([_carlet_state(m, *(instances[i].param(n) for n in "bcd")) for i in idxs])
        orb = carlet_orbits(ctx, k, np.sort(states))
        for i, s in zip(idxs, states):
            keys[i] = ("carlet", k, int(orb.label[s]))
    return keys, join


def classify(instances: list[FamilyInstance], use_invariants: bool = True) -> ClassificationReport:
    """Classify a list of instances sharing m (order-independent)."""
    if not instances:
        raise ValueError("no instances")
    m = instances[0].m
    if any(i.m != m for i in instances):
        raise ValueError("instances must share m")
    order = sorted(range(len(instances)), key=lambda i: (instances[i].family, instances[i].k, instances[i].params))
    insts = [instances[i] for i in order]
    keys, join = _premerge(insts)
    uniq = sorted(set(keys), key=lambda t: tuple(str(x) for x in t))
    kid = {k: n for n, k in enumerate(uniq)}
    reps, names = [], []
    rep_of = {}
    for idx, key in enumerate(keys):
        if key not in rep_of:
            rep_of[key] = idx
    for key in uniq:
        inst = insts[rep_of[key]]
        if key[0] == "f4":
            k, B, a = key[1:]
            inst = make_family("f4", inst.ctx, k, B=B, a=a)
        reps.append(inst.pair)
        names.append(inst.label())
    key_idx = np.array([kid[k] for k in keys], dtype=np.int64)
    fams = sorted({i.family for i in insts})
    family = fams[0] if len(fams) == 1 else "mixed"
    bounds = f4_bounds(m) if family == "f4" else None
    rep = _finish(m, family, key_idx, reps, names, join, use_invariants,
                  labels=[i.label() for i in insts], bounds=bounds)
    # report in the caller's order
    inv = np.empty(len(order), dtype=np.int64)
    inv[np.array(order)] = np.arange(len(order))
    rep.assignment = rep.assignment[inv]
    rep.joined_by = rep.joined_by[inv]
    rep.labels = [rep.labels[i] for i in inv]
    return rep


def classify_family(tag: str, m: int, poly: int | None = None, use_invariants: bool = True) -> ClassificationReport:
    tag = normalize_tag(tag)
    reason = family_supported(tag, m)
    if reason:
        raise UnsupportedM(DISPLAY_NAMES[tag], m, reason)
    ctx = get_field(m, poly)
    notes = []
    if m == 6 or primitive_prime_divisor(m) is None:
        notes.append(f"m={m}: no primitive prime divisor of 2^m-1, so inequivalence by the "
                     "monomial reduction is disabled; verdicts fall back to invariants")
    if tag == "carlet":
        rep = classify_carlet(ctx, use_invariants)
    else:
        rep = classify(enumerate_family(tag, ctx), use_invariants)
    rep.notes = notes + rep.notes
    if tag == "f4" and rep.bounds is not None and not rep.bounds["within_hypothesis"]:
        rep.notes.append("bounds evaluated outside the m != 6 hypothesis")
    return rep


def family_representatives(tag: str, ctx: FieldCtx, use_invariants: bool = True) -> list[FamilyInstance]:
    """One instance per within-family class (Gold: one per k < m/2, not classified)."""
    tag = normalize_tag(tag)
    if tag == "gold":
        return [make_family("gold", ctx, k, **p) for k, p in enumerate_params("gold", ctx) if 2 * k < ctx.m]
    rep = classify_family(tag, ctx.m, ctx.poly, use_invariants)
    out = []
    for name in rep.representatives:
        out.append(parse_instance(ctx, name))
    return out


def cross_family_sweep(m: int, families=None, poly: int | None = None,
                       use_invariants: bool = True) -> ClassificationReport:
    """Pairwise verdicts between class representatives of different families."""
    ctx = get_field(m, poly)
    fams = [normalize_tag(f) for f in (families or FAMILIES)]
    fams = [f for f in fams if family_supported(f, m) is None]
    reps: list[FamilyInstance] = []
    for f in fams:
        reps.extend(family_representatives(f, ctx, use_invariants))
    notes = []
    verdicts = []
    extra: list[tuple[FamilyInstance, FamilyInstance, ELMap]] = []
    if m % 2 == 0:
        for r in [r for r in reps if r.family == "carlet"]:
            Z, w = carlet_to_zp(r)
            extra.append((r, Z, w))
        notes.append("m even: each Carlet representative is mapped onto a Zhou-Pott function (j = 0)")
    uf = UnionFind(len(reps) + len(extra))
    allreps = reps + [z for _, z, _ in extra]
    names = [r.label() for r in allreps]
    for n, (r, z, w) in enumerate(extra):
        i = reps.index(r)
        verdicts.append({"a": names[i], "b": names[len(reps) + n], "equivalent": True,
                         "justification": "witness", "witness": w.to_text()})
        uf.union(i, len(reps) + n)
    for i in range(len(allreps)):
        for j in range(i + 1, len(allreps)):
            if allreps[i].family == allreps[j].family or uf.find(i) == uf.find(j):
                continue
            v = decide_equivalence(allreps[i].pair, allreps[j].pair, use_invariants=use_invariants)
            if v.equivalent:
                if not is_graph_equiv(allreps[i].pair, allreps[j].pair, v.witness):
                    raise AssertionError("witness failed to verify")
                uf.union(i, j)
            verdicts.append({"a": names[i], "b": names[j], **v.to_json()})
    roots = sorted({uf.find(i) for i in range(len(allreps))})
    cid = {r: n for n, r in enumerate(roots)}
    assignment = np.array([cid[uf.find(i)] for i in range(len(allreps))], dtype=np.int64)
    if m == 6 or primitive_prime_divisor(m) is None:
        notes.append(f"m={m}: verdicts that would need the centralizer condition are downgraded")
    return ClassificationReport(m, "cross-family", len(allreps), len(roots), [names[r] for r in roots],
                                np.bincount(assignment).tolist(), assignment,
                                np.zeros(len(allreps), dtype=np.int8), verdicts, None, notes, names)
