"""Canonical enumeration of normalized support families, desk-scale
verification of the determinant conjecture over small parameter grids,
necessity fuzzing, and reduction cross-checks.

A family is encoded column-side: a multiset of labels Q (subsets of the m
groups, stored as bitmasks) whose per-group incidence counts equal k - r_i.
Canonical form is the lexicographically minimal sorted label list over all
group permutations preserving the multiplicity partition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import permutations

from .field import PrimeField
from .reduce import common_multiset, strip_common
from .support import (
    Family,
    MultisetFamily,
    SupportFamily,
    check_condition,
    intersection_size,
)
from .tmatrix import (
    DEFAULT_EXACT_LIMIT,
    DEFAULT_TRIALS,
    IdentityVerdict,
    build_T,
    decide_identity,
    default_prime,
    extract_certificate,
    exact_identity_test,
    identity_test,
    verify_certificate,
)


def partitions(total: int, parts: int, cap: int | None = None):
    """Partitions of `total` into exactly `parts` positive non-increasing
    parts, in descending lexicographic order."""
    cap = total if cap is None else cap
    if parts == 1:
        if 1 <= total <= cap:
            yield (total,)
        return
    for first in range(min(cap, total - parts + 1), 0, -1):
        for rest in partitions(total - first, parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=64)
def _stabilizer_tables(r: tuple[int, ...]) -> list[list[int]]:
    """Bitmask relabeling tables for every group permutation preserving r."""
    m = len(r)
    tables = []
    for perm in permutations(range(m)):
        if tuple(r[p] for p in perm) != r:
            continue
        # group at old position perm[i] moves to position i
        dest = [0] * m
        for new, old in enumerate(perm):
            dest[old] = new
        table = [0] * (1 << m)
        for mask in range(1 << m):
            out = 0
            rem = mask
            while rem:
                b = rem & -rem
                out |= 1 << dest[b.bit_length() - 1]
                rem ^= b
            table[mask] = out
        tables.append(table)
    return tables


def _is_canonical(labels: tuple[int, ...], tables: list[list[int]]) -> bool:
    for table in tables:
        if tuple(sorted(table[x] for x in labels)) < labels:
            return False
    return True


def _canonical_labels(labels: tuple[int, ...], tables: list[list[int]]) -> tuple[int, ...]:
    return min(tuple(sorted(table[x] for x in labels)) for table in tables)


@dataclass(frozen=True)
class CanonicalFamily:
    """Canonical representative: non-increasing multiplicities plus the sorted
    multiset of column labels (bitmasks over the groups)."""

    k: int
    r: tuple[int, ...]
    labels: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_family(self) -> SupportFamily:
        sets = tuple(
            tuple(j for j, lab in enumerate(self.labels, start=1) if lab >> i & 1)
            for i in range(self.m)
        )
        return SupportFamily(self.k, self.n, sets, self.r)

    def to_json(self) -> dict:
        return self.to_family().to_json()


def _nonsingleton_masks(m: int) -> list[int]:
    masks = [x for x in range(1, 1 << m) if bin(x).count("1") >= 2]
    masks.sort(key=lambda x: (-bin(x).count("1"), x))
    return masks


def enumerate_families(m: int, k: int, condition_only: bool = False):
    """Yield every normalized family at (m, k) up to symmetry.

    Deterministic order: multiplicity partitions descending, then label
    multisets in recursion order, non-canonical representatives skipped.
    Demands not met by multi-group labels are completed by forced singleton
    columns, so the recursion never dead-ends.
    """
    if not 2 <= m <= k:
        raise ValueError("need 2 <= m <= k")
    masks = _nonsingleton_masks(m)
    for r in partitions(k, m):
        tables = _stabilizer_tables(r)
        demand = [k - ri for ri in r]
        chosen: list[int] = []

        def rec(idx: int):
            if idx == len(masks):
                labels = list(chosen)
                for i, d in enumerate(demand):
                    labels.extend([1 << i] * d)
                labels_t = tuple(sorted(labels))
                if _is_canonical(labels_t, tables):
                    fam = CanonicalFamily(k, r, labels_t)
                    if not condition_only or check_condition(fam.to_family()).holds:
                        yield fam
                return
            mask = masks[idx]
            bits = [i for i in range(m) if mask >> i & 1]
            top = min(demand[i] for i in bits)
            for c in range(top + 1):
                if c:
                    for i in bits:
                        demand[i] -= 1
                    chosen.append(mask)
                yield from rec(idx + 1)
            for _ in range(top):
                chosen.pop()
            for i in bits:
                demand[i] += top

        yield from rec(0)


def sample_family(m: int, k: int, rng: random.Random) -> CanonicalFamily:
    """Draw a random normalized family at (m, k) and canonicalize it.

    The multiplicity partition is drawn uniformly; columns are built by
    repeatedly taking a uniform nonempty label over the groups with remaining
    demand. Approximately, not exactly, uniform over canonical forms.
    """
    parts = list(partitions(k, m))
    r = parts[rng.randrange(len(parts))]
    demand = [k - ri for ri in r]
    labels: list[int] = []
    while any(demand):
        active = [i for i in range(m) if demand[i]]
        sub = rng.randrange(1, 1 << len(active))
        mask = 0
        for t, i in enumerate(active):
            if sub >> t & 1:
                mask |= 1 << i
                demand[i] -= 1
        labels.append(mask)
    tables = _stabilizer_tables(r)
    return CanonicalFamily(k, r, _canonical_labels(tuple(sorted(labels)), tables))


@dataclass
class CellResult:
    m: int
    k: int
    mode: str
    enumerated: int = 0
    condition_ok: int = 0
    nonzero: int = 0
    exact_resolved: int = 0
    inconclusive: list = dc_field(default_factory=list)
    counterexamples: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "mode": self.mode,
            "enumerated": self.enumerated,
            "condition_ok": self.condition_ok,
            "nonzero": self.nonzero,
            "exact_resolved": self.exact_resolved,
            "inconclusive": self.inconclusive,
            "counterexamples": self.counterexamples,
        }


@dataclass
class VerificationReport:
    seed: int
    trials: int
    exact_limit: int
    m_max: int
    k_max: int
    samples: int
    cells: list = dc_field(default_factory=list)

    def counterexamples(self) -> list:
        return [c for cell in self.cells for c in cell.counterexamples]

    def inconclusives(self) -> list:
        return [c for cell in self.cells for c in cell.inconclusive]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "exact_limit": self.exact_limit,
            "grid": {"m_max": self.m_max, "k_max": self.k_max},
            "samples_per_sampled_cell": self.samples,
            "cells": [c.to_json() for c in self.cells],
            "counterexamples": self.counterexamples(),
            "inconclusive": self.inconclusives(),
        }


def _cell_seed(seed: int, m: int, k: int) -> int:
    return (seed * 1_000_003 + m * 10_007 + k) * 1_000_003


def verify_cell(
    m: int,
    k: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    samples: int | None = None,
) -> CellResult:
    """Verify one (m, k) cell, exhaustively or by sampling.

    Every condition-satisfying family is identity-tested with exact
    escalation; proven_zero results are counterexamples, unresolved
    likely_zero results are listed as inconclusive.
    """
    mode = "sampled" if samples else "exhaustive"
    cell = CellResult(m, k, mode)
    base = _cell_seed(seed, m, k)
    if samples:
        rng = random.Random(base)
        fams = (sample_family(m, k, rng) for _ in range(samples))
    else:
        fams = enumerate_families(m, k)
    for idx, cf in enumerate(fams):
        cell.enumerated += 1
        fam = cf.to_family()
        if not check_condition(fam).holds:
            continue
        cell.condition_ok += 1
        verdict = decide_identity(
            fam, trials=trials, seed=base + idx + 1, exact_limit=exact_limit
        )
        if verdict.status == "nonzero":
            cell.nonzero += 1
            if verdict.method == "exact":
                cell.exact_resolved += 1
        elif verdict.status == "proven_zero":
            cell.counterexamples.append(fam.to_json())
        else:
            cell.inconclusive.append(fam.to_json())
    return cell


def verify_grid(
    m_max: int,
    k_max: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    samples: int = 10_000,
    sample_above_m: int = 4,
    jobs: int = 1,
) -> VerificationReport:
    """Verify all cells 2 <= m <= min(m_max, k), m <= k <= k_max.

    Cells with m > sample_above_m switch to sampled mode (`samples` draws
    each); the report records the mode per cell. With jobs > 1, cells run in
    parallel worker processes and are merged back in grid order.
    """
    report = VerificationReport(seed, trials, exact_limit, m_max, k_max, samples)
    cells = [
        (m, k)
        for m in range(2, m_max + 1)
        for k in range(m, k_max + 1)
    ]
    args = [
        (m, k, trials, seed, exact_limit, samples if m > sample_above_m else None)
        for m, k in cells
    ]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            report.cells = list(pool.map(_verify_cell_star, args))
    else:
        report.cells = [_verify_cell_star(a) for a in args]
    return report


def _verify_cell_star(args) -> CellResult:
    return verify_cell(*args)


def random_violating_family(
    rng: random.Random, k_max: int = 6, m_choices=(2, 3, 4)
) -> MultisetFamily:
    """Random normalized multiset family violating the feasibility condition.

    Plants k - sum(r_i over I) + 1 common columns across a random I with
    |I| >= 2, then fills the remaining slots with random columns.
    """
    while True:
        m = rng.choice(m_choices)
        k = rng.randrange(m, k_max + 1)
        cut = sorted(rng.sample(range(1, k), m - 1))
        r = [b - a for a, b in zip([0] + cut, cut + [k])]
        isize = rng.randrange(2, m + 1)
        I = sorted(rng.sample(range(1, m + 1), isize))
        t = k - sum(r[i - 1] for i in I) + 1
        if t < 1 or any(k - r[i - 1] < t for i in I):
            continue
        n = t + rng.randrange(1, 2 * k)
        maps: list[dict[int, int]] = []
        for i in range(1, m + 1):
            mu: dict[int, int] = {}
            planted = t if i in I else 0
            for j in range(1, planted + 1):
                mu[j] = 1
            for _ in range(k - r[i - 1] - planted):
                j = rng.randrange(1, n + 1)
                mu[j] = mu.get(j, 0) + 1
            maps.append(mu)
        fam = MultisetFamily.from_maps(k, n, maps, r).canonicalize()[0]
        if check_condition(fam).holds:
            continue
        return fam


def random_condition_family(
    rng: random.Random, m_range=(2, 4), k_max: int = 6
) -> SupportFamily:
    """Random normalized condition-satisfying set family (multiset draws with
    a repeated column are rejected)."""
    while True:
        m = rng.randrange(m_range[0], m_range[1] + 1)
        k = rng.randrange(m, k_max + 1)
        fam = sample_family(m, k, rng).to_family()
        if check_condition(fam).holds:
            return fam


def random_strippable_family(
    rng: random.Random, m_range=(2, 4), k_max: int = 6
) -> tuple[MultisetFamily, int]:
    """Random normalized multiset family with empty total intersection and a
    nonempty common multiset outside some excluded group; returns the family
    and the excluded index."""
    while True:
        m = rng.randrange(m_range[0], m_range[1] + 1)
        k = rng.randrange(max(m, 3), k_max + 1)
        cut = sorted(rng.sample(range(1, k), m - 1))
        r = [b - a for a, b in zip([0] + cut, cut + [k])]
        excluded = rng.randrange(1, m + 1)
        n = rng.randrange(2, 2 * k)
        shared = rng.randrange(1, n + 1)
        maps: list[dict[int, int]] = []
        for i in range(1, m + 1):
            mu: dict[int, int] = {}
            if i != excluded:
                mu[shared] = 1
            while sum(mu.values()) < k - r[i - 1]:
                j = rng.randrange(1, n + 1)
                if i == excluded and j == shared:
                    continue
                mu[j] = mu.get(j, 0) + 1
            maps.append(mu)
        fam = MultisetFamily.from_maps(k, n, maps, r).canonicalize()[0]
        if intersection_size(fam, range(1, m + 1)) != 0:
            continue
        s0 = sum(common_multiset(fam, excluded).values())
        # the excluded group keeps its size, so it must retain >= 1 block row
        if s0 == 0 or s0 >= r[excluded - 1]:
            continue
        return fam, excluded


@dataclass
class FuzzReport:
    samples: int
    passed: int = 0
    failures: list = dc_field(default_factory=list)

    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "passed": self.passed,
            "failures": self.failures,
        }


def necessity_fuzz(
    samples: int,
    seed: int = 0,
    k_max: int = 6,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    evaluations: int = 20,
) -> FuzzReport:
    """Contrapositive necessity check on condition-violating families.

    Each generated violator must have det T identically zero: proven exactly
    for k <= exact_limit, otherwise by vanishing at `evaluations` random
    points. A singularity certificate is extracted at a sampled point and
    verified exactly.
    """
    rng = random.Random(seed)
    report = FuzzReport(samples)
    for idx in range(samples):
        fam = random_violating_family(rng, k_max)
        p = default_prime(fam)
        field = PrimeField(p)
        if fam.k <= exact_limit:
            verdict = exact_identity_test(fam, exact_limit, seed=seed + idx)
            if verdict.status != "proven_zero":
                report.failures.append(
                    {"family": fam.to_json(), "reason": "exact test found nonzero"}
                )
                continue
        else:
            vanished = all(
                int(
                    build_T(
                        fam, [rng.randrange(p) for _ in range(fam.n)], field
                    ).matrix.det()
                )
                == 0
                for _ in range(evaluations)
            )
            if not vanished:
                report.failures.append(
                    {"family": fam.to_json(), "reason": "random evaluation nonzero"}
                )
                continue
        alpha = [rng.randrange(p) for _ in range(fam.n)]
        tinst = build_T(fam, alpha, field)
        cert = extract_certificate(tinst)
        if cert is None or not verify_certificate(cert, tinst):
            report.failures.append(
                {"family": fam.to_json(), "reason": "certificate missing or invalid"}
            )
            continue
        report.passed += 1
    return report


def _witness_nonzero(fam: Family, alpha: list[int], p: int) -> bool:
    return int(build_T(fam, alpha, PrimeField(p)).matrix.det()) != 0


def find_witness(
    fam: Family, rng: random.Random, p: int | None = None, attempts: int = 200
) -> tuple[int, list[int]] | None:
    """Search for an alpha assignment with det T != 0; None if all fail."""
    p = p or default_prime(fam)
    for _ in range(attempts):
        alpha = [rng.randrange(p) for _ in range(fam.n)]
        if _witness_nonzero(fam, alpha, p):
            return p, alpha
    return None


def reduction_cross_check(samples: int, seed: int = 0) -> FuzzReport:
    """Numerical consistency of the reduction implications.

    strip_common: exact condition equivalence before and after, plus
    "stripped nonzero implies original nonzero" via a direct witness search
    on the original. Merge checks live in the dedicated test suite where the
    column maps are tracked.
    """
    rng = random.Random(seed)
    report = FuzzReport(samples)
    for _ in range(samples):
        fam, excluded = random_strippable_family(rng)
        stripped = strip_common(fam, excluded)
        if check_condition(fam).holds != check_condition(stripped).holds:
            report.failures.append(
                {"family": fam.to_json(), "reason": "condition equivalence broken"}
            )
            continue
        sv = identity_test(stripped, seed=rng.randrange(1 << 30))
        if sv.status == "nonzero":
            lifted = find_witness(fam, rng)
            if lifted is None:
                report.failures.append(
                    {"family": fam.to_json(), "reason": "implication witness missing"}
                )
                continue
        report.passed += 1
    return report
