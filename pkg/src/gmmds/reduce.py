"""Problem reductions: common-multiset stripping, tight-set splitting,
column merges, and the eight-condition minimality audit.

Each reduction transforms a family into one or two strictly smaller ones and
carries a determinant implication: if every reduced family has det T not
identically zero, so does the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .support import (
    Family,
    FamilyError,
    MultisetFamily,
    SupportFamily,
    check_condition,
    intersection_size,
    q_dual,
)


def _params(fam: Family) -> tuple[int, int, int]:
    return (fam.m, fam.n, fam.k)


@dataclass(frozen=True)
class ReductionStep:
    """One applied reduction, with enough data to replay it."""

    kind: str  # "strip_common" | "split_tight" | "merge_disjoint" | "merge_multiset"
    params: dict
    before: tuple[int, int, int]
    after: tuple[tuple[int, int, int], ...]
    outputs: tuple[Family, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "before": list(self.before),
            "after": [list(a) for a in self.after],
        }


def common_multiset(fam: Family, excluded: int) -> dict[int, int]:
    """Multiset intersection of all groups except `excluded` (1-indexed)."""
    maps = fam.mu_maps()
    chosen = [m for i, m in enumerate(maps, start=1) if i != excluded]
    if not chosen:
        return {}
    cols = set(chosen[0])
    for m in chosen[1:]:
        cols &= set(m)
    return {j: min(m[j] for m in chosen) for j in sorted(cols)}


def strip_common(fam: Family, excluded: int) -> MultisetFamily:
    """Remove S0 = intersection of all groups but `excluded` from every group,
    dropping k by |S0|.

    Preconditions: the total multiset intersection is empty (which forces
    S0 and S_excluded disjoint) and the family is normalized. A trivially
    empty S0 is rejected so callers can treat it as a no-op explicitly.
    """
    mfam = fam if isinstance(fam, MultisetFamily) else fam.to_multiset()
    if not 1 <= excluded <= mfam.m:
        raise FamilyError(f"excluded group {excluded} out of range")
    if not mfam.is_normalized():
        raise FamilyError("strip_common requires a normalized family")
    if intersection_size(mfam, range(1, mfam.m + 1)) != 0:
        raise FamilyError("total multiset intersection must be empty")
    s0 = common_multiset(mfam, excluded)
    size0 = sum(s0.values())
    if size0 == 0:
        raise FamilyError("S0 is empty; stripping is a no-op")
    maps = mfam.mu_maps()
    new_maps = []
    for i, m in enumerate(maps, start=1):
        if i == excluded:
            new_maps.append(dict(m))
        else:
            new_maps.append({j: c - s0.get(j, 0) for j, c in m.items() if c > s0.get(j, 0)})
    k2 = mfam.k - size0
    r2 = [k2 - sum(m.values()) for m in new_maps]
    if any(r < 1 for r in r2):
        raise FamilyError("stripping would leave a group with no rows")
    return MultisetFamily.from_maps(mfam.k - size0, mfam.n, new_maps, r2)


def strip_common_step(fam: Family, excluded: int) -> ReductionStep:
    out: Family = strip_common(fam, excluded)
    if out.is_setlike():
        out = out.to_sets().canonicalize()[0]
    else:
        out = out.canonicalize()[0]
    return ReductionStep(
        "strip_common",
        {"excluded": excluded},
        _params(fam),
        (_params(out),),
        (out,),
    )


def tight_sets(fam: Family) -> list[tuple[int, ...]]:
    """Index sets I with 2 <= |I| <= m-1 achieving equality in the condition,
    in lexicographic order."""
    out = []
    r = fam.multiplicities
    for size in range(2, fam.m):
        for I in combinations(range(1, fam.m + 1), size):
            if fam.k - sum(r[i - 1] for i in I) == intersection_size(fam, I):
                out.append(I)
    return sorted(out)


def split_tight(fam: SupportFamily, I: tuple[int, ...]) -> tuple[Family, Family]:
    """Split at a tight index set I into two smaller condition-satisfying
    families.

    Part I: (S_i \\ S0) for i in I at k' = k - |S0|; part J: S0 together with
    the groups outside I, at the original k. Bookkeeping identities
    sum |S'_i| = (|I|-1) k' and sum_J |S| = (|J|-1) k are asserted.
    """
    I = tuple(sorted(I))
    if not 2 <= len(I) <= fam.m - 1:
        raise FamilyError("need 2 <= |I| <= m-1")
    if not fam.is_normalized():
        raise FamilyError("split_tight requires a normalized family")
    r = fam.multiplicities
    if fam.k - sum(r[i - 1] for i in I) != intersection_size(fam, I):
        raise FamilyError(f"I={list(I)} is not tight")
    s0 = set.intersection(*(set(fam.sets[i - 1]) for i in I))
    k_i = fam.k - len(s0)
    sets_i = [tuple(sorted(set(fam.sets[i - 1]) - s0)) for i in I]
    mult_i = [r[i - 1] for i in I]
    sub_i = SupportFamily(k_i, fam.n, tuple(sets_i), tuple(mult_i)).canonicalize()[0]

    sets_j = [tuple(sorted(s0))] + [
        fam.sets[i - 1] for i in range(1, fam.m + 1) if i not in I
    ]
    mult_j = [fam.k - len(s0)] + [r[i - 1] for i in range(1, fam.m + 1) if i not in I]
    sub_j = SupportFamily(fam.k, fam.n, tuple(sets_j), tuple(mult_j)).canonicalize()[0]

    assert sum(sub_i.sizes()) == (sub_i.m - 1) * sub_i.k
    assert sum(sub_j.sizes()) == (sub_j.m - 1) * sub_j.k
    for sub in (sub_i, sub_j):
        if not check_condition(sub).holds:
            raise FamilyError("split produced a condition-violating part; bug")
    return sub_i, sub_j


def split_tight_step(fam: SupportFamily, I: tuple[int, ...]) -> ReductionStep:
    a, b = split_tight(fam, I)
    return ReductionStep(
        "split_tight",
        {"I": list(I)},
        _params(fam),
        (_params(a), _params(b)),
        (a, b),
    )


def merge_disjoint_with_map(
    fam: SupportFamily, j1: int, j2: int
) -> tuple[SupportFamily, dict[int, int]]:
    """merge_disjoint plus the old-column -> new-column map (j2 excluded;
    witnesses lift by reading the merged value at map[j1] for column j2)."""
    q = q_dual(fam)
    q1, q2 = set(q[j1]), set(q[j2])
    if q1 & q2:
        raise FamilyError(f"Q_{j1}={sorted(q1)} and Q_{j2}={sorted(q2)} overlap")
    if q1 | q2 == set(range(1, fam.m + 1)):
        raise FamilyError(f"Q_{j1} and Q_{j2} cover all of [m]")
    if not q2:
        raise FamilyError(f"column {j2} appears in no set")
    sets = tuple(
        tuple(sorted((set(s) - {j2}) | {j1})) if j2 in s else s for s in fam.sets
    )
    merged = SupportFamily(fam.k, fam.n, sets, fam.multiplicities)
    out, col_map = merged.canonicalize()
    if out.n != fam.n - 1:
        raise FamilyError("merge did not reduce the column count; bug")
    return out, col_map


def merge_disjoint(fam: SupportFamily, j1: int, j2: int) -> SupportFamily:
    """Identify column j2 with j1 when Q_j1 and Q_j2 are disjoint and their
    union is not all of [m]; set sizes are preserved and n drops by one."""
    return merge_disjoint_with_map(fam, j1, j2)[0]


def merge_disjoint_step(fam: SupportFamily, j1: int, j2: int) -> ReductionStep:
    out = merge_disjoint(fam, j1, j2)
    return ReductionStep(
        "merge_disjoint",
        {"j1": j1, "j2": j2},
        _params(fam),
        (_params(out),),
        (out,),
    )


def merge_multiset_parts(
    fam: SupportFamily, j1: int, j2: int
) -> tuple[MultisetFamily, int, Family]:
    """merge_multiset with intermediates: the pre-strip multiset family
    (still on the original column numbering, j2 unused), the excluded group,
    and the final canonical output."""
    if j1 == j2:
        raise FamilyError("need two different columns")
    q = q_dual(fam)
    union = set(q[j1]) | set(q[j2])
    if len(union) != fam.m - 1:
        raise FamilyError(
            f"|Q_{j1} union Q_{j2}| = {len(union)} != m-1 = {fam.m - 1}"
        )
    excluded = next(i for i in range(1, fam.m + 1) if i not in union)
    maps = fam.mu_maps()
    for i in q[j2]:
        m = maps[i - 1]
        del m[j2]
        m[j1] = m.get(j1, 0) + 1
    merged = MultisetFamily.from_maps(fam.k, fam.n, maps, fam.multiplicities)
    stripped = strip_common(merged, excluded)
    out, _ = stripped.canonicalize()
    out = out.to_sets() if out.is_setlike() else out
    return merged, excluded, out


def merge_multiset(fam: SupportFamily, j1: int, j2: int) -> Family:
    """Replace j2 by an extra copy of j1 (multiset sum) when
    |Q_j1 union Q_j2| = m - 1, then strip the resulting common column via
    strip_common with the missing group excluded.

    The output is a duplicate-free set family when the stripped intersection
    is a single column (the generic case), with parameters (m, n-1, k-1).
    """
    return merge_multiset_parts(fam, j1, j2)[2]


def merge_multiset_step(fam: SupportFamily, j1: int, j2: int) -> ReductionStep:
    out = merge_multiset(fam, j1, j2)
    return ReductionStep(
        "merge_multiset",
        {"j1": j1, "j2": j2},
        _params(fam),
        (_params(out),),
        (out,),
    )


_CONDITIONS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


@dataclass(frozen=True)
class AuditReport:
    """Per-condition verdicts of the minimality audit, plus proposed
    reductions for failures of the first three conditions."""

    verdicts: dict
    proposals: tuple[ReductionStep, ...] = dc_field(default=())

    def holds(self, cond: str) -> bool:
        return self.verdicts[cond]["holds"]

    def all_hold(self) -> bool:
        return all(v["holds"] for v in self.verdicts.values())

    def reducible(self) -> bool:
        return any(not self.verdicts[c]["holds"] for c in ("i", "ii", "iii"))

    def to_json(self) -> dict:
        return {
            "verdicts": self.verdicts,
            "proposals": [s.to_json() for s in self.proposals],
        }


def audit(fam: SupportFamily) -> AuditReport:
    """Evaluate the eight minimal-counterexample conditions.

    Failures of (i)-(iii) come with a concrete reduction proposal; (iv)-(viii)
    are informational consequences of the first three.
    """
    if not fam.is_normalized():
        raise FamilyError("audit requires a normalized family")
    if not check_condition(fam).holds:
        raise FamilyError("audit requires a condition-satisfying family")
    m, n, k = fam.m, fam.n, fam.k
    q = q_dual(fam)
    qs = [set(q[j]) for j in range(1, n + 1)]
    verdicts: dict = {}
    proposals: list[ReductionStep] = []

    tights = tight_sets(fam)
    verdicts["i"] = {"holds": not tights}
    if tights:
        verdicts["i"]["witness"] = {"I": list(tights[0])}
        proposals.append(split_tight_step(fam, tights[0]))

    bad_ii = None
    for j1, j2 in combinations(range(1, n + 1), 2):
        if not (qs[j1 - 1] & qs[j2 - 1]) and qs[j1 - 1] | qs[j2 - 1] != set(
            range(1, m + 1)
        ):
            bad_ii = (j1, j2)
            break
    verdicts["ii"] = {"holds": bad_ii is None}
    if bad_ii:
        verdicts["ii"]["witness"] = {"columns": list(bad_ii)}
        proposals.append(merge_disjoint_step(fam, *bad_ii))

    # the condition quantifies over all i, j including i = j, where it reads
    # |Q_j| != m-1; that case reduces by stripping the shared column directly
    bad_iii = [
        (j1, j2)
        for j1 in range(1, n + 1)
        for j2 in range(j1, n + 1)
        if len(qs[j1 - 1] | qs[j2 - 1]) == m - 1
    ]
    verdicts["iii"] = {"holds": not bad_iii}
    if bad_iii:
        verdicts["iii"]["witness"] = {"columns": list(bad_iii[0])}
        for pair in bad_iii:
            # a pair whose strip would empty a block is not representable as
            # a family; fall through to the next failing pair
            try:
                if pair[0] == pair[1]:
                    excluded = next(
                        i for i in range(1, m + 1) if i not in qs[pair[0] - 1]
                    )
                    proposals.append(strip_common_step(fam, excluded))
                else:
                    proposals.append(merge_multiset_step(fam, *pair))
                break
            except FamilyError:
                continue
        else:
            verdicts["iii"]["witness"]["degenerate"] = True

    bad_iv = next(
        (
            (i, j)
            for i in range(1, m + 1)
            for j in range(1, m + 1)
            if i != j and set(fam.sets[i - 1]) <= set(fam.sets[j - 1])
        ),
        None,
    )
    verdicts["iv"] = {"holds": bad_iv is None}
    if bad_iv:
        verdicts["iv"]["witness"] = {"groups": list(bad_iv)}

    bad_v = next((j for j in range(1, n + 1) if len(qs[j - 1]) > m - 3), None)
    verdicts["v"] = {"holds": bad_v is None}
    if bad_v:
        verdicts["v"]["witness"] = {"column": bad_v, "size": len(qs[bad_v - 1])}

    bad_vi = next(
        (
            j
            for j in range(1, n + 1)
            if len(qs[j - 1]) * (k - 1) < n - 1
            or (n >= k + 1 and len(qs[j - 1]) < 2)
        ),
        None,
    )
    verdicts["vi"] = {"holds": bad_vi is None}
    if bad_vi:
        verdicts["vi"]["witness"] = {"column": bad_vi, "size": len(qs[bad_vi - 1])}

    verdicts["vii"] = {"holds": any(len(s) >= 3 for s in qs)}

    bad_viii = None
    for j1 in range(1, n + 1):
        if len(qs[j1 - 1]) != 2:
            continue
        for j2 in range(1, n + 1):
            if not qs[j1 - 1] & qs[j2 - 1]:
                bad_viii = (j1, j2)
                break
        if bad_viii:
            break
    verdicts["viii"] = {"holds": bad_viii is None}
    if bad_viii:
        verdicts["viii"]["witness"] = {"columns": list(bad_viii)}

    return AuditReport(verdicts, tuple(proposals))


def reduce_to_irreducible(
    fam: SupportFamily,
) -> tuple[list[Family], list[ReductionStep]]:
    """Apply (i)-(iii) reductions to a fixed point, splitting recursively.

    Precedence on multiple applicable reductions: split_tight at the smallest
    tight I, then merge_disjoint at the smallest column pair, then
    merge_multiset. Parameters decrease strictly per step, so termination is
    structural. Returns the irreducible leaves and the replayable trace.
    """
    if not check_condition(fam).holds:
        raise FamilyError("reduce_to_irreducible requires the condition to hold")
    leaves: list[Family] = []
    trace: list[ReductionStep] = []
    stack: list[Family] = [fam]
    while stack:
        cur = stack.pop(0)
        if cur.m == 1 or not isinstance(cur, SupportFamily):
            leaves.append(cur)
            continue
        report = audit(cur)
        step = report.proposals[0] if report.proposals else None
        if step is None:
            leaves.append(cur)
            continue
        for out in step.outputs:
            if _params(out) >= _params(cur):
                raise RuntimeError("reduction failed to decrease parameters")
        trace.append(step)
        stack.extend(step.outputs)
    return leaves, trace
