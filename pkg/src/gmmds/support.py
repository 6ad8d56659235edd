"""Grouped support constraints: set and multiset families, the feasibility
condition, the column-side Q-dual, and padding normalization.

Columns are 1-indexed throughout, matching the JSON interchange format.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable, Sequence


class FamilyError(ValueError):
    """Malformed family or violated operation precondition."""


@dataclass(frozen=True)
class SupportFamily:
    """Zero-pattern sets S_1..S_m with row multiplicities r_1..r_m.

    Invariants: sum(r) = k, each r_i >= 1, |S_i| <= k-1, all elements in [1, n].
    Columns used by no set are allowed at construction; canonicalize() drops
    them and renumbers.
    """

    k: int
    n: int
    sets: tuple[tuple[int, ...], ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        sets = tuple(tuple(sorted(set(s))) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))
        if len(self.sets) != len(self.multiplicities) or not self.sets:
            raise FamilyError("need one multiplicity per set, at least one set")
        if any(r < 1 for r in self.multiplicities):
            raise FamilyError("multiplicities must be positive")
        if sum(self.multiplicities) != self.k:
            raise FamilyError("multiplicities must sum to k")
        for s in self.sets:
            if len(s) > self.k - 1:
                raise FamilyError(f"set {s} larger than k-1 = {self.k - 1}")
            if s and (s[0] < 1 or s[-1] > self.n):
                raise FamilyError(f"set {s} leaves the column range [1, {self.n}]")

    @property
    def m(self) -> int:
        return len(self.sets)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def is_normalized(self) -> bool:
        return all(len(s) == self.k - r for s, r in zip(self.sets, self.multiplicities))

    def used_columns(self) -> list[int]:
        return sorted(set(chain.from_iterable(self.sets)))

    def canonicalize(self) -> tuple["SupportFamily", dict[int, int]]:
        """Drop unused columns and renumber; returns (family, old->new map)."""
        used = self.used_columns()
        col_map = {old: new for new, old in enumerate(used, start=1)}
        sets = tuple(tuple(col_map[j] for j in s) for s in self.sets)
        return SupportFamily(self.k, len(used), sets, self.multiplicities), col_map

    def mu_maps(self) -> list[dict[int, int]]:
        return [{j: 1 for j in s} for s in self.sets]

    def to_multiset(self) -> "MultisetFamily":
        return MultisetFamily.from_maps(self.k, self.n, self.mu_maps(), self.multiplicities)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "sets": [list(s) for s in self.sets],
            "multiplicities": list(self.multiplicities),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SupportFamily":
        try:
            return cls(
                int(obj["k"]),
                int(obj["n"]),
                tuple(tuple(int(x) for x in s) for s in obj["sets"]),
                tuple(int(r) for r in obj["multiplicities"]),
            )
        except KeyError as exc:
            raise FamilyError(f"missing field {exc} in family JSON") from exc


@dataclass(frozen=True)
class MultisetFamily:
    """Multiset generalization: per-group multiplicity maps mu_i(j).

    mu is stored as a tuple (per group) of sorted (column, count) pairs so the
    value is hashable; |S_i| = sum of counts.
    """

    k: int
    n: int
    mu: tuple[tuple[tuple[int, int], ...], ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        mu = tuple(
            tuple(sorted((j, c) for j, c in grp if c > 0)) for grp in self.mu
        )
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))
        if len(self.mu) != len(self.multiplicities) or not self.mu:
            raise FamilyError("need one multiplicity per group, at least one group")
        if any(r < 1 for r in self.multiplicities):
            raise FamilyError("multiplicities must be positive")
        if sum(self.multiplicities) != self.k:
            raise FamilyError("multiplicities must sum to k")
        for grp in self.mu:
            if sum(c for _, c in grp) > self.k - 1:
                raise FamilyError("multiset larger than k-1")
            if grp and (grp[0][0] < 1 or grp[-1][0] > self.n):
                raise FamilyError("column outside [1, n]")

    @classmethod
    def from_maps(
        cls, k: int, n: int, maps: Sequence[dict[int, int]], multiplicities: Sequence[int]
    ) -> "MultisetFamily":
        return cls(
            k,
            n,
            tuple(tuple(sorted(m.items())) for m in maps),
            tuple(multiplicities),
        )

    @property
    def m(self) -> int:
        return len(self.mu)

    def sizes(self) -> tuple[int, ...]:
        return tuple(sum(c for _, c in grp) for grp in self.mu)

    def is_normalized(self) -> bool:
        return all(s == self.k - r for s, r in zip(self.sizes(), self.multiplicities))

    def mu_maps(self) -> list[dict[int, int]]:
        return [dict(grp) for grp in self.mu]

    def used_columns(self) -> list[int]:
        return sorted({j for grp in self.mu for j, _ in grp})

    def canonicalize(self) -> tuple["MultisetFamily", dict[int, int]]:
        used = self.used_columns()
        col_map = {old: new for new, old in enumerate(used, start=1)}
        maps = [{col_map[j]: c for j, c in grp} for grp in self.mu]
        return (
            MultisetFamily.from_maps(self.k, len(used), maps, self.multiplicities),
            col_map,
        )

    def is_setlike(self) -> bool:
        return all(c == 1 for grp in self.mu for _, c in grp)

    def to_sets(self) -> SupportFamily:
        if not self.is_setlike():
            raise FamilyError("family has a column with multiplicity > 1")
        return SupportFamily(
            self.k,
            self.n,
            tuple(tuple(j for j, _ in grp) for grp in self.mu),
            self.multiplicities,
        )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "msets": [{str(j): c for j, c in grp} for grp in self.mu],
            "multiplicities": list(self.multiplicities),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MultisetFamily":
        try:
            maps = [{int(j): int(c) for j, c in grp.items()} for grp in obj["msets"]]
            return cls.from_maps(
                int(obj["k"]),
                int(obj["n"]),
                maps,
                tuple(int(r) for r in obj["multiplicities"]),
            )
        except KeyError as exc:
            raise FamilyError(f"missing field {exc} in family JSON") from exc


Family = SupportFamily | MultisetFamily


def family_from_json(obj: dict) -> Family:
    if "msets" in obj:
        return MultisetFamily.from_json(obj)
    return SupportFamily.from_json(obj)


@dataclass(frozen=True)
class ConditionVerdict:
    """Outcome of the feasibility check, with a recomputable witness."""

    holds: bool
    witness: tuple[int, ...] | None = None
    lhs: int | None = None  # k - sum of r_i over the witness
    rhs: int | None = None  # size of the witness intersection

    def to_json(self) -> dict:
        out: dict = {"holds": self.holds}
        if not self.holds:
            out["witness"] = list(self.witness)
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
        return out


def _subsets_lex(m: int) -> Iterable[tuple[int, ...]]:
    """All nonempty subsets of [1, m] as sorted tuples, in tuple-lex order."""
    return sorted(
        chain.from_iterable(combinations(range(1, m + 1), s) for s in range(1, m + 1))
    )


def intersection_size(fam: Family, index_set: Sequence[int]) -> int:
    """|intersection of S_i over i in index_set|, multiset-aware (min of mu)."""
    maps = fam.mu_maps()
    chosen = [maps[i - 1] for i in index_set]
    cols = set(chosen[0])
    for m in chosen[1:]:
        cols &= set(m)
    return sum(min(m[j] for m in chosen) for j in cols)


def check_condition(fam: Family) -> ConditionVerdict:
    """Check k - sum r_i >= |intersection S_i| over every nonempty I.

    Enumerates all 2^m - 1 subsets; on failure reports the lexicographically
    smallest violating I along with both sides of the inequality.
    """
    r = fam.multiplicities
    for I in _subsets_lex(fam.m):
        lhs = fam.k - sum(r[i - 1] for i in I)
        rhs = intersection_size(fam, I)
        if lhs < rhs:
            return ConditionVerdict(False, I, lhs, rhs)
    return ConditionVerdict(True)


def normalize(fam: SupportFamily) -> SupportFamily:
    """Pad each group with fresh columns so |S_i| = k - r_i exactly.

    New columns are appended in ascending order, group 1 first. The feasibility
    condition must hold beforehand (it guarantees k - r_i - |S_i| >= 0) and is
    preserved. Idempotent on already-normalized families.
    """
    verdict = check_condition(fam)
    if not verdict.holds:
        raise FamilyError(
            f"cannot normalize: condition violated at I={list(verdict.witness)}"
        )
    if fam.is_normalized():
        return fam
    nxt = fam.n + 1
    sets = []
    for s, r in zip(fam.sets, fam.multiplicities):
        pad = fam.k - r - len(s)
        sets.append(s + tuple(range(nxt, nxt + pad)))
        nxt += pad
    return SupportFamily(fam.k, nxt - 1, tuple(sets), fam.multiplicities)


@dataclass(frozen=True)
class QDual:
    """Column-side incidence: Q_j = {t : j in S_t}, one set per column."""

    qsets: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.qsets)

    def __getitem__(self, j: int) -> tuple[int, ...]:
        """Q_j for a 1-indexed column j."""
        return self.qsets[j - 1]

    def to_json(self) -> list[list[int]]:
        return [list(q) for q in self.qsets]


def q_dual(fam: SupportFamily) -> QDual:
    """Transpose incidence view of a set family."""
    if not isinstance(fam, SupportFamily):
        raise FamilyError("Q-duality is defined for set families only")
    qs = [
        tuple(t for t, s in enumerate(fam.sets, start=1) if j in s)
        for j in range(1, fam.n + 1)
    ]
    return QDual(tuple(qs))


def sets_from_qdual(k: int, q: QDual, multiplicities: Sequence[int]) -> SupportFamily:
    """Rebuild the set family from its Q-dual (inverse of q_dual)."""
    m = len(multiplicities)
    sets = tuple(
        tuple(j for j in range(1, len(q) + 1) if i in q[j]) for i in range(1, m + 1)
    )
    return SupportFamily(k, len(q), sets, multiplicities)


def ungroup(fam: SupportFamily) -> list[frozenset[int]]:
    """Row-level zero sets: S_i repeated r_i times, in block order."""
    out: list[frozenset[int]] = []
    for s, r in zip(fam.sets, fam.multiplicities):
        out.extend([frozenset(s)] * r)
    return out


def group_rowsets(
    rowsets: Sequence[Iterable[int]], n: int
) -> tuple[SupportFamily, list[int]]:
    """Group equal row-level sets into a family with multiplicities.

    Groups appear in order of first occurrence. Also returns, for each original
    row, its row index in the grouped block layout (rows of a group are
    assigned to original rows in order).
    """
    frozen = [frozenset(s) for s in rowsets]
    order: list[frozenset[int]] = []
    for s in frozen:
        if s not in order:
            order.append(s)
    counts = [frozen.count(s) for s in order]
    k = len(frozen)
    fam = SupportFamily(k, n, tuple(tuple(sorted(s)) for s in order), tuple(counts))
    starts = {}
    pos = 0
    for s, c in zip(order, counts):
        starts[s] = pos
        pos += c
    seen: dict[frozenset[int], int] = {}
    row_pos = []
    for s in frozen:
        row_pos.append(starts[s] + seen.get(s, 0))
        seen[s] = seen.get(s, 0) + 1
    return fam, row_pos
