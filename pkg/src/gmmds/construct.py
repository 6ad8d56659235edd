"""End-to-end pipeline from per-row zero constraints to an explicit MDS
generator matrix over a concrete prime field, with exhaustive minor checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .field import FieldMatrix, PrimeField, next_prime
from .support import (
    FamilyError,
    check_condition,
    group_rowsets,
    normalize,
)
from .tmatrix import build_GRS, build_T, degree_bound, MIN_FIELD

DEFAULT_MAX_ATTEMPTS = 64
MDS_MINOR_GUARD = 1_000_000


class InfeasibleError(FamilyError):
    """Row constraints violate the feasibility condition."""

    def __init__(self, witness_rows, lhs, rhs):
        self.witness_rows = tuple(witness_rows)
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"no MDS code with this zero pattern: rows I={list(witness_rows)} "
            f"give k-|I| = {lhs} < {rhs} = |common zero columns|"
        )


@dataclass(frozen=True)
class CodeArtifact:
    """A constructed support-constrained MDS code.

    G = T * G_RS, with G[i][j] = 0 exactly for j in row i's zero set, det T
    nonzero, and alpha pairwise distinct.
    """

    field: PrimeField
    alpha: tuple[int, ...]
    T: FieldMatrix
    G: FieldMatrix
    row_support: tuple[tuple[int, ...], ...]
    attempts: int

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "alpha": list(self.alpha),
            "T": self.T.int_rows(),
            "G": self.G.int_rows(),
            "rowsets": [list(s) for s in self.row_support],
            "attempts": self.attempts,
        }


def construct_code(
    rowsets: Sequence[Iterable[int]],
    n: int,
    field_hint: int = 0,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> CodeArtifact:
    """Build a k x n generator matrix with the prescribed zero pattern.

    Groups equal row sets, normalizes by padding, rejection-samples distinct
    evaluation points until T is nonsingular (doubling the field after
    max_attempts failures), multiplies out G, strips the padded columns, and
    verifies the zero pattern entrywise in both directions.
    """
    k = len(rowsets)
    if k < 1:
        raise FamilyError("need at least one row")
    fam, row_pos = group_rowsets(rowsets, n)
    # group index (1-based) of each original row, for witness mapping
    row_groups = []
    for s in rowsets:
        fs = tuple(sorted(set(s)))
        row_groups.append(next(i for i, t in enumerate(fam.sets, 1) if t == fs))
    verdict = check_condition(fam)
    if not verdict.holds:
        rows = sorted(
            row for row, g in zip(range(1, k + 1), row_groups) if g in verdict.witness
        )
        raise InfeasibleError(rows, k - len(rows), verdict.rhs)

    padded = normalize(fam)
    n_total = n + (padded.n - fam.n)  # original columns plus padding slots
    p = next_prime(
        max(field_hint, 2 * degree_bound(padded), 2 * n_total, MIN_FIELD)
    )
    rng = random.Random(seed)
    attempts = 0
    while True:
        field = PrimeField(p)
        for _ in range(max_attempts):
            attempts += 1
            # 0 is excluded: rows of the form x^l * p_i with l >= 1 vanish at
            # alpha = 0, which would put a zero outside the prescribed pattern
            pool = rng.sample(range(1, p), n_total)
            # padded-family column j: original column for j <= n, fresh
            # padding point otherwise
            alpha_fam = [pool[j - 1] for j in range(1, padded.n + 1)]
            tinst = build_T(padded, alpha_fam, field)
            if int(tinst.matrix.det()) == 0:
                continue
            alpha_orig = pool[:n]
            grs = build_GRS(field, k, alpha_orig)
            g_blocks = tinst.matrix @ grs
            rows_int = g_blocks.int_rows()
            g = FieldMatrix(field, [rows_int[pos] for pos in row_pos])
            _check_zero_pattern(g, rowsets)
            return CodeArtifact(
                field,
                tuple(alpha_orig),
                tinst.matrix,
                g,
                tuple(tuple(sorted(set(s))) for s in rowsets),
                attempts,
            )
        p = next_prime(2 * p)


def _check_zero_pattern(g: FieldMatrix, rowsets) -> None:
    for i, s in enumerate(rowsets):
        zero_cols = set(s)
        for j in range(1, g.cols + 1):
            entry = int(g[i, j - 1])
            if j in zero_cols and entry != 0:
                raise RuntimeError(f"missing zero at ({i + 1}, {j}); arithmetic bug")
            if j not in zero_cols and entry == 0:
                raise RuntimeError(f"spurious zero at ({i + 1}, {j}); arithmetic bug")


def mds_check(g: FieldMatrix):
    """Exhaustive MDS test: every k x k column minor must be nonsingular.

    Returns True, or the first failing (1-indexed) column subset.
    """
    k, n = g.rows, g.cols
    if k > n:
        raise FamilyError("need k <= n")
    if comb(n, k) > MDS_MINOR_GUARD:
        raise FamilyError(f"C({n},{k}) minors exceed the {MDS_MINOR_GUARD} guard")
    rows = range(k)
    for cols in combinations(range(n), k):
        if int(g.submatrix(rows, cols).det()) == 0:
            return tuple(c + 1 for c in cols)
    return True


NOT_MDS_FEASIBLE = "not-mds-feasible"


def cutset_distance_bound(rowsets: Sequence[Iterable[int]], n: int, k: int):
    """n - k + 1 when the zero pattern admits an MDS code, else a marker.

    The maximum-distance question for infeasible patterns is out of scope;
    only feasibility is decided.
    """
    fam, _ = group_rowsets(rowsets, n)
    if check_condition(fam).holds:
        return n - k + 1
    return NOT_MDS_FEASIBLE
