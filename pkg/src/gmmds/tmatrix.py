"""The k x k T matrix bound to concrete evaluation points, the Vandermonde
generator of a generalized Reed-Solomon code, randomized and exact tests for
whether det T vanishes identically, and singularity certificates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .field import (
    FieldElement,
    FieldMatrix,
    PrimeField,
    UniPoly,
    next_prime,
    poly_from_roots,
)
from .mpoly import MPoly
from .support import Family, FamilyError

DEFAULT_TRIALS = 16
DEFAULT_EXACT_LIMIT = 8
MIN_FIELD = 257


def degree_bound(fam: Family) -> int:
    """Upper bound on the total degree of det T in the alpha variables.

    Each determinant term takes one entry per row; a block-i row entry has
    degree at most |S_i|, and block i contributes k - |S_i| rows.
    """
    k = fam.k
    return sum((k - s) * s for s in fam.sizes())


def default_prime(fam: Family, field_size_hint: int = 0) -> int:
    """Field-size policy: smallest prime >= max(hint, 2*D, 2*n, 257)."""
    return next_prime(max(field_size_hint, 2 * degree_bound(fam), 2 * fam.n, MIN_FIELD))


def _require_normalized(fam: Family) -> None:
    if not fam.is_normalized():
        raise FamilyError(
            "family is not normalized (|S_i| != k - r_i); run normalize() first"
        )


def group_root_lists(fam: Family) -> list[list[int]]:
    """Per-group column lists with multiset repetitions, ascending."""
    out = []
    for grp in fam.mu_maps():
        roots: list[int] = []
        for j in sorted(grp):
            roots.extend([j] * grp[j])
        out.append(roots)
    return out


@dataclass(frozen=True)
class TInstance:
    """T evaluated at a concrete alpha assignment, plus block metadata.

    Row (i, l) holds the ascending-power coefficients of x^l * p_i(x), for
    l in [0, k - 1 - |S_i|]; block_rows[i] is the half-open row range of
    block i.
    """

    family: Family
    field: PrimeField
    alpha: tuple[int, ...]
    matrix: FieldMatrix
    block_rows: tuple[tuple[int, int], ...]

    def group_polys(self) -> list[UniPoly]:
        """The polynomials p_i(x) = prod over S_i of (x - alpha_j)."""
        return [
            poly_from_roots(self.field, [self.alpha[j - 1] for j in roots])
            for roots in group_root_lists(self.family)
        ]


def build_T(fam: Family, alpha: Sequence, field: PrimeField | None = None) -> TInstance:
    """Build T for a normalized family at the given alpha assignment.

    alpha values need not be distinct (multiset semantics allow coincidence);
    len(alpha) must equal n.
    """
    _require_normalized(fam)
    if field is None:
        first = next((a for a in alpha if isinstance(a, FieldElement)), None)
        if first is None:
            raise FamilyError("pass a field when alpha holds plain integers")
        field = first.field
    if len(alpha) != fam.n:
        raise FamilyError(f"expected {fam.n} alpha values, got {len(alpha)}")
    avals = tuple(int(field(a)) for a in alpha)
    k = fam.k
    rows: list[list[int]] = []
    block_rows = []
    for roots in group_root_lists(fam):
        p = poly_from_roots(field, [avals[j - 1] for j in roots])
        start = len(rows)
        for ell in range(k - len(roots)):
            shifted = p.shift(ell)
            rows.append([int(shifted.coefficient(t)) for t in range(k)])
        block_rows.append((start, len(rows)))
    matrix = FieldMatrix(field, rows)
    return TInstance(fam, field, avals, matrix, tuple(block_rows))


def build_GRS(field: PrimeField, k: int, alpha: Sequence) -> FieldMatrix:
    """k x n Vandermonde generator; entry (i, j) = alpha_j^i (0-based rows)."""
    avals = [int(field(a)) for a in alpha]
    if len(set(avals)) != len(avals):
        raise FamilyError("evaluation points must be pairwise distinct")
    p = field.p
    rows = [[pow(a, i, p) for a in avals] for i in range(k)]
    return FieldMatrix(field, rows)


@dataclass(frozen=True)
class IdentityVerdict:
    """Verdict on whether det T vanishes identically in the alpha variables."""

    status: str  # "nonzero" | "likely_zero" | "proven_zero"
    p: int | None = None
    witness_alpha: tuple[int, ...] | None = None
    trials_used: int = 0
    failure_bound: float | None = None
    method: str = "sampled"  # "sampled" | "exact"

    def to_json(self) -> dict:
        out: dict = {
            "status": self.status,
            "trials_used": self.trials_used,
            "method": self.method,
        }
        if self.p is not None:
            out["p"] = self.p
        if self.witness_alpha is not None:
            out["witness_alpha"] = list(self.witness_alpha)
        if self.failure_bound is not None:
            out["failure_bound"] = self.failure_bound
        return out


def identity_test(
    fam: Family,
    field_size_hint: int = 0,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> IdentityVerdict:
    """Schwartz-Zippel test: sample alpha uniformly and evaluate det T.

    Returns "nonzero" with the witness on the first nonvanishing evaluation;
    after all trials vanish, "likely_zero" with failure bound (D/p)^trials.
    """
    _require_normalized(fam)
    p = default_prime(fam, field_size_hint)
    field = PrimeField(p)
    rng = random.Random(seed)
    d = degree_bound(fam)
    for t in range(1, trials + 1):
        alpha = tuple(rng.randrange(p) for _ in range(fam.n))
        tinst = build_T(fam, alpha, field)
        if int(tinst.matrix.det()) != 0:
            return IdentityVerdict("nonzero", p, alpha, t)
    return IdentityVerdict("likely_zero", p, None, trials, (d / p) ** trials)


def _symbolic_T(fam: Family) -> list[list[MPoly]]:
    k, n = fam.k, fam.n
    rows: list[list[MPoly]] = []
    for roots in group_root_lists(fam):
        # coeffs of prod (x - alpha_j), ascending in x, as integer polynomials
        coeffs = [MPoly.const(n, 1)]
        for j in roots:
            aj = MPoly.var(n, j - 1)
            nxt = [MPoly(n) for _ in range(len(coeffs) + 1)]
            for t, c in enumerate(coeffs):
                nxt[t] = nxt[t] - c * aj
                nxt[t + 1] = nxt[t + 1] + c
            coeffs = nxt
        for ell in range(k - len(roots)):
            row = [MPoly(n) for _ in range(k)]
            for t, c in enumerate(coeffs):
                row[ell + t] = c
            rows.append(row)
    return rows


def symbolic_det(fam: Family) -> MPoly:
    """det T as an exact integer polynomial, by memoized cofactor expansion."""
    _require_normalized(fam)
    T = _symbolic_T(fam)
    k = fam.k
    n = fam.n
    memo: dict[frozenset, MPoly] = {}

    def minor(rows: frozenset) -> MPoly:
        if not rows:
            return MPoly.const(n, 1)
        cached = memo.get(rows)
        if cached is not None:
            return cached
        col = k - len(rows)
        acc = MPoly(n)
        for idx, r in enumerate(sorted(rows)):
            e = T[r][col]
            if e.is_zero():
                continue
            sub = minor(rows - {r})
            term = e * sub
            acc = acc + term if idx % 2 == 0 else acc - term
        memo[rows] = acc
        return acc

    return minor(frozenset(range(k)))


def exact_identity_test(
    fam: Family, exact_limit: int = DEFAULT_EXACT_LIMIT, seed: int = 0
) -> IdentityVerdict:
    """Decide det T = 0 exactly via sparse symbolic expansion.

    Guarded to k <= exact_limit; for a nonzero determinant a concrete witness
    is located by seeded sampling (cheap, since the nonvanishing probability
    per sample is at least 1 - D/p).
    """
    _require_normalized(fam)
    if fam.k > exact_limit:
        raise FamilyError(
            f"exact test limited to k <= {exact_limit} (got k = {fam.k})"
        )
    poly = symbolic_det(fam)
    if poly.is_zero():
        return IdentityVerdict("proven_zero", method="exact")
    p = default_prime(fam)
    rng = random.Random(seed)
    for t in range(1, 1000):
        alpha = tuple(rng.randrange(p) for _ in range(fam.n))
        if poly.evaluate_mod(list(alpha), p) != 0:
            return IdentityVerdict("nonzero", p, alpha, t, method="exact")
    raise RuntimeError("nonzero polynomial never evaluated nonzero; arithmetic bug")


def decide_identity(
    fam: Family,
    field_size_hint: int = 0,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> IdentityVerdict:
    """Identity test with escalation: retry at an 8x larger prime, then exact.

    Never reports "proven_zero" from sampling alone; "likely_zero" survives
    only when the family is too large for the exact expansion.
    """
    verdict = identity_test(fam, field_size_hint, trials, seed)
    if verdict.status == "nonzero":
        return verdict
    verdict2 = identity_test(fam, 8 * verdict.p, trials, seed + 1)
    if verdict2.status == "nonzero":
        return verdict2
    if fam.k <= exact_limit:
        return exact_identity_test(fam, exact_limit, seed)
    return verdict2


@dataclass(frozen=True)
class Certificate:
    """Left-nullspace witness of a singular T: polynomials q_1..q_m with
    deg q_i <= k - 1 - deg p_i and sum q_i p_i = 0 at the bound alpha."""

    qpolys: tuple[UniPoly, ...]
    alpha: tuple[int, ...]
    field: PrimeField

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "alpha": list(self.alpha),
            "q": [list(q.coeffs) for q in self.qpolys],
        }


def extract_certificate(tinst: TInstance) -> Certificate | None:
    """Package a left nullvector of T into the polynomials q_1..q_m.

    The l-th entry of block i becomes the coefficient of x^l in q_i. Returns
    None when T is nonsingular.
    """
    basis = tinst.matrix.left_nullspace()
    if not basis:
        return None
    v = [int(x) for x in basis[0]]
    qpolys = [
        UniPoly(tinst.field, v[start:stop]) for start, stop in tinst.block_rows
    ]
    return Certificate(tuple(qpolys), tinst.alpha, tinst.field)


def verify_certificate(cert: Certificate, tinst: TInstance) -> bool:
    """Check both certificate conditions exactly: degree bounds, not all q_i
    zero, and sum q_i p_i = 0 as a polynomial over GF(p)."""
    polys = tinst.group_polys()
    if all(q.is_zero() for q in cert.qpolys):
        return False
    acc = UniPoly(cert.field)
    for q, p_i in zip(cert.qpolys, polys):
        if not q.is_zero() and q.degree > tinst.family.k - 1 - p_i.degree:
            return False
        acc = acc + q * p_i
    return acc.is_zero()


def build_generator(fam: Family, alpha: Sequence, tinst: TInstance) -> FieldMatrix:
    """G = T * G_RS; entry (row (i, l), col j) = alpha_j^l * p_i(alpha_j).

    Requires pairwise-distinct alpha and a nonsingular T.
    """
    field = tinst.field
    avals = [int(field(a)) for a in alpha]
    if len(set(avals)) != len(avals):
        raise FamilyError("evaluation points must be pairwise distinct")
    if int(tinst.matrix.det()) == 0:
        raise FamilyError("T is singular at this alpha assignment")
    grs = build_GRS(field, fam.k, avals)
    return tinst.matrix @ grs
