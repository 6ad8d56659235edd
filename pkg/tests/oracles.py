"""Independent brute-force oracles used to freeze expected values.

Kept deliberately separate from the library code paths they check: the
determinant oracle expands the Leibniz sum over all permutations, and the
enumeration oracle generates set families directly and deduplicates them
under symmetry with no pruning.
"""

from __future__ import annotations

from itertools import combinations, permutations


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows: list[list[int]], p: int) -> int:
    """Determinant mod p by the full permutation expansion."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        prod = perm_sign(perm)
        for i, j in enumerate(perm):
            prod = prod * rows[i][j]
        total += prod
    return total % p


def poly_product_eval(roots: list[int], x: int, p: int) -> int:
    """prod (x - r) mod p, evaluated directly."""
    out = 1
    for r in roots:
        out = out * (x - r) % p
    return out


def compositions(total: int, parts: int):
    """Ordered compositions of `total` into `parts` positive parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _family_key(k, r, sets):
    """Equivalence-class key: minimize over group permutations; columns are
    identified by the multiset of group-incidence labels."""
    m = len(r)
    cols = sorted(set().union(*sets)) if any(sets) else []
    best = None
    for perm in permutations(range(m)):
        r2 = tuple(r[perm[i]] for i in range(m))
        labels = []
        for j in cols:
            lab = tuple(
                sorted(i for i in range(m) if j in sets[perm[i]])
            )
            labels.append(lab)
        key = (r2, tuple(sorted(labels)))
        if best is None or key < best:
            best = key
    return best


def naive_canonical_families(m: int, k: int):
    """All normalized families at (m, k) up to symmetry: enumerate every
    composition and every choice of sets over every universe size, then
    dedup by brute-force canonical key. Returns the set of keys."""
    keys = set()
    for r in compositions(k, m):
        sizes = [k - ri for ri in r]
        n_max = sum(sizes)
        for n in range(1, n_max + 1):
            universe = range(1, n + 1)
            pools = [list(combinations(universe, s)) for s in sizes]

            def rec(idx, chosen):
                if idx == m:
                    used = set().union(*map(set, chosen))
                    if used == set(universe):
                        keys.add(_family_key(k, r, [set(c) for c in chosen]))
                    return
                for pick in pools[idx]:
                    rec(idx + 1, chosen + [pick])

            rec(0, [])
    return keys


def naive_condition_count(m: int, k: int) -> int:
    """Condition-satisfying classes, counted straight from the keys."""
    count = 0
    for r, labels in naive_canonical_families(m, k):
        ok = True
        for size in range(1, m + 1):
            for I in combinations(range(m), size):
                inter = sum(1 for lab in labels if set(I) <= set(lab))
                if k - sum(r[i] for i in I) < inter:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count
