import random

import pytest

from gmmds.support import check_condition
from gmmds.verify import (
    CanonicalFamily,
    enumerate_families,
    necessity_fuzz,
    partitions,
    random_condition_family,
    random_strippable_family,
    random_violating_family,
    reduction_cross_check,
    sample_family,
    verify_cell,
    verify_grid,
)
from oracles import naive_canonical_families, naive_condition_count

# total / condition-satisfying class counts frozen from the naive oracle
EXPECTED_COUNTS = {
    (2, 2): (2, 1),
    (2, 3): (2, 1),
    (3, 3): (8, 4),
    (3, 4): (19, 9),
    (2, 6): (9, 3),
}


def test_partitions():
    assert list(partitions(4, 2)) == [(3, 1), (2, 2)]
    assert list(partitions(3, 3)) == [(1, 1, 1)]
    assert all(sum(p) == 6 for p in partitions(6, 3))


def test_canonical_family_roundtrip():
    cf = CanonicalFamily(3, (1, 1, 1), (1, 2, 4))
    fam = cf.to_family()
    assert fam.sets == ((1,), (2,), (3,))
    assert fam.n == 3 and fam.k == 3


@pytest.mark.parametrize("m,k", sorted(EXPECTED_COUNTS))
def test_enumeration_matches_naive_oracle(m, k):
    total, ok = EXPECTED_COUNTS[(m, k)]
    fams = list(enumerate_families(m, k))
    assert len(fams) == total
    assert len(fams) == len(naive_canonical_families(m, k))
    cond = [f for f in fams if check_condition(f.to_family()).holds]
    assert len(cond) == ok
    assert len(cond) == naive_condition_count(m, k)


def test_enumeration_yields_distinct_normalized_families():
    seen = set()
    for cf in enumerate_families(3, 4):
        key = (cf.r, cf.labels)
        assert key not in seen
        seen.add(key)
        fam = cf.to_family()
        assert fam.is_normalized()


def test_enumeration_rejects_bad_ranges():
    with pytest.raises(ValueError):
        list(enumerate_families(1, 3))
    with pytest.raises(ValueError):
        list(enumerate_families(4, 3))


def test_sample_family_lands_in_enumeration():
    universe = {(cf.r, cf.labels) for cf in enumerate_families(3, 4)}
    rng = random.Random(17)
    for _ in range(200):
        cf = sample_family(3, 4, rng)
        assert (cf.r, cf.labels) in universe


def test_sample_family_covers_small_cell():
    universe = {(cf.r, cf.labels) for cf in enumerate_families(2, 3)}
    rng = random.Random(3)
    seen = {(cf.r, cf.labels) for cf in (sample_family(2, 3, rng) for _ in range(100))}
    assert seen == universe


def test_verify_cell_exhaustive():
    cell = verify_cell(3, 4, seed=0)
    assert cell.mode == "exhaustive"
    assert (cell.enumerated, cell.condition_ok) == (19, 9)
    assert cell.nonzero == 9
    assert not cell.counterexamples and not cell.inconclusive


def test_verify_cell_sampled_deterministic():
    a = verify_cell(5, 5, seed=1, samples=50)
    b = verify_cell(5, 5, seed=1, samples=50)
    assert a.to_json() == b.to_json()
    assert a.mode == "sampled" and a.enumerated == 50
    assert not a.counterexamples


def test_verify_grid_small():
    report = verify_grid(3, 4, seed=0, samples=10)
    cells = {(c.m, c.k): c for c in report.cells}
    assert set(cells) == {(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)}
    assert all(c.mode == "exhaustive" for c in report.cells)
    assert not report.counterexamples() and not report.inconclusives()


def test_verify_grid_sampled_mode_switch():
    report = verify_grid(3, 3, seed=0, samples=5, sample_above_m=2)
    modes = {(c.m, c.k): c.mode for c in report.cells}
    assert modes[(2, 2)] == "exhaustive"
    assert modes[(3, 3)] == "sampled"


def test_verify_grid_parallel_matches_serial():
    serial = verify_grid(3, 4, seed=2, samples=10, jobs=1)
    parallel = verify_grid(3, 4, seed=2, samples=10, jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_random_violating_family_violates():
    rng = random.Random(23)
    for _ in range(40):
        fam = random_violating_family(rng)
        assert fam.is_normalized()
        assert not check_condition(fam).holds


def test_random_condition_family_satisfies():
    rng = random.Random(29)
    for _ in range(40):
        fam = random_condition_family(rng)
        assert fam.is_normalized()
        assert check_condition(fam).holds


def test_random_strippable_family_contract():
    from gmmds.reduce import common_multiset
    from gmmds.support import intersection_size

    rng = random.Random(31)
    for _ in range(40):
        fam, excluded = random_strippable_family(rng)
        assert fam.is_normalized()
        assert intersection_size(fam, range(1, fam.m + 1)) == 0
        assert sum(common_multiset(fam, excluded).values()) >= 1


def test_necessity_fuzz_passes():
    report = necessity_fuzz(30, seed=4)
    assert report.ok()
    assert report.passed == 30


def test_reduction_cross_check_passes():
    report = reduction_cross_check(30, seed=6)
    assert report.ok()
    assert report.passed == 30
