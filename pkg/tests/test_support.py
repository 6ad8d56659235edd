import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmmds.support import (
    FamilyError,
    MultisetFamily,
    SupportFamily,
    check_condition,
    family_from_json,
    group_rowsets,
    intersection_size,
    normalize,
    q_dual,
    sets_from_qdual,
    ungroup,
)

TRIANGLE = SupportFamily(3, 3, ((1, 2), (2, 3), (1, 3)), (1, 1, 1))


def test_invariants_enforced():
    with pytest.raises(FamilyError):
        SupportFamily(3, 3, ((1, 2),), (1, 1))  # set/multiplicity mismatch
    with pytest.raises(FamilyError):
        SupportFamily(3, 3, ((1, 2), (3,)), (1, 1))  # sum r != k
    with pytest.raises(FamilyError):
        SupportFamily(3, 3, ((1, 2, 3), (1,)), (2, 1))  # |S| > k-1
    with pytest.raises(FamilyError):
        SupportFamily(3, 3, ((1, 4), (2,)), (2, 1))  # column out of range
    with pytest.raises(FamilyError):
        SupportFamily(3, 3, ((1,), (2,)), (3, 0))  # r must be positive


def test_sets_deduped_and_sorted():
    fam = SupportFamily(3, 3, ((2, 1, 2), (3,)), (1, 2))
    assert fam.sets[0] == (1, 2)


def test_json_roundtrip_sets():
    obj = TRIANGLE.to_json()
    assert obj == {
        "k": 3,
        "n": 3,
        "sets": [[1, 2], [2, 3], [1, 3]],
        "multiplicities": [1, 1, 1],
    }
    assert family_from_json(obj) == TRIANGLE


def test_json_roundtrip_msets():
    fam = MultisetFamily.from_maps(3, 2, [{1: 2}, {2: 1}], (1, 2))
    back = family_from_json(fam.to_json())
    assert back == fam
    assert not fam.is_setlike()
    with pytest.raises(FamilyError):
        fam.to_sets()


def test_condition_holds_examples():
    assert check_condition(TRIANGLE).holds
    # single group, empty set: trivially fine
    assert check_condition(SupportFamily(2, 1, ((),), (2,))).holds
    # a column shared by both groups exceeds k - r_1 - r_2 = 0
    assert not check_condition(SupportFamily(2, 1, ((1,), (1,)), (1, 1))).holds


def test_condition_witness_is_lex_smallest():
    # groups 1 and 2 share both columns: k - (1+1) = 1 < 2
    fam = SupportFamily(3, 2, ((1, 2), (1, 2), (1,)), (1, 1, 1))
    verdict = check_condition(fam)
    assert not verdict.holds
    assert verdict.witness == (1, 2)
    assert (verdict.lhs, verdict.rhs) == (1, 2)
    assert verdict.to_json() == {
        "holds": False,
        "witness": [1, 2],
        "lhs": 1,
        "rhs": 2,
    }


def test_condition_multiset_uses_min_counts():
    fam = MultisetFamily.from_maps(5, 3, [{1: 2, 2: 1}, {1: 1, 3: 1}], (2, 3))
    # min multiplicity of column 1 across both groups is 1, not 2
    assert intersection_size(fam, (1, 2)) == 1
    verdict = check_condition(fam)
    assert not verdict.holds
    assert verdict.witness == (1, 2) and verdict.rhs == 1


def test_normalize_pads_in_order():
    fam = SupportFamily(3, 2, ((1,), (2,)), (1, 2))
    out = normalize(fam)
    # group 1 needs one fresh column, group 2 none
    assert out.sets == ((1, 3), (2,))
    assert out.n == 3
    assert out.is_normalized()
    assert normalize(out) is out  # idempotent


def test_normalize_rejects_violations():
    fam = SupportFamily(3, 2, ((1, 2), (1, 2), (1,)), (1, 1, 1))
    with pytest.raises(FamilyError):
        normalize(fam)


def test_q_dual_roundtrip():
    q = q_dual(TRIANGLE)
    assert q[1] == (1, 3) and q[2] == (1, 2) and q[3] == (2, 3)
    assert sets_from_qdual(3, q, TRIANGLE.multiplicities) == TRIANGLE


def test_ungroup_repeats_by_multiplicity():
    fam = SupportFamily(3, 2, ((1,), (2,)), (2, 1))
    assert ungroup(fam) == [frozenset({1}), frozenset({1}), frozenset({2})]


def test_group_rowsets_order_and_positions():
    rowsets = [{2}, {1}, {2}, {3}]
    fam, row_pos = group_rowsets(rowsets, 3)
    assert fam.sets == ((2,), (1,), (3,))
    assert fam.multiplicities == (2, 1, 1)
    # block layout: [ {2}, {2}, {1}, {3} ]; original rows map in order
    assert row_pos == [0, 2, 1, 3]
    blocks = ungroup(fam)
    assert [blocks[p] for p in row_pos] == [frozenset(s) for s in rowsets]


def test_canonicalize_drops_unused_columns():
    fam = SupportFamily(3, 9, ((2, 7), (9,)), (1, 2))
    out, col_map = fam.canonicalize()
    assert out.n == 3
    assert out.sets == ((1, 2), (3,))
    assert col_map == {2: 1, 7: 2, 9: 3}


@settings(max_examples=40)
@given(st.data())
def test_condition_invariant_under_group_permutation(data):
    k = data.draw(st.integers(2, 5))
    m = data.draw(st.integers(2, min(3, k)))
    r = [1] * m
    for _ in range(k - m):
        r[data.draw(st.integers(0, m - 1))] += 1
    n = data.draw(st.integers(1, 4))
    sets = []
    for ri in r:
        size = data.draw(st.integers(0, min(n, k - ri)))
        sets.append(tuple(sorted(data.draw(
            st.permutations(list(range(1, n + 1)))
        )[:size])))
    fam = SupportFamily(k, n, tuple(sets), tuple(r))
    perm = data.draw(st.permutations(list(range(m))))
    fam2 = SupportFamily(
        k,
        n,
        tuple(sets[p] for p in perm),
        tuple(r[p] for p in perm),
    )
    assert check_condition(fam).holds == check_condition(fam2).holds
