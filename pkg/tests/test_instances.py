"""Instance types, pitch, validity, enumeration, generators, JSON."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pitchforge.errors import (
    InfeasibleRestrictionError,
    InvalidInputError,
    SizeGuardError,
)
from pitchforge.config import Limits
from pitchforge.instances import (
    CoverInstance,
    KnapsackInstance,
    LinearInequality,
    PackingInstance,
    enumerate_valid_inequalities,
    feasible_masks,
    feasible_points,
    gen_full_circulant,
    gen_random_cover,
    gen_random_packing,
    gen_symmetric_knapsack,
    inequality_from_json,
    inequality_to_json,
    instance_from_json,
    instance_to_json,
    is_valid,
    minimalize,
    pitch,
    restrict_instance,
)
from pitchforge.polyalg import PartialAssignment, mask_to_vars

F = Fraction


def ge(coeffs, rhs):
    return LinearInequality(tuple(F(c) for c in coeffs), F(rhs), "ge")


def le(coeffs, rhs):
    return LinearInequality(tuple(F(c) for c in coeffs), F(rhs), "le")


def _brute_valid(ineq, inst):
    return all(ineq.slack_at_mask(z) >= 0 for z in feasible_masks(inst))


# ---------------------------------------------------------------------------
# inequalities and pitch
# ---------------------------------------------------------------------------


def test_inequality_basics():
    q = ge([1, 2, 0], 2)
    assert q.nvars == 3
    assert q.support() == (0, 1)
    assert q.value_at_mask(0b011) == 3
    assert q.slack_at_mask(0b001) == -1
    assert q.normalized() == ge([1, 2, 0], 2)
    assert ge([2, 4], 6).normalized() == ge([1, 2], 3)
    with pytest.raises(InvalidInputError):
        LinearInequality((F(1),), F(1), "eq")


def test_pitch_covering_examples():
    assert pitch(ge([1, 1, 1, 1], 2)) == 2
    assert pitch(ge([1, 2, 3], 3)) == 2  # 1+2 >= 3
    assert pitch(ge([3, 1], 3)) == 2  # sorted: 1+3 >= 3 needs both
    assert pitch(ge([1, 1], 0)) == 0
    assert pitch(ge([1, 1], -5)) == 0
    with pytest.raises(InvalidInputError):
        pitch(ge([1, 1], 3))  # violated even at the all-ones point
    with pytest.raises(InvalidInputError):
        pitch(ge([-1, 1], 0))


def test_pitch_packing_examples():
    assert pitch(le([2, 2], 3)) == 1
    assert pitch(le([1, 1, 1], 2)) == 2
    assert pitch(le([1, 1], 5)) == 2
    assert pitch(le([3, 3], 1)) == 0
    with pytest.raises(InvalidInputError):
        pitch(le([1, 1], -1))


@given(st.data())
def test_pitch_subset_characterization(data):
    # summing the p smallest support coefficients is the worst case over
    # p-subsets, so pitch p is the least size at which EVERY p-subset of the
    # support reaches the right-hand side
    n = data.draw(st.integers(1, 5))
    coeffs = data.draw(
        st.lists(st.integers(0, 4), min_size=n, max_size=n).filter(any)
    )
    total = sum(coeffs)
    rhs = data.draw(st.integers(1, total))
    q = ge(coeffs, rhs)
    p = pitch(q)
    support = sorted(q.support())
    all_reach = lambda size: all(
        sum(coeffs[i] for i in sub) >= rhs
        for sub in itertools.combinations(support, size)
    )
    assert all_reach(p)
    assert p == 0 or not all_reach(p - 1)


# ---------------------------------------------------------------------------
# cover instances
# ---------------------------------------------------------------------------


def test_cover_instance_validation():
    with pytest.raises(InvalidInputError):
        CoverInstance(3, (frozenset(),))  # empty row is unsatisfiable
    with pytest.raises(InvalidInputError):
        CoverInstance(2, (frozenset({5}),))
    with pytest.raises(InvalidInputError):
        CoverInstance(2, (frozenset({0}),), origins=(0, 1))


def test_cover_constraints_and_masks():
    fc = gen_full_circulant(4)
    assert fc.nrows == 4
    assert fc.rows[0] == frozenset({1, 2, 3})
    assert fc.row_masks() == (0b1110, 0b1101, 0b1011, 0b0111)
    first = fc.constraints()[0]
    assert first.sense == "ge" and first.rhs == 1
    assert first.coeffs == (F(0), F(1), F(1), F(1))
    assert fc.origins == (0, 1, 2, 3)


def test_minimalize_drops_supersets_keeps_first():
    inst = CoverInstance(
        3,
        (
            frozenset({0, 1}),
            frozenset({0, 1, 2}),  # superset of row 0: redundant
            frozenset({2}),
            frozenset({0, 1}),  # duplicate of row 0
        ),
    )
    assert not inst.is_minimal()
    m = minimalize(inst)
    assert m.rows == (frozenset({0, 1}), frozenset({2}))
    assert m.origins == (0, 2)
    assert m.is_minimal()
    assert feasible_masks(m) == feasible_masks(inst)


def test_restrict_instance_semantics():
    fc = gen_full_circulant(4)
    # x_1 true satisfies every row containing it; only row 1 survives
    r = restrict_instance(fc, PartialAssignment(frozenset({0}), frozenset()))
    assert r.rows == (frozenset({1, 2, 3}),)
    assert r.origins == (0,)
    # x_2, x_3, x_4 false shrinks row 1 to nothing: infeasible
    with pytest.raises(InfeasibleRestrictionError):
        restrict_instance(fc, PartialAssignment(frozenset(), frozenset({1, 2, 3})))


def test_restrict_composes_origins_transitively():
    fc = gen_full_circulant(5)
    r1 = restrict_instance(fc, PartialAssignment(frozenset({0}), frozenset()))
    r2 = restrict_instance(r1, PartialAssignment(frozenset({1}), frozenset()))
    # every surviving row points back at a row of the *root* instance
    for row, origin in zip(r2.rows, r2.origins):
        assert row <= fc.rows[origin]


@given(st.data())
def test_restrict_preserves_feasible_points(data):
    n = data.draw(st.integers(2, 5))
    m = data.draw(st.integers(1, 4))
    inst = gen_random_cover(n, m, seed=data.draw(st.integers(0, 50)))
    true_m = data.draw(st.integers(0, (1 << n) - 1))
    false_m = data.draw(st.integers(0, (1 << n) - 1)) & ~true_m
    pa = PartialAssignment(
        frozenset(mask_to_vars(true_m)), frozenset(mask_to_vars(false_m))
    )
    compatible = [
        z
        for z in feasible_masks(inst)
        if z & true_m == true_m and z & false_m == 0
    ]
    try:
        r = restrict_instance(inst, pa)
    except InfeasibleRestrictionError:
        assert not compatible
        return
    rfeas = set(feasible_masks(r))
    for z in compatible:
        assert z in rfeas or any(z & ~true_m & ~false_m != z for _ in [0])
        # completions of z on the free vars stay feasible in the restriction
        assert z in rfeas


# ---------------------------------------------------------------------------
# feasibility and validity oracles
# ---------------------------------------------------------------------------


def test_feasible_masks_full_circulant():
    # feasible points of FC_3: at least two variables set
    assert feasible_masks(gen_full_circulant(3)) == (3, 5, 6, 7)
    pts = feasible_points(gen_full_circulant(3))
    assert (1, 1, 0) in pts and (1, 0, 0) not in pts


@given(st.data())
def test_feasible_masks_matches_row_check(data):
    n = data.draw(st.integers(2, 5))
    inst = gen_random_cover(
        n, data.draw(st.integers(1, 5)), seed=data.draw(st.integers(0, 99))
    )
    expected = [
        z
        for z in range(1 << n)
        if all(z & mask for mask in inst.row_masks())
    ]
    assert list(feasible_masks(inst)) == expected


def test_feasible_masks_knapsack_and_packing():
    kn = gen_symmetric_knapsack(3, F(3, 2))
    assert feasible_masks(kn) == (3, 5, 6, 7)  # need at least 2 ones
    pk = PackingInstance(2, (((F(2), F(2)), F(3)),))
    assert feasible_masks(pk) == (0, 1, 2)  # both ones exceeds 3


@given(st.data())
def test_is_valid_matches_brute_force(data):
    n = data.draw(st.integers(2, 4))
    inst = gen_random_cover(
        n, data.draw(st.integers(1, 4)), seed=data.draw(st.integers(0, 99))
    )
    coeffs = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    rhs = data.draw(st.integers(-1, 6))
    q = ge(coeffs, rhs)
    assert is_valid(q, inst) == _brute_valid(q, inst)


def test_size_guard_on_feasibility():
    lim = Limits(max_hypercube_n=3)
    with pytest.raises(SizeGuardError):
        feasible_masks(gen_full_circulant(4), limits=lim)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def test_enumerate_contains_known_inequalities():
    fc = gen_full_circulant(4)
    found = enumerate_valid_inequalities(fc, max_pitch=2, coef_bound=2)
    assert ge([1, 1, 1, 1], 2) in found
    assert ge([0, 1, 1, 1], 1) in found  # an original row
    # everything returned is valid, deduplicated, within the pitch bound
    assert len(set(found)) == len(found)
    for q in found:
        assert _brute_valid(q, fc)
        assert pitch(q) <= 2
        assert q == q.normalized()


def test_enumerate_packing_side():
    pk = PackingInstance(2, (((F(2), F(2)), F(3)),))
    found = enumerate_valid_inequalities(pk, max_pitch=1, coef_bound=2)
    assert le([1, 1], 1) in found
    for q in found:
        assert all(q.slack_at_mask(z) >= 0 for z in feasible_masks(pk))
        assert pitch(q) <= 1


def test_enumerate_respects_guard():
    lim = Limits(max_enumeration=10)
    with pytest.raises(SizeGuardError):
        enumerate_valid_inequalities(gen_full_circulant(4), 2, limits=lim)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def test_full_circulant_shape():
    for n in (3, 5, 8):
        fc = gen_full_circulant(n)
        assert fc.nrows == n
        for i, row in enumerate(fc.rows):
            assert row == frozenset(range(n)) - {i}
    with pytest.raises(InvalidInputError):
        gen_full_circulant(2)


def test_symmetric_knapsack_guards():
    kn = gen_symmetric_knapsack(5, "7/2")
    assert kn.rhs == F(7, 2)
    assert kn.constraints()[0].coeffs == (F(1),) * 5
    with pytest.raises(InvalidInputError):
        gen_symmetric_knapsack(3, F(4))  # rhs beyond the all-ones point


def test_random_cover_determinism_and_incomparability():
    a = gen_random_cover(5, 4, density=0.5, seed=7)
    b = gen_random_cover(5, 4, density=0.5, seed=7)
    assert a == b
    assert a != gen_random_cover(5, 4, density=0.5, seed=8)
    assert a.is_minimal()  # generated rows are pairwise incomparable
    with pytest.raises(InvalidInputError):
        gen_random_cover(5, 4, density=0.0)


def test_random_packing_determinism():
    a = gen_random_packing(4, 3, seed=11)
    assert a == gen_random_packing(4, 3, seed=11)
    assert a.nvars == 4 and len(a.rows) == 3
    for coeffs, rhs in a.rows:
        assert any(c > 0 for c in coeffs)
        assert rhs >= 0


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def test_instance_json_round_trips():
    for inst in (
        gen_full_circulant(4),
        gen_symmetric_knapsack(4, F(5, 2)),
        gen_random_packing(3, 2, seed=3),
        gen_random_cover(5, 4, seed=9),
    ):
        blob = instance_to_json(inst)
        assert instance_from_json(blob) == inst


def test_instance_json_uses_one_based_vars():
    blob = instance_to_json(gen_full_circulant(3))
    assert blob == {"kind": "cover", "n": 3, "rows": [[2, 3], [1, 3], [1, 2]]}


def test_inequality_json_round_trip():
    q = ge([1, 0, F(3, 2)], F(5, 2))
    blob = inequality_to_json(q)
    assert blob == {"a": ["1", "0", "3/2"], "a0": "5/2", "sense": "ge"}
    assert inequality_from_json(blob) == q


def test_json_rejects_garbage():
    with pytest.raises(InvalidInputError):
        instance_from_json({"kind": "mystery", "n": 2})
    with pytest.raises(InvalidInputError):
        instance_from_json({"kind": "cover", "n": 2, "rows": [[0]]})
    with pytest.raises(InvalidInputError):
        inequality_from_json({"a": ["1"], "a0": "1", "sense": "what"})
