"""Acceptance gate: one test per headline guarantee, c1 through c9.

Each test reproduces one advertised behavior end to end and is checked
against primitive oracles (pointwise arithmetic, vertex enumeration,
brute-force feasibility scans) rather than against the fast code paths it
exercises.  Run with -v to get one pass/fail line per guarantee; the
whole module takes a few minutes, dominated by c3's exhaustive sweep.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from test_simplex import _random_lp, brute_force_lp  # independent LP oracle

from pitchforge.certify import (
    build_cover_certificate,
    full_interpolation_certificate,
    packing_certificate,
    symmetric_knapsack_certificate,
    verify_certificate,
)
from pitchforge.cgtools import (
    closure_experiment,
    enumerate_cg_cuts,
    scale_solution,
)
from pitchforge.instances import (
    LinearInequality,
    PackingInstance,
    enumerate_valid_inequalities,
    feasible_masks,
    gen_full_circulant,
    gen_random_cover,
    gen_random_packing,
    gen_symmetric_knapsack,
    pitch,
)
from pitchforge.polyalg import (
    MultilinearPoly,
    PartialAssignment,
    SingleDelta,
    SymmetricSum,
    expand,
    mask_to_vars,
    structured_point_vector,
    submasks,
)
from pitchforge.relax import (
    build_sa_lp,
    build_standard_sa,
    cardinality_indicators,
    check_inequality,
    optimize,
)
from pitchforge.simplex import StandardLP, solve
from pitchforge.spanning import build_spanning_set

F = Fraction


def _ge(coeffs, rhs) -> LinearInequality:
    return LinearInequality(tuple(F(v) for v in coeffs), F(rhs), "ge")


def _support_int(d, n: int) -> int:
    """Indicator support as a 2^n-bit integer; asserts the vector is 0/1."""
    word = 0
    for z, v in enumerate(structured_point_vector(d, n)):
        if v == 1:
            word |= 1 << z
        else:
            assert v == 0
    return word


def _delta(zmask: int, imask: int) -> SingleDelta:
    return SingleDelta(frozenset(mask_to_vars(zmask)), frozenset(mask_to_vars(imask)))


# ---------------------------------------------------------------------------
# c1: indicator identities
# ---------------------------------------------------------------------------


def test_c1_delta_identities_exhaustive_and_random():
    """Partition of unity, idempotence, orthogonality, subfamily idempotence
    and the substitution rule, exhaustively for n <= 6 and on 200 random
    cases at n = 8, in under ten seconds.

    Pointwise equality over all 2^n points is equivalent to ring equality
    (the evaluation map is a bijection, unit-tested in test_polyalg), so the
    large cases run on exact evaluation vectors; small cases additionally go
    through symbolic products.
    """
    t_start = time.perf_counter()

    rng = random.Random(7)
    for n in range(1, 7):
        full = (1 << (1 << n)) - 1
        for zmask in range(1 << n):
            union = 0
            count = 0
            for im in submasks(zmask):
                sup = _support_int(_delta(zmask, im), n)
                assert sup & union == 0  # pairwise orthogonal
                union |= sup
                count += sup.bit_count()
            # disjoint 0/1 supports covering everything == the sum is 1
            assert union == full and count == 1 << n
            small = zmask.bit_count() <= 3
            if small:
                for im in submasks(zmask):
                    p = expand(_delta(zmask, im), n)
                    assert (p * p) == p  # symbolic idempotence
            subs = list(submasks(zmask))
            picks = (
                list(range(1 << len(subs)))
                if len(subs) <= 4
                else [rng.getrandbits(len(subs)) for _ in range(5)]
            )
            for pick in picks:  # idempotence of subfamily sums
                chosen = [subs[i] for i in range(len(subs)) if pick >> i & 1]
                if small:
                    g = MultilinearPoly.zero(n)
                    for im in chosen:
                        g = g + expand(_delta(zmask, im), n)
                    assert (g * g) == g
                else:
                    acc = [0] * (1 << n)
                    for im in chosen:
                        pv = structured_point_vector(_delta(zmask, im), n)
                        acc = [a + b for a, b in zip(acc, pv)]
                    assert all(v * v == v for v in acc)

    n = 8
    full = (1 << (1 << n)) - 1
    rng = random.Random(20260823)
    for _case in range(200):
        zmask = rng.getrandbits(n)
        imask = zmask & rng.getrandbits(n)
        union = 0
        count = 0
        for im in submasks(zmask):
            sup = _support_int(_delta(zmask, im), n)
            assert sup & union == 0
            union |= sup
            count += sup.bit_count()
        assert union == full and count == 1 << n
        d = _delta(zmask, imask)
        if (zmask & ~imask).bit_count() <= 5:
            p = expand(d, n)
            assert (p * p) == p
        subs = list(submasks(zmask))
        pick = rng.getrandbits(len(subs))
        acc = [0] * (1 << n)
        for i, im in enumerate(subs):
            if pick >> i & 1:
                pv = structured_point_vector(_delta(zmask, im), n)
                acc = [a + b for a, b in zip(acc, pv)]
        assert all(v * v == v for v in acc)
        # multiplying by the indicator lets the polynomial be evaluated
        # with the indicated variables pinned
        terms = {}
        for _ in range(rng.randint(1, 6)):
            terms[rng.getrandbits(n)] = F(rng.randint(-9, 9), rng.randint(1, 5))
        p = MultilinearPoly(n, terms)
        pinned = p.restrict(
            PartialAssignment(
                frozenset(mask_to_vars(imask)),
                frozenset(mask_to_vars(zmask & ~imask)),
            )
        )
        dv = structured_point_vector(d, n)
        pv = p.point_vector()
        rv = pinned.point_vector()
        assert all(a * b == a * c for a, b, c in zip(dv, pv, rv))

    elapsed = time.perf_counter() - t_start
    assert elapsed < 10.0, f"identity suite took {elapsed:.1f}s"
    print(f"c1: identities exhaustive n<=6 + 200 random n=8 in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# c2: circulant cover certificate shape
# ---------------------------------------------------------------------------


def test_c2_circulant_certificate_matches_display():
    """build_cover_certificate(FC_n, sum x >= 2, pi=2) verifies for
    n = 4..8 and has the documented three-block shape, under 5s per n."""
    for n in range(4, 9):
        t0 = time.perf_counter()
        fc = gen_full_circulant(n)
        overlap = frozenset(range(2, n))
        cert = build_cover_certificate(fc, _ge([1] * n, 2), 2)
        assert verify_certificate(cert, fc)

        first = [t for t in cert.terms if t.provenance == "first"]
        second = [t for t in cert.terms if t.provenance.startswith("second")]
        third = [t for t in cert.terms if t.provenance.startswith("third")]
        assert len(cert.terms) == len(first) + len(second) + len(third)
        assert len(first) == 1 and len(second) == n - 2 and len(third) == n - 3

        # block 1: overlap indicator times the sum of the two core rows
        head = first[0]
        assert head.multiplier == SingleDelta(overlap, frozenset())
        assert [i for i, v in enumerate(head.combo.lambdas) if v] == [0, 1]
        assert head.combo.lambdas[0] == 1 and head.combo.lambdas[1] == 1
        assert head.combo.mu == 0

        # block 2: one branch per overlap variable pinned to one
        assert {t.multiplier for t in second} == {
            SingleDelta(overlap, frozenset({i})) for i in overlap
        }
        for t in second:
            nonzero = [v for v in t.combo.lambdas if v]
            assert nonzero == [1]  # each branch leans on a single row

        # block 3: cardinality layers weighted k - 2
        assert {t.multiplier for t in third} == {
            SymmetricSum(overlap, frozenset(), frozenset(), k)
            for k in range(2, n - 1)
        }
        for t in third:
            assert t.combo.mu == t.multiplier.k - 2
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"n={n} took {elapsed:.1f}s"
    print("c2: certificate shape reproduced for n=4..8")


# ---------------------------------------------------------------------------
# c3: every low-pitch valid inequality certified
# ---------------------------------------------------------------------------


def _cover_suite():
    suite = [gen_full_circulant(n) for n in (4, 5, 6)]
    for s in range(10):
        suite.append(gen_random_cover(4 + s % 3, 3 + s % 4, 0.5, s))
    return suite


def test_c3_low_pitch_inequalities_certified_and_respected():
    """On every suite instance, every enumerated valid inequality of pitch
    <= 3 gets a verifying certificate AND nonnegative worst-case slack on
    the matching pitch-bounded relaxation.  Zero tolerance; this is the
    long leg of the suite (about five minutes)."""
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for pos, inst in enumerate(_cover_suite()):
        lps = {}
        for q in enumerate_valid_inequalities(inst, max_pitch=3, coef_bound=2):
            p = pitch(q)
            level = max(p, 1)
            if level not in lps:
                lps[level] = build_sa_lp(inst, build_spanning_set(inst, level))
            cert = build_cover_certificate(inst, q, p)
            if not verify_certificate(cert, inst):
                failures.append((pos, q, "certificate"))
            if check_inequality(lps[level], q) < 0:
                failures.append((pos, q, "slack"))
            checked += 1
    assert failures == []
    print(
        f"c3: {checked} inequalities over 13 instances, zero failures, "
        f"{time.perf_counter() - t0:.0f}s"
    )


# ---------------------------------------------------------------------------
# c4: relaxation optima on the circulant family
# ---------------------------------------------------------------------------


def test_c4_circulant_optima_exact():
    """Pitch-2 relaxation closes FC_n to exactly 2 while the plain LP sits
    at n/(n-1) and the degree-1 monomial hierarchy stays strictly below 2."""
    for n in range(4, 9):
        fc = gen_full_circulant(n)
        ones = tuple(F(1) for _ in range(n))
        lp2 = build_sa_lp(fc, build_spanning_set(fc, 2))
        _, v2, _ = optimize(lp2, ones, "min")
        assert v2 == 2
        _, v0, _ = optimize(build_standard_sa(fc, 0), ones, "min")
        assert v0 == F(n, n - 1)
        _, v1, _ = optimize(build_standard_sa(fc, 1), ones, "min")
        assert v1 < 2
    print("c4: pitch-2 = 2, plain = n/(n-1), degree-1 < 2 for n=4..8")


# ---------------------------------------------------------------------------
# c5: symmetric knapsack grid
# ---------------------------------------------------------------------------


def test_c5_symmetric_knapsack_grid():
    """Layered certificates verify on the whole fractional-threshold grid,
    the cardinality-indicator relaxation reaches ceil(b) exactly, and the
    degree-1 monomial hierarchy stays strictly below it."""
    cases = 0
    for n in range(1, 9):
        ones = tuple(F(1) for _ in range(n))
        for L in range(math.ceil(n / 2)):
            for P in (2, 10, 100):
                b = F(L) + F(1, P)
                kn = gen_symmetric_knapsack(n, b)
                cert = symmetric_knapsack_certificate(n, b)
                assert verify_certificate(cert, kn), (n, b)
                lp_sym = build_sa_lp(kn, cardinality_indicators(n))
                _, vsym, _ = optimize(lp_sym, ones, "min")
                assert vsym == math.ceil(b), (n, b, vsym)
                _, v1, _ = optimize(build_standard_sa(kn, 1), ones, "min")
                assert v1 < math.ceil(b), (n, b, v1)
                cases += 1
    print(f"c5: {cases} (n, b) pairs certified with exact ceil(b) optima")


# ---------------------------------------------------------------------------
# c6: packing certificates
# ---------------------------------------------------------------------------


def _packing_suite():
    return [
        gen_random_packing(3 + s % 3, 2 + s % 3, seed=s) for s in range(10)
    ]


def test_c6_packing_certificates_sweep():
    """Every enumerated valid packing inequality of pitch <= 2 on ten
    seeded instances gets a verifying certificate of degree <= pitch+1."""
    checked = 0
    for inst in _packing_suite():
        for q in enumerate_valid_inequalities(inst, max_pitch=2, coef_bound=2):
            cert = packing_certificate(inst, q)
            assert verify_certificate(cert, inst), (inst, q)
            assert cert.degree_bound <= pitch(q) + 1, (inst, q)
            checked += 1
    assert checked > 0
    print(f"c6: {checked} packing inequalities certified, zero failures")


# ---------------------------------------------------------------------------
# c7: simplex against vertex enumeration
# ---------------------------------------------------------------------------


def test_c7_simplex_matches_vertex_enumeration():
    """100 seeded LPs (<= 6 vars, <= 8 rows) agree exactly with the
    brute-force vertex oracle, and the classic cycling instance terminates
    under Bland's rule."""
    rng = random.Random(20250214)
    for trial in range(100):
        lp = _random_lp(rng, max_n=6, max_m=8)
        res = solve(lp)
        status, value = brute_force_lp(lp)
        assert res.status == status, f"trial {trial}"
        if status == "optimal":
            assert res.optimum == value, f"trial {trial}"

    beale = StandardLP(
        (F(-3, 4), F(150), F(-1, 50), F(6)),
        (
            ((F(1, 4), F(-60), F(-1, 25), F(9)), "le", F(0)),
            ((F(1, 2), F(-90), F(-1, 50), F(3)), "le", F(0)),
            ((F(0), F(0), F(1), F(0)), "le", F(1)),
        ),
    )
    res = solve(beale, pivot_rule="bland")
    assert res.status == "optimal" and res.optimum == F(-1, 20)
    print("c7: 100 random LPs match the oracle; cycling instance terminates")


# ---------------------------------------------------------------------------
# c8: rounding cuts and scaling
# ---------------------------------------------------------------------------


def test_c8_closure_mechanics():
    """The half-integer cuts of 2x+2y <= 3 contain x+y <= 1; halving the
    LP argmax lands inside it; and on the packing suite every scaled
    optimum satisfies every enumerated first-round cut."""
    pk = PackingInstance(2, (((F(2), F(2)), F(3)),))
    cuts = enumerate_cg_cuts(pk, 2)
    assert any(
        cg.cut.coeffs == (F(1), F(1))
        and cg.cut.rhs == F(1)
        and cg.cut.sense == "le"
        for cg in cuts
    )

    _, _, func = optimize(build_standard_sa(pk, 0), (F(1), F(1)), "max")
    point = func.projected_point()
    scaled = scale_solution(point, 2, 1)
    assert sum(scaled, F(0)) <= 1  # the scaled argmax satisfies the cut

    for inst in _packing_suite():
        ones = tuple(F(1) for _ in range(inst.nvars))
        report = closure_experiment(inst, ones, 1, F(1, 2))
        assert report.all_satisfied(), inst
    print("c8: scaled optima satisfy all enumerated cuts on the suite")


# ---------------------------------------------------------------------------
# c9: interpolation certificates
# ---------------------------------------------------------------------------


def test_c9_interpolation_certificates():
    """50 random nonnegative-on-feasible polynomials get verifying
    interpolation certificates with exactly 2^n terms split into the
    plus/minus point classes."""
    rng = random.Random(99)
    insts = [
        gen_full_circulant(3),
        gen_full_circulant(4),
        gen_full_circulant(5),
        gen_random_cover(5, 4, 0.5, 1),
        gen_symmetric_knapsack(4, F(3, 2)),
    ]
    for k in range(50):
        inst = insts[k % len(insts)]
        n = inst.nvars
        terms = {}
        for _ in range(rng.randint(1, 6)):
            terms[rng.getrandbits(n)] = F(rng.randint(-9, 9), rng.randint(1, 5))
        p = MultilinearPoly(n, terms)
        low = min(p.point_vector()[z] for z in feasible_masks(inst))
        p = p + MultilinearPoly(n, {0: -low})  # shift to nonnegative

        cert = full_interpolation_certificate(inst, p)
        assert verify_certificate(cert, inst), k
        assert len(cert.terms) == 1 << n
        plus = sum(1 for t in cert.terms if t.provenance.startswith("plus"))
        minus = sum(1 for t in cert.terms if t.provenance.startswith("minus"))
        assert plus + minus == 1 << n
    print("c9: 50 interpolation certificates, 2^n terms each")
