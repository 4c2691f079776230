"""Nonnegativity certificates over 0/1 systems, built and checked exactly.

A certificate writes a target form (slack of a linear inequality, or an
arbitrary multilinear polynomial) as a finite sum

    sum_t  multiplier_t(x) * ( lambda_t . g(x) + gamma_t . x + mu_t )

where g collects the instance constraints in their nonnegative form, the
multipliers are 0/1-valued indicator polynomials (or explicit multilinear
polynomials), and all weights are nonnegative rationals.  Equality is meant
in the square-free quotient ring, so verification expands everything with
`polyalg` and compares normal forms — no numerics involved.

Builders:

* `build_cover_certificate` — recursive construction for covering
  inequalities of bounded pitch, anchored at a small core of rows found by
  `find_core`; the recursion level (not the inequality's own pitch) drives
  the shape so every multiplier lands in the spanning family of that level.
* `symmetric_knapsack_certificate` — the cardinality-layer construction for
  the rounded-up symmetric knapsack inequality.
* `full_interpolation_certificate` — the 2^n-point interpolation baseline
  splitting points by the sign of the target polynomial.
* `packing_certificate` — the truncated-indicator construction for valid
  packing inequalities; multiplier degrees stay within pitch + 1.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Optional, Sequence, Union

from .config import current_limits, guard
from .errors import (
    CertificateError,
    InfeasibleRestrictionError,
    InvalidInputError,
)
from .instances import (
    CoverInstance,
    KnapsackInstance,
    LinearInequality,
    PackingInstance,
    feasible_masks,
    pitch,
    restrict_instance,
)
from .polyalg import (
    DeltaProduct,
    DeltaStructured,
    MultilinearPoly,
    PartialAssignment,
    SingleDelta,
    SymmetricSum,
    TRIVIAL_DELTA,
    delta_product,
    expand,
    mask_of,
    mask_to_vars,
    poly_from_json,
    poly_to_json,
    structured_from_json,
    structured_to_json,
)
from .ratio import format_fraction, parse_fraction
from .simplex import StandardLP, feasibility, solve as simplex_solve
from .spanning import overlap_set

_ZERO = Fraction(0)
_ONE = Fraction(1)

Multiplier = Union[SingleDelta, SymmetricSum, DeltaProduct, MultilinearPoly]
Target = Union[LinearInequality, MultilinearPoly]


# ---------------------------------------------------------------------------
# Data model
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ConicCombo:
    """Weights of one constraint combination: per-row, per-variable, constant.

    A well-formed certificate has every entry nonnegative; negativity is
    reported by verification rather than rejected at construction, so broken
    certificates can be represented and diagnosed.
    """

    lambdas: tuple[Fraction, ...]
    gammas: tuple[Fraction, ...]
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(Fraction(v) for v in self.lambdas))
        object.__setattr__(self, "gammas", tuple(Fraction(v) for v in self.gammas))
        object.__setattr__(self, "mu", Fraction(self.mu))

    def is_conic(self) -> bool:
        return (
            all(v >= 0 for v in self.lambdas)
            and all(v >= 0 for v in self.gammas)
            and self.mu >= 0
        )


@dataclasses.dataclass(frozen=True)
class CertTerm:
    multiplier: Multiplier
    combo: ConicCombo
    provenance: str = ""


@dataclasses.dataclass(frozen=True)
class Certificate:
    """target ≡ sum of multiplier * combo, with nonnegative weights.

    `degree_bound` is the maximum multiplier degree when tracked (packing
    certificates); negative means untracked.
    """

    target: Target
    terms: tuple[CertTerm, ...]
    degree_bound: int = -1


@dataclasses.dataclass(frozen=True)
class Core:
    """A small set of rows anchoring a covering certificate, with the
    variables shared by at least two of those rows."""

    rows: frozenset[int]
    overlap: frozenset[int]


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _constraint_polys(inst) -> tuple[MultilinearPoly, ...]:
    """Constraints in nonnegative form: a.x - a0 for >=, a0 - a.x for <=."""
    out = []
    for c in inst.constraints():
        poly = MultilinearPoly(
            inst.nvars,
            {1 << j: coef for j, coef in enumerate(c.coeffs) if coef != 0},
        )
        poly = poly - c.rhs
        out.append(poly if c.sense == "ge" else -poly)
    return tuple(out)


def _target_poly(target: Target, nvars: int) -> MultilinearPoly:
    if isinstance(target, MultilinearPoly):
        return target
    poly = MultilinearPoly(
        nvars,
        {1 << j: coef for j, coef in enumerate(target.coeffs) if coef != 0},
    )
    poly = poly - target.rhs
    return poly if target.sense == "ge" else -poly


def _multiplier_poly(mult: Multiplier, nvars: int) -> MultilinearPoly:
    if isinstance(mult, MultilinearPoly):
        return mult
    return expand(mult, nvars)


def _combo_poly(
    combo: ConicCombo, gpolys: Sequence[MultilinearPoly], nvars: int
) -> MultilinearPoly:
    acc = MultilinearPoly.constant(nvars, combo.mu)
    for lam, g in zip(combo.lambdas, gpolys):
        if lam:
            acc = acc + g.scale(lam)
    gam_terms = {1 << j: v for j, v in enumerate(combo.gammas) if v != 0}
    if gam_terms:
        acc = acc + MultilinearPoly(nvars, gam_terms)
    return acc


def certificate_residual(
    cert: Certificate, inst
) -> tuple[MultilinearPoly, tuple[str, ...]]:
    """Residual polynomial (target minus the certificate's sum) plus a list
    of structural problems (negative weights, length or degree violations)."""
    n = inst.nvars
    gpolys = _constraint_polys(inst)
    problems: list[str] = []
    total = MultilinearPoly.zero(n)
    for ti, term in enumerate(cert.terms):
        if len(term.combo.lambdas) != len(gpolys):
            problems.append(f"term {ti}: lambda length != row count")
            continue
        if len(term.combo.gammas) != n:
            problems.append(f"term {ti}: gamma length != variable count")
            continue
        if not term.combo.is_conic():
            problems.append(f"term {ti}: negative weight")
        mult = _multiplier_poly(term.multiplier, n)
        if cert.degree_bound >= 0 and mult.degree() > cert.degree_bound:
            problems.append(
                f"term {ti}: multiplier degree {mult.degree()} exceeds "
                f"bound {cert.degree_bound}"
            )
        total = total + mult * _combo_poly(term.combo, gpolys, n)
    residual = _target_poly(cert.target, n) - total
    return residual, tuple(problems)


def verify_certificate(cert: Certificate, inst) -> bool:
    """True iff the certificate reproduces the target exactly with
    nonnegative weights (and respects the degree bound when tracked)."""
    residual, problems = certificate_residual(cert, inst)
    return not problems and not residual


# ---------------------------------------------------------------------------
# Core search for covering certificates
# ---------------------------------------------------------------------------


def _box_min_off_overlap(
    inst: CoverInstance, core_rows: Sequence[int], vset: frozenset[int], coeffs
) -> Fraction:
    """Exact minimum of sum_{j not in V} a_j x_j over the [0,1]-box cut by
    the core rows with their overlap variables dropped (the fractional
    region the core must already bound once V is fixed to zero)."""
    n = inst.nvars
    objective = tuple(
        _ZERO if j in vset else Fraction(coeffs[j]) for j in range(n)
    )
    rows = []
    one = Fraction(1)
    for i in core_rows:
        support = inst.rows[i] - vset
        if not support:  # region is empty; the satisfiability check rejects C
            continue
        row = tuple(one if j in support else _ZERO for j in range(n))
        rows.append((row, "ge", one))
    lp = StandardLP(
        objective,
        tuple(rows),
        lower=tuple(_ZERO for _ in range(n)),
        upper=tuple(one for _ in range(n)),
        sense="min",
    )
    res = simplex_solve(lp)
    if res.status != "optimal":  # box LPs are always feasible and bounded
        raise CertificateError(f"core screening LP returned {res.status}")
    return res.optimum


def find_core(inst: CoverInstance, ineq: LinearInequality) -> Core:
    """Smallest-then-lexicographic row subset C such that

    * every row of C lies inside the inequality's support,
    * dropping the shared variables V of C and minimizing the rest of the
      inequality over the core's fractional region still clears the
      right-hand side, and
    * fixing all of V to zero leaves the instance satisfiable.
    """
    if ineq.sense != "ge":
        raise InvalidInputError("core search expects a covering inequality")
    if any(c < 0 for c in ineq.coeffs):
        raise InvalidInputError("core search expects nonnegative coefficients")
    support = frozenset(ineq.support())
    p = pitch(ineq)
    for size in range(min(p, inst.nrows) + 1):
        for combo in itertools.combinations(range(inst.nrows), size):
            if any(not inst.rows[i] <= support for i in combo):
                continue
            vset = overlap_set(inst, frozenset(combo))
            try:
                restrict_instance(inst, PartialAssignment(frozenset(), vset))
            except InfeasibleRestrictionError:
                continue
            if _box_min_off_overlap(inst, combo, vset, ineq.coeffs) >= ineq.rhs:
                return Core(frozenset(combo), vset)
    raise CertificateError(
        "no core of rows supports this inequality; it is either invalid or "
        "its pitch was computed against the wrong instance"
    )


# ---------------------------------------------------------------------------
# Covering certificate recursion
# ---------------------------------------------------------------------------


def _first_combo(
    inst: CoverInstance,
    coeffs: Sequence[Fraction],
    a0: Fraction,
    core: Core,
    top_m: int,
) -> ConicCombo:
    """Recover nonnegative weights writing the off-overlap part of the
    inequality as (row combination) + (variable bounds) + constant."""
    n = inst.nvars
    rows_c = sorted(core.rows)
    lambdas = [_ZERO] * top_m
    if not rows_c:
        if a0 > 0:
            raise CertificateError("empty core cannot cover a positive rhs")
        return ConicCombo(tuple(lambdas), tuple(coeffs), -a0)
    lp_rows = []
    for j in range(n):
        if j in core.overlap:
            continue
        col = tuple(
            _ONE if j in inst.rows[i] else _ZERO for i in rows_c
        )
        if any(col):
            lp_rows.append((col, "le", Fraction(coeffs[j])))
    lp_rows.append((tuple(_ONE for _ in rows_c), "ge", Fraction(a0)))
    probe = StandardLP(tuple(_ZERO for _ in rows_c), tuple(lp_rows), sense="min")
    res = feasibility(probe)
    if res.status != "optimal":
        raise CertificateError(
            "no nonnegative row combination matches the off-overlap "
            "coefficients; the core screening should have excluded this"
        )
    lam_c = res.solution
    for t, i in enumerate(rows_c):
        lambdas[inst.origins[i]] += lam_c[t]
    gammas = []
    for j in range(n):
        if j in core.overlap:
            gammas.append(_ZERO)
            continue
        colsum = sum(
            (lam_c[t] for t, i in enumerate(rows_c) if j in inst.rows[i]), _ZERO
        )
        gam = Fraction(coeffs[j]) - colsum
        if gam < 0:
            raise CertificateError("row combination overshoots a coefficient")
        gammas.append(gam)
    mu = sum(lam_c, _ZERO) - a0
    if mu < 0:
        raise CertificateError("row combination falls short of the rhs")
    return ConicCombo(tuple(lambdas), tuple(gammas), mu)


def _third_terms(
    coeffs: Sequence[Fraction],
    a0: Fraction,
    vset: frozenset[int],
    level: int,
    top_m: int,
    path: str,
) -> list[CertTerm]:
    """Terms covering all overlap patterns with at least `level` ones.

    Grouping those patterns by their trace on the `level` cheapest support
    variables turns them into symmetric sums with shared variable weights;
    the constants stay nonnegative precisely because the pitch is at most
    `level`.
    """
    n = len(coeffs)
    if len(vset) < level:
        return []
    support = [j for j in range(n) if coeffs[j] != 0]
    order = sorted(support, key=lambda j: (coeffs[j], j))
    cheap = order[:level]
    a_lvl = coeffs[order[level - 1]]
    prefix = frozenset(cheap) & vset
    rest = sorted(vset - prefix)
    gammas = []
    for j in range(n):
        if j in vset:
            if j in prefix:
                gammas.append(_ZERO)
            else:
                gam = Fraction(coeffs[j]) - a_lvl
                if gam < 0:
                    raise CertificateError(
                        "overlap variable cheaper than the level coefficient"
                    )
                gammas.append(gam)
        else:
            gammas.append(Fraction(coeffs[j]))
    zeros = tuple(_ZERO for _ in range(top_m))
    terms = []
    for isize in range(len(prefix) + 1):
        for icombo in itertools.combinations(sorted(prefix), isize):
            base = sum((Fraction(coeffs[j]) for j in icombo), _ZERO)
            for k in range(max(level - isize, 0), len(rest) + 1):
                mu = base + k * a_lvl - a0
                if mu < 0:
                    raise CertificateError(
                        "pattern constant went negative despite the pitch bound"
                    )
                terms.append(
                    CertTerm(
                        SymmetricSum(vset, frozenset(icombo), prefix, k),
                        ConicCombo(zeros, tuple(gammas), mu),
                        f"{path}third[I={{{','.join(str(j + 1) for j in icombo)}}},k={k}]",
                    )
                )
    return terms


def _certify_cover(
    inst: CoverInstance,
    coeffs: tuple[Fraction, ...],
    a0: Fraction,
    level: int,
    top_m: int,
    path: str,
) -> list[CertTerm]:
    n = inst.nvars
    ineq = LinearInequality(coeffs, a0, "ge")
    p = pitch(ineq)
    if p > level:
        raise CertificateError(
            f"pitch {p} exceeds the recursion level {level} at {path or 'top'}"
        )
    zeros = tuple(_ZERO for _ in range(top_m))
    if level == 0:
        return [CertTerm(TRIVIAL_DELTA, ConicCombo(zeros, coeffs, -a0), path + "base")]
    core = find_core(inst, ineq)
    vset = core.overlap
    terms = [
        CertTerm(
            SingleDelta(vset, frozenset()),
            _first_combo(inst, coeffs, a0, core, top_m),
            path + "first",
        )
    ]
    for jsize in range(1, level):
        for jcombo in itertools.combinations(sorted(vset), jsize):
            jset = frozenset(jcombo)
            try:
                sub = restrict_instance(inst, PartialAssignment(jset, vset - jset))
            except InfeasibleRestrictionError as exc:
                raise CertificateError(
                    "restriction emptied a row although the core screening "
                    "guaranteed satisfiability"
                ) from exc
            sub_a0 = a0 - sum((coeffs[j] for j in jset), _ZERO)
            sub_coeffs = tuple(
                _ZERO if j in vset else coeffs[j] for j in range(n)
            )
            jtxt = "{" + ",".join(str(j + 1) for j in jcombo) + "}"
            sub_terms = _certify_cover(
                sub, sub_coeffs, sub_a0, level - jsize, top_m,
                f"{path}second[J={jtxt}].",
            )
            head = SingleDelta(vset, jset)
            for st in sub_terms:
                terms.append(
                    CertTerm(
                        delta_product(head, st.multiplier), st.combo, st.provenance
                    )
                )
    terms.extend(_third_terms(coeffs, a0, vset, level, top_m, path))
    return terms


def build_cover_certificate(
    inst: CoverInstance, ineq: LinearInequality, pi: int, limits=None
) -> Certificate:
    """Certificate for a valid covering inequality at recursion level pi.

    Requires pitch(ineq) <= pi; the level is carried through the recursion
    so that every multiplier belongs to the spanning family of level pi.
    """
    lim = limits if limits is not None else current_limits()
    guard(pi, lim.max_pitch, "certificate level")
    if ineq.sense != "ge":
        raise InvalidInputError("covering certificates need a >= inequality")
    if ineq.nvars != inst.nvars:
        raise InvalidInputError("inequality/instance dimension mismatch")
    if any(c < 0 for c in ineq.coeffs):
        raise InvalidInputError("coefficients must be nonnegative")
    p = pitch(ineq)
    if p > pi:
        raise CertificateError(f"inequality has pitch {p}, above the level {pi}")
    terms = _certify_cover(
        inst, ineq.coeffs, ineq.rhs, pi, inst.nrows, ""
    )
    return Certificate(ineq, tuple(terms))


# ---------------------------------------------------------------------------
# Symmetric knapsack certificate
# ---------------------------------------------------------------------------


def symmetric_knapsack_certificate(n: int, b) -> Certificate:
    """Certificate that the symmetric knapsack region forces the rounded-up
    cardinality: counts points by their number of ones; layers at or above
    the ceiling carry plain constants, layers below lean on the knapsack row
    with weight (i - ceil(b)) / (i - b) >= 0."""
    b = Fraction(b) if not isinstance(b, str) else parse_fraction(b)
    if not 0 < b <= n:
        raise InvalidInputError("need 0 < b <= n")
    if b.denominator == 1:
        raise InvalidInputError(
            "integral right-hand side leaves nothing to round up"
        )
    ceil_b = -((-b.numerator) // b.denominator)
    full = frozenset(range(n))
    empty = frozenset()
    ones = tuple(_ONE for _ in range(n))
    zeros_g = tuple(_ZERO for _ in range(n))
    terms = []
    for i in range(n + 1):
        mult = SymmetricSum(full, empty, empty, i)
        if i >= ceil_b:
            combo = ConicCombo((_ZERO,), zeros_g, Fraction(i - ceil_b))
        else:
            lam = Fraction(i - ceil_b) / (i - b)
            combo = ConicCombo((lam,), zeros_g, _ZERO)
        terms.append(CertTerm(mult, combo, f"layer[{i}]"))
    target = LinearInequality(ones, Fraction(ceil_b), "ge")
    return Certificate(target, tuple(terms))


# ---------------------------------------------------------------------------
# Full interpolation baseline
# ---------------------------------------------------------------------------


def full_interpolation_certificate(
    inst, p: MultilinearPoly, limits=None
) -> Certificate:
    """Point-by-point certificate for a polynomial nonnegative on the
    feasible set: one indicator per hypercube point, constant weights where
    the value is nonnegative, and a violated-constraint weight where it is
    negative (such points are necessarily infeasible)."""
    lim = limits if limits is not None else current_limits()
    n = inst.nvars
    guard(n, lim.max_interpolation_n, "interpolation dimension")
    if p.nvars != n:
        raise InvalidInputError("polynomial/instance dimension mismatch")
    cons = inst.constraints()
    feas = frozenset(feasible_masks(inst, lim))
    full = frozenset(range(n))
    zeros_l = tuple(_ZERO for _ in cons)
    zeros_g = tuple(_ZERO for _ in range(n))
    terms = []
    for z in range(1 << n):
        iset = frozenset(mask_to_vars(z))
        mult = SingleDelta(full, iset)
        value = p.eval_mask(z)
        if value >= 0:
            terms.append(
                CertTerm(mult, ConicCombo(zeros_l, zeros_g, value), f"plus[{z}]")
            )
            continue
        if z in feas:
            raise CertificateError(
                f"polynomial is negative at the feasible point {z:0{n}b}"
            )
        h = next(
            (ci for ci, c in enumerate(cons) if c.slack_at_mask(z) < 0), None
        )
        if h is None:
            raise CertificateError(
                "infeasible point violates no single constraint"
            )
        lam = list(zeros_l)
        slack = cons[h].slack_at_mask(z)
        lam[h] = value / slack  # negative over negative
        terms.append(
            CertTerm(mult, ConicCombo(tuple(lam), zeros_g, _ZERO), f"minus[{z}]")
        )
    return Certificate(p, tuple(terms))


# ---------------------------------------------------------------------------
# Packing certificate
# ---------------------------------------------------------------------------


def _over_capacity(mask: int, coeffs, rhs) -> bool:
    total = _ZERO
    for j in mask_to_vars(mask):
        total += coeffs[j]
    return total > rhs


def packing_certificate(
    inst: PackingInstance, ineq: LinearInequality
) -> Certificate:
    """Bounded-degree certificate for a valid packing inequality.

    Indicators over the support are truncated by zeroing every monomial
    whose variable set already overshoots the right-hand side; the residual
    left by the truncation lives on exactly those overshooting sets, one
    monomial each, and every negative residual coefficient is paired with a
    constraint (single row, else a pair of rows) violated at that set's
    characteristic point.
    """
    if ineq.sense != "le":
        raise InvalidInputError("packing certificates need a <= inequality")
    if ineq.nvars != inst.nvars:
        raise InvalidInputError("inequality/instance dimension mismatch")
    if any(c < 0 for c in ineq.coeffs):
        raise InvalidInputError("coefficients must be nonnegative")
    n = inst.nvars
    a0 = ineq.rhs
    pi = pitch(ineq)
    smask = mask_of(ineq.support(), n)
    support = frozenset(ineq.support())
    cons = inst.constraints()
    zeros_l = tuple(_ZERO for _ in cons)
    zeros_g = tuple(_ZERO for _ in range(n))

    def truncate(poly: MultilinearPoly) -> MultilinearPoly:
        kept = {
            m: c
            for m, c in poly.terms.items()
            if not _over_capacity(m, ineq.coeffs, a0)
        }
        return MultilinearPoly(n, kept)

    terms = []
    total = MultilinearPoly.zero(n)
    for size in range(len(support) + 1):
        for combo in itertools.combinations(sorted(support), size):
            iset = frozenset(combo)
            deficit = a0 - sum((ineq.coeffs[j] for j in iset), _ZERO)
            if deficit < 0:
                continue  # over-capacity pattern: its indicator is truncated away
            mult = truncate(expand(SingleDelta(support, iset), n))
            if not mult:
                continue
            itxt = "{" + ",".join(str(j + 1) for j in combo) + "}"
            terms.append(
                CertTerm(
                    mult,
                    ConicCombo(zeros_l, zeros_g, deficit),
                    f"main[I={itxt}]",
                )
            )
            total = total + mult.scale(deficit)

    target = _target_poly(ineq, n)
    residual = target - total
    for mask in sorted(residual.terms):
        fm = residual.terms[mask]
        mono = MultilinearPoly(n, {mask: _ONE})
        mtxt = "{" + ",".join(str(j + 1) for j in mask_to_vars(mask)) + "}"
        if fm >= 0:
            terms.append(
                CertTerm(
                    mono,
                    ConicCombo(zeros_l, zeros_g, fm),
                    f"residual[M={mtxt}]",
                )
            )
            continue
        if not _over_capacity(mask, ineq.coeffs, a0):
            raise CertificateError(
                "negative residual on a set within capacity; the inequality "
                "cannot be valid"
            )
        picked = None
        for ci, c in enumerate(cons):
            slack = c.slack_at_mask(mask)
            if slack < 0:
                picked = ((ci,), slack)
                break
        if picked is None:
            for ci, cj in itertools.combinations(range(len(cons)), 2):
                slack = cons[ci].slack_at_mask(mask) + cons[cj].slack_at_mask(mask)
                if slack < 0:
                    picked = ((ci, cj), slack)
                    break
        if picked is None:
            raise CertificateError(
                "no violated row or row pair at an over-capacity point; "
                "the inequality is not valid for this system"
            )
        rows_used, slack = picked
        weight = fm / slack  # negative over negative
        lam = list(zeros_l)
        gam = list(zeros_g)
        for ci in rows_used:
            lam[ci] = weight
            for j in range(n):
                if not mask & (1 << j):
                    gam[j] += weight * cons[ci].coeffs[j]
        terms.append(
            CertTerm(
                mono,
                ConicCombo(tuple(lam), tuple(gam), _ZERO),
                f"residual[M={mtxt}]",
            )
        )
    degree = max((_multiplier_poly(t.multiplier, n).degree() for t in terms), default=0)
    cert = Certificate(ineq, tuple(terms), degree_bound=max(degree, 0))
    return cert


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _multiplier_to_json(mult: Multiplier) -> dict:
    if isinstance(mult, MultilinearPoly):
        data = poly_to_json(mult)
        data["kind"] = "poly"
        return data
    return structured_to_json(mult)


def _multiplier_from_json(data: dict) -> Multiplier:
    if data.get("kind") == "poly":
        return poly_from_json(data)
    return structured_from_json(data)


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert.target, MultilinearPoly):
        target = poly_to_json(cert.target)
        target["kind"] = "poly"
    else:
        from .instances import inequality_to_json

        target = inequality_to_json(cert.target)
        target["kind"] = "inequality"
    return {
        "target": target,
        "degree_bound": cert.degree_bound,
        "terms": [
            {
                "multiplier": _multiplier_to_json(t.multiplier),
                "lambda": [format_fraction(v) for v in t.combo.lambdas],
                "gamma": [format_fraction(v) for v in t.combo.gammas],
                "mu": format_fraction(t.combo.mu),
                "provenance": t.provenance,
            }
            for t in cert.terms
        ],
    }


def certificate_from_json(data: dict) -> Certificate:
    try:
        target_data = data["target"]
        raw_terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad certificate object: {data!r}") from exc
    if target_data.get("kind") == "poly":
        target: Target = poly_from_json(target_data)
    else:
        from .instances import inequality_from_json

        target = inequality_from_json(target_data)
    terms = []
    for item in raw_terms:
        try:
            terms.append(
                CertTerm(
                    _multiplier_from_json(item["multiplier"]),
                    ConicCombo(
                        tuple(parse_fraction(v) for v in item["lambda"]),
                        tuple(parse_fraction(v) for v in item["gamma"]),
                        parse_fraction(item["mu"]),
                    ),
                    item.get("provenance", ""),
                )
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad certificate term: {item!r}") from exc
    return Certificate(target, tuple(terms), int(data.get("degree_bound", -1)))
