"""Rounding-cut machinery for the closure experiments.

A rounding cut of a rational system takes nonnegative row multipliers below
one whose combined left-hand side is integral while the combined right-hand
side is not; rounding the right-hand side toward the feasible side then cuts
fractional points without touching any integer solution.  Enumeration over a
denominator-bounded grid of multipliers is sound but deliberately
incomplete: every returned cut is genuine, no completeness is claimed.

The closure experiment exhibits the scaling mechanism for packing systems:
a point that satisfies every low-pitch valid inequality can be shrunk by
((d-1)/d) per round and then survives rounding cuts whose pitch exceeds
d-1.  Since we have no oracle for all low-pitch inequalities, the
relaxation is realized exactly as the plain LP intersected with every
enumerated valid inequality of bounded pitch, and the scaled point is
checked against the enumerated (partial, iterated) cut family.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Optional, Sequence, Union

from .config import current_limits, guard
from .errors import InvalidInputError, LPError
from .instances import (
    CoverInstance,
    Instance,
    LinearInequality,
    PackingInstance,
    enumerate_valid_inequalities,
    inequality_to_json,
    instance_to_json,
)
from .ratio import format_fraction
from .simplex import StandardLP, solve as simplex_solve

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclasses.dataclass(frozen=True)
class CGCut:
    """One rounding cut: the grid multipliers (one per row of the system the
    cut was derived from) and the resulting integral inequality."""

    multipliers: tuple[Fraction, ...]
    cut: LinearInequality


@dataclasses.dataclass(frozen=True)
class ClosureReport:
    instance: PackingInstance
    objective: tuple[Fraction, ...]
    t: int
    epsilon: Fraction
    d: int
    lp_opt: Fraction
    opt_d: Fraction
    point_d: tuple[Fraction, ...]
    scaled_point: tuple[Fraction, ...]
    cuts: tuple[tuple[CGCut, bool], ...]

    def all_satisfied(self) -> bool:
        return all(ok for _, ok in self.cuts)


# ---------------------------------------------------------------------------
# Cut enumeration
# ---------------------------------------------------------------------------


def _instance_rows(inst: Instance) -> tuple[list, str]:
    rows = [(c.coeffs, c.rhs) for c in inst.constraints()]
    sense = "le" if isinstance(inst, PackingInstance) else "ge"
    return rows, sense


def _floor(value: Fraction) -> Fraction:
    return Fraction(value.numerator // value.denominator)

def _ceil(value: Fraction) -> Fraction:
    return Fraction(-((-value.numerator) // value.denominator))


def _cuts_from_rows(
    rows: Sequence[tuple[tuple[Fraction, ...], Fraction]],
    sense: str,
    denom_bound: int,
    limits,
) -> list[CGCut]:
    m = len(rows)
    n = len(rows[0][0]) if rows else 0
    guard(denom_bound ** m, limits.max_cg_combos, "cut multiplier grid")
    grid = [Fraction(k, denom_bound) for k in range(denom_bound)]
    out: list[CGCut] = []
    seen: set[tuple] = set()
    for lam in itertools.product(grid, repeat=m):
        combined = [
            sum((l * row[0][j] for l, row in zip(lam, rows)), _ZERO)
            for j in range(n)
        ]
        if any(v.denominator != 1 for v in combined):
            continue
        rhs = sum((l * row[1] for l, row in zip(lam, rows)), _ZERO)
        if rhs.denominator == 1:
            continue
        rounded = _floor(rhs) if sense == "le" else _ceil(rhs)
        cut = LinearInequality(tuple(combined), rounded, sense)
        key = (cut.coeffs, cut.rhs)
        if key in seen:
            continue
        seen.add(key)
        out.append(CGCut(tuple(lam), cut))
    return out


def enumerate_cg_cuts(
    inst: Union[PackingInstance, CoverInstance],
    denom_bound: int,
    limits=None,
) -> tuple[CGCut, ...]:
    """All rounding cuts with multipliers on the 1/denom_bound grid.

    Deterministic grid order, deduplicated by the resulting inequality.
    """
    if denom_bound < 2:
        raise InvalidInputError("denominator bound must be at least 2")
    lim = limits if limits is not None else current_limits()
    rows, sense = _instance_rows(inst)
    return tuple(_cuts_from_rows(rows, sense, denom_bound, lim))


def iterated_cg_cuts(
    inst: PackingInstance,
    denom_bound: int,
    rounds: int,
    limits=None,
) -> tuple[CGCut, ...]:
    """Cuts accumulated over `rounds` passes, each pass enumerating over the
    original rows plus all cuts found so far.  Multiplier tuples refer to
    the (growing) system of the pass that produced them."""
    if denom_bound < 2:
        raise InvalidInputError("denominator bound must be at least 2")
    lim = limits if limits is not None else current_limits()
    rows, sense = _instance_rows(inst)
    collected: list[CGCut] = []
    seen: set[tuple] = set()
    for _ in range(rounds):
        fresh = []
        for cg in _cuts_from_rows(rows, sense, denom_bound, lim):
            key = (cg.cut.coeffs, cg.cut.rhs)
            if key not in seen:
                seen.add(key)
                fresh.append(cg)
        if not fresh:
            break
        collected.extend(fresh)
        rows = rows + [(cg.cut.coeffs, cg.cut.rhs) for cg in fresh]
    return tuple(collected)


# ---------------------------------------------------------------------------
# Scaling
# ---------------------------------------------------------------------------


def scale_solution(x: Sequence, d: int, t: int) -> tuple[Fraction, ...]:
    """Shrink a point by ((d-1)/d)^t componentwise."""
    if d < 2:
        raise InvalidInputError("scaling denominator must be at least 2")
    if t < 0:
        raise InvalidInputError("round count must be nonnegative")
    phi = Fraction(d - 1, d) ** t
    return tuple(Fraction(v) * phi for v in x)


def choose_scaling_denominator(t: int, epsilon: Fraction) -> int:
    """Smallest d >= 2 with (d/(d-1))^t <= 1 + epsilon."""
    if t < 0:
        raise InvalidInputError("round count must be nonnegative")
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    if t == 0:
        return 2
    target = 1 + Fraction(epsilon)
    d = 2
    while Fraction(d, d - 1) ** t > target:
        d += 1
        if d > 10 ** 9:  # cannot happen for positive epsilon; belt and braces
            raise LPError("no scaling denominator found")
    return d


# ---------------------------------------------------------------------------
# The closure experiment
# ---------------------------------------------------------------------------


def _box_lp(
    nvars: int,
    rows: Sequence[tuple[tuple[Fraction, ...], str, Fraction]],
    objective: Sequence[Fraction],
) -> StandardLP:
    return StandardLP(
        tuple(objective),
        tuple(rows),
        lower=tuple(_ZERO for _ in range(nvars)),
        upper=tuple(_ONE for _ in range(nvars)),
        sense="max",
    )


def _evaluate(ineq: LinearInequality, point: Sequence[Fraction]) -> bool:
    value = sum((c * v for c, v in zip(ineq.coeffs, point)), _ZERO)
    return value >= ineq.rhs if ineq.sense == "ge" else value <= ineq.rhs


def closure_experiment(
    inst: PackingInstance,
    c: Sequence,
    t: int,
    epsilon,
    pitch_pi: Optional[int] = None,
    denom_bound: int = 2,
    limits=None,
) -> ClosureReport:
    """Exhibit the scaling bound on a packing instance.

    Chooses the smallest d with (d/(d-1))^t <= 1+epsilon, maximizes c over
    the pitch-(d-1) strengthened LP (plain LP plus enumerated valid
    inequalities of pitch <= d-1, or <= pitch_pi when given), scales the
    argmax by ((d-1)/d)^t, and checks the scaled point against the iterated
    enumerated cut family.  t = 0 degenerates to the plain LP against
    itself.
    """
    lim = limits if limits is not None else current_limits()
    if not isinstance(inst, PackingInstance):
        # shrinking a point preserves <= rows only; the experiment is
        # meaningless for covering systems
        raise InvalidInputError("closure scaling works on packing instances")
    objective = tuple(Fraction(v) for v in c)
    if len(objective) != inst.nvars:
        raise InvalidInputError("objective length must match the instance")
    if any(v < 0 for v in objective):
        raise InvalidInputError("objective must be nonnegative")
    if t < 0:
        raise InvalidInputError("round count must be nonnegative")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InvalidInputError("epsilon must be positive")
    d = choose_scaling_denominator(t, epsilon)

    base_rows = [
        (cc.coeffs, cc.sense, cc.rhs) for cc in inst.constraints()
    ]
    res = simplex_solve(_box_lp(inst.nvars, base_rows, objective))
    if res.status != "optimal":
        raise LPError(f"plain LP returned {res.status}")
    lp_opt, lp_point = res.optimum, res.solution

    if t == 0:
        return ClosureReport(
            inst, objective, 0, epsilon, d, lp_opt, lp_opt, lp_point,
            lp_point, (),
        )

    bound = pitch_pi if pitch_pi is not None else d - 1
    strengthened = list(base_rows)
    for ineq in enumerate_valid_inequalities(inst, bound, limits=lim):
        strengthened.append((ineq.coeffs, ineq.sense, ineq.rhs))
    res_d = simplex_solve(_box_lp(inst.nvars, strengthened, objective))
    if res_d.status != "optimal":
        raise LPError(f"strengthened LP returned {res_d.status}")
    opt_d, point_d = res_d.optimum, res_d.solution

    scaled = scale_solution(point_d, d, t)
    table = tuple(
        (cg, _evaluate(cg.cut, scaled))
        for cg in iterated_cg_cuts(inst, denom_bound, t, limits=lim)
    )
    return ClosureReport(
        inst, objective, t, epsilon, d, lp_opt, opt_d, point_d, scaled, table
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def cut_to_json(cg: CGCut) -> dict:
    data = inequality_to_json(cg.cut)
    data["multipliers"] = [format_fraction(v) for v in cg.multipliers]
    return data


def closure_report_to_json(report: ClosureReport) -> dict:
    return {
        "kind": "closure-report",
        "instance": instance_to_json(report.instance),
        "objective": [format_fraction(v) for v in report.objective],
        "t": report.t,
        "epsilon": format_fraction(report.epsilon),
        "d": report.d,
        "lp_opt": format_fraction(report.lp_opt),
        "opt_d": format_fraction(report.opt_d),
        "point_d": [format_fraction(v) for v in report.point_d],
        "scaled_point": [format_fraction(v) for v in report.scaled_point],
        "all_cuts_satisfied": report.all_satisfied(),
        "cuts": [
            dict(cut_to_json(cg), satisfied=ok) for cg, ok in report.cuts
        ],
    }
