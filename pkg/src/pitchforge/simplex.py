"""Exact rational linear programming: two-phase primal simplex.

All arithmetic is over exact rationals (gmpy2.mpq when available, else
fractions.Fraction), so results are never rounded.  The default pivot rule is
Bland's least-index rule, which cannot cycle; an optional "dantzig" strategy
picks the most negative reduced cost and falls back to Bland after a run of
degenerate pivots (still deterministic, usually far fewer iterations).

The model is deliberately small: variables may carry arbitrary rational or
infinite bounds, rows compare a linear form with <=, >= or ==.  Free
variables are split, shifted variables recovered on the way out.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InvalidInputError, LPError

try:  # fast exact rationals; the pure-Python fallback is Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

_Q0 = _Q(0)
_Q1 = _Q(1)


def _to_q(value) -> "_Q":
    if isinstance(value, Fraction):
        return _Q(value.numerator, value.denominator)
    return _Q(value)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(int(value.numerator), int(value.denominator))


@dataclasses.dataclass(frozen=True)
class StandardLP:
    """min/max  objective . x  subject to rows and variable bounds.

    rows: tuples (coeffs, sense, rhs) with sense in {"le", "ge", "eq"}.
    lower/upper: per-variable bounds, None meaning unbounded on that side;
    omitted bounds default to lower 0 / upper None.
    """

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[tuple[Fraction, ...], str, Fraction], ...]
    lower: tuple[Optional[Fraction], ...] = ()
    upper: tuple[Optional[Fraction], ...] = ()
    sense: str = "min"

    def __post_init__(self):
        nv = len(self.objective)
        object.__setattr__(
            self, "objective", tuple(Fraction(c) for c in self.objective)
        )
        rows = []
        for coeffs, rsense, rhs in self.rows:
            if len(coeffs) != nv:
                raise InvalidInputError("row length mismatch")
            if rsense not in ("le", "ge", "eq"):
                raise InvalidInputError(f"bad row sense {rsense!r}")
            rows.append(
                (tuple(Fraction(c) for c in coeffs), rsense, Fraction(rhs))
            )
        object.__setattr__(self, "rows", tuple(rows))
        lower = self.lower if self.lower else tuple(Fraction(0) for _ in range(nv))
        upper = self.upper if self.upper else tuple(None for _ in range(nv))
        if len(lower) != nv or len(upper) != nv:
            raise InvalidInputError("bounds length mismatch")
        object.__setattr__(
            self,
            "lower",
            tuple(None if b is None else Fraction(b) for b in lower),
        )
        object.__setattr__(
            self,
            "upper",
            tuple(None if b is None else Fraction(b) for b in upper),
        )
        if self.sense not in ("min", "max"):
            raise InvalidInputError("LP sense must be 'min' or 'max'")
        for lo, up in zip(self.lower, self.upper):
            if lo is not None and up is not None and lo > up:
                raise InvalidInputError("empty variable bound interval")

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclasses.dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Optional[Fraction]
    solution: Optional[tuple[Fraction, ...]]
    basis: tuple[int, ...] = ()
    ray: Optional[tuple[Fraction, ...]] = None


class _Tableau:
    """Dense simplex tableau over exact rationals (internal)."""

    def __init__(self, nrows: int, ncols: int):
        self.rows = [[_Q0] * (ncols + 1) for _ in range(nrows)]
        self.cost = [_Q0] * (ncols + 1)
        self.basis = [-1] * nrows
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        if row[c] != 1:
            inv = _Q1 / row[c]
            self.rows[r] = row = [v * inv if v else v for v in row]
        # Touch only the pivot row's nonzero columns; slack regions stay
        # sparse for a long time and this is the whole inner loop.
        nz = [j for j, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
        f = self.cost[c]
        if f:
            cost = self.cost
            for j in nz:
                cost[j] -= f * row[j]
        self.basis[r] = c

    def price_out_basics(self) -> None:
        for r, j in enumerate(self.basis):
            if j >= 0 and self.cost[j]:
                f = self.cost[j]
                cost = self.cost
                for jj, b in enumerate(self.rows[r]):
                    if b:
                        cost[jj] -= f * b

    def _entering(self, allowed: int, pivot_rule: str, bland_now: bool) -> int:
        best = -1
        if pivot_rule == "bland" or bland_now:
            for j in range(allowed):
                if self.cost[j] < 0:
                    return j
            return -1
        best_val = _Q0
        for j in range(allowed):
            v = self.cost[j]
            if v < best_val:
                best_val = v
                best = j
        return best

    def _leaving(self, col: int) -> int:
        best_r = -1
        best_ratio = None
        for r, row in enumerate(self.rows):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[r] < self.basis[best_r])
                ):
                    best_ratio = ratio
                    best_r = r
        return best_r

    def run(self, allowed: int, pivot_rule: str, iteration_cap: int) -> tuple[str, int]:
        """Iterate to optimality; returns (status, entering col on unbounded)."""
        degenerate_run = 0
        bland_now = False
        for _ in range(iteration_cap):
            col = self._entering(allowed, pivot_rule, bland_now)
            if col < 0:
                return "optimal", -1
            r = self._leaving(col)
            if r < 0:
                return "unbounded", col
            if self.rows[r][-1] == 0:
                degenerate_run += 1
                if degenerate_run > 40:
                    bland_now = True  # anti-cycling fallback
            else:
                degenerate_run = 0
                bland_now = False
            self.pivot(r, col)
        raise LPError("simplex iteration cap exceeded")


def _standardize(lp: StandardLP):
    """Rewrite into min c.x, A x = b, x >= 0 with recovery recipes."""
    nv = lp.nvars
    sign = 1 if lp.sense == "min" else -1
    cols: list[list[tuple[int, Fraction]]] = []  # per std var: row coeffs later
    recover = []  # per original var: ("shift", k, l) | ("flip", k, u) | ("split", kp, kq)
    std_obj: list[Fraction] = []
    # base value of objective from shifts
    obj_shift = Fraction(0)
    row_shift = [Fraction(0) for _ in lp.rows]
    extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []

    col_of_var: list[dict[int, Fraction]] = []  # std var -> {orig var: coeff}

    def new_var(coeff_map: dict[int, Fraction], obj_coeff: Fraction) -> int:
        col_of_var.append(coeff_map)
        std_obj.append(obj_coeff)
        return len(col_of_var) - 1

    for j in range(nv):
        lo, up, cj = lp.lower[j], lp.upper[j], sign * lp.objective[j]
        if lo is not None:
            k = new_var({j: Fraction(1)}, cj)
            recover.append(("shift", k, lo))
            if lo != 0:
                obj_shift += cj * lo
                for i, (coeffs, _, _) in enumerate(lp.rows):
                    row_shift[i] += coeffs[j] * lo
            if up is not None:
                extra_rows.append(({k: Fraction(1)}, "le", up - lo))
        elif up is not None:
            # x_j = up - x', x' >= 0
            k = new_var({j: Fraction(-1)}, -cj)
            recover.append(("flip", k, up))
            obj_shift += cj * up
            for i, (coeffs, _, _) in enumerate(lp.rows):
                row_shift[i] += coeffs[j] * up
        else:
            kp = new_var({j: Fraction(1)}, cj)
            kq = new_var({j: Fraction(-1)}, -cj)
            recover.append(("split", kp, kq))

    # assemble equality rows over std vars
    eq_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for i, (coeffs, rsense, rhs) in enumerate(lp.rows):
        row: dict[int, Fraction] = {}
        for k, cmap in enumerate(col_of_var):
            val = sum((coeffs[j] * c for j, c in cmap.items()), Fraction(0))
            if val:
                row[k] = val
        eq_rows.append((row, rsense, rhs - row_shift[i]))
    eq_rows.extend(extra_rows)
    return sign, obj_shift, std_obj, eq_rows, recover, col_of_var


def _build_tableau(std_obj, eq_rows):
    """Slack/artificial augmentation; returns tableau plus bookkeeping."""
    nstruct = len(std_obj)
    m = len(eq_rows)
    ncols = nstruct
    slack_cols = {}
    art_cols = {}
    for i, (_, rsense, rhs) in enumerate(eq_rows):
        flip = rhs < 0
        eff = rsense if not flip else {"le": "ge", "ge": "le", "eq": "eq"}[rsense]
        if eff in ("le", "ge"):
            slack_cols[i] = (ncols, eff, flip)
            ncols += 1
    for i, (_, rsense, rhs) in enumerate(eq_rows):
        flip = rhs < 0
        eff = rsense if not flip else {"le": "ge", "ge": "le", "eq": "eq"}[rsense]
        if eff != "le":
            art_cols[i] = ncols
            ncols += 1
    tab = _Tableau(m, ncols)
    for i, (row, _, rhs) in enumerate(eq_rows):
        sgn = -1 if rhs < 0 else 1
        for k, v in row.items():
            tab.rows[i][k] = _to_q(sgn * v)
        tab.rows[i][-1] = _to_q(sgn * rhs)
        if i in slack_cols:
            col, eff, _ = slack_cols[i]
            tab.rows[i][col] = _Q1 if eff == "le" else -_Q1
        if i in art_cols:
            tab.rows[i][art_cols[i]] = _Q1
            tab.basis[i] = art_cols[i]
        else:
            tab.basis[i] = slack_cols[i][0]
    return tab, len(std_obj), ncols, set(art_cols.values())


def solve(lp: StandardLP, pivot_rule: str = "bland", iteration_cap: int = 200_000) -> LPResult:
    """Two-phase exact simplex.  Returns status optimal/infeasible/unbounded,
    with an exact optimum and solution (and a ray direction when unbounded)."""
    if pivot_rule not in ("bland", "dantzig"):
        raise InvalidInputError(f"unknown pivot rule {pivot_rule!r}")
    sign, obj_shift, std_obj, eq_rows, recover, _ = _standardize(lp)
    tab, nstruct, ncols, art_set = _build_tableau(std_obj, eq_rows)
    nslack_end = ncols - len(art_set)

    # Phase 1: minimize the sum of artificials.
    if art_set:
        for c in art_set:
            tab.cost[c] = _Q1
        tab.price_out_basics()
        tab.run(ncols, pivot_rule, iteration_cap)
        # cost row holds -(current phase-1 objective)
        if -tab.cost[-1] > 0:
            return LPResult("infeasible", None, None)
        # Drive leftover artificials out of the basis.
        for r in range(len(tab.rows)):
            if tab.basis[r] in art_set:
                piv = next(
                    (j for j in range(nslack_end) if tab.rows[r][j] != 0), None
                )
                if piv is not None:
                    tab.pivot(r, piv)
        # Zero out the artificial columns so they can never re-enter.
        for r in range(len(tab.rows)):
            for c in art_set:
                tab.rows[r][c] = _Q0

    # Phase 2 objective.
    tab.cost = [_Q0] * (ncols + 1)
    for k, cj in enumerate(std_obj):
        tab.cost[k] = _to_q(cj)
    tab.price_out_basics()
    status, enter_col = tab.run(nslack_end, pivot_rule, iteration_cap)

    def structural_solution() -> list[Fraction]:
        values = [Fraction(0)] * nstruct
        for r, j in enumerate(tab.basis):
            if 0 <= j < nstruct:
                values[j] = _to_fraction(tab.rows[r][-1])
        return values

    def recover_point(std_vals: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = []
        for rec in recover:
            if rec[0] == "shift":
                out.append(std_vals[rec[1]] + rec[2])
            elif rec[0] == "flip":
                out.append(rec[2] - std_vals[rec[1]])
            else:
                out.append(std_vals[rec[1]] - std_vals[rec[2]])
        return tuple(out)

    if status == "unbounded":
        # Build the improving ray in structural space.
        direction = [Fraction(0)] * nstruct
        if enter_col < nstruct:
            direction[enter_col] = Fraction(1)
        for r, j in enumerate(tab.basis):
            if 0 <= j < nstruct:
                direction[j] -= _to_fraction(tab.rows[r][enter_col])
        ray = []
        for rec in recover:
            if rec[0] == "shift":
                ray.append(direction[rec[1]])
            elif rec[0] == "flip":
                ray.append(-direction[rec[1]])
            else:
                ray.append(direction[rec[1]] - direction[rec[2]])
        return LPResult("unbounded", None, None, tuple(tab.basis), tuple(ray))

    std_vals = structural_solution()
    value = sum(
        (c * v for c, v in zip(std_obj, std_vals)), Fraction(0)
    ) + obj_shift
    point = recover_point(std_vals)
    return LPResult(
        "optimal",
        sign * value if sign == 1 else -value,
        point,
        tuple(tab.basis),
    )


def feasibility(lp: StandardLP, pivot_rule: str = "bland") -> LPResult:
    """Phase-1 only: find any point satisfying the rows and bounds."""
    probe = StandardLP(
        tuple(Fraction(0) for _ in range(lp.nvars)),
        lp.rows,
        lp.lower,
        lp.upper,
        "min",
    )
    result = solve(probe, pivot_rule=pivot_rule)
    if result.status == "unbounded":  # cannot happen with zero objective
        raise LPError("feasibility probe reported unbounded")
    return result
