"""Certified exact optimization of point-weight LPs (internal engine).

The relaxations in this package all reduce to LPs of the shape

    minimize    c . w
    subject to  M w >= 0   componentwise (M integer, one row per condition)
                sum(w) = 1

where w is a FREE vector of weights indexed by the 2^n points of the Boolean
hypercube.  Any linear functional on the polynomial span is represented by
some such w, so nothing is lost by working with all 2^n coordinates, and the
row count -- not the rank of a moment basis -- is what the solver has to
contend with.

Protocol, fully certified:

1. a floating-point solve (scipy / HiGHS) proposes an active set of rows;
2. an exact rational simplex solves the LP restricted to the active rows --
   a relaxation of the full LP, so its optimum is a valid lower bound;
3. every remaining row is screened against the exact solution: a float pass
   with a rigorous rounding-error bound discards rows that are safely
   satisfied, and the ambiguous ones are re-checked with exact arithmetic;
4. no violations means the restricted optimum is feasible for the full LP
   and therefore IS the optimum; otherwise the violated rows join the active
   set and the loop repeats.

The float step is advisory only: a bad proposal costs extra rounds, never
correctness.  Unbounded outcomes are certified by an exact improving ray
checked against every row plus an exactly-verified feasible point.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .errors import LPError
from .simplex import StandardLP, solve as simplex_solve

_MAX_ROUNDS = 80
_BATCH = 40  # violated rows activated per round
_ZERO = Fraction(0)


@dataclasses.dataclass(frozen=True)
class PointLPOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Optional[Fraction]
    weights: Optional[tuple[Fraction, ...]]
    ray: Optional[tuple[Fraction, ...]]
    rounds: int
    active: tuple[int, ...] = ()  # rows active at termination, for warm starts


class _Screen:
    """Exact satisfaction screening of all rows at a rational point."""

    def __init__(self, rows: sparse.csr_matrix):
        self.rows = rows
        self.rows_f = rows.astype(np.float64)
        self.abs_f = abs(self.rows_f)

    def violated(self, w: Sequence[Fraction], batch: int = _BATCH) -> list[int]:
        """Row indices with exact row.w < 0, most violated first."""
        w_f = np.array([float(v) for v in w])
        values = self.rows_f @ w_f
        # |float value - exact value| is bounded by the conversion error of
        # each w_z (half an ulp) plus the dot-product roundoff, both pushed
        # through |row|; anything clearing the bound is certainly >= 0.
        mags = self.abs_f @ np.abs(w_f)
        bound = self.abs_f @ (np.abs(w_f) * 2.0**-52 + 1e-300) + 1e-12 * mags + 1e-300
        suspects = np.nonzero(values < bound)[0]
        nz = {z: v for z, v in enumerate(w) if v != 0}
        found: list[tuple[float, int]] = []
        indptr, indices, data = self.rows.indptr, self.rows.indices, self.rows.data
        for r in suspects:
            total = _ZERO
            for pos in range(indptr[r], indptr[r + 1]):
                wv = nz.get(indices[pos])
                if wv is not None:
                    total += int(data[pos]) * wv
            if total < 0:
                found.append((float(total), int(r)))
        found.sort()
        return [r for _, r in found[:batch]]

    def point_feasible(self, point: int) -> bool:
        col = self.rows.getcol(point)
        return bool((col.data >= 0).all())


def _float_active_set(
    rows_f: sparse.csr_matrix, c_f: np.ndarray, npoints: int
) -> Optional[list[int]]:
    nrows = rows_f.shape[0]
    try:
        res = linprog(
            c_f,
            A_ub=-rows_f,
            b_ub=np.zeros(nrows),
            A_eq=np.ones((1, npoints)),
            b_eq=np.ones(1),
            bounds=(None, None),
            method="highs",
        )
    except (ValueError, TypeError):  # pragma: no cover - scipy hiccup
        return None
    if res.status != 0 or res.x is None:
        return None
    residual = np.asarray(rows_f @ res.x).ravel()
    marginals = np.abs(np.asarray(res.ineqlin.marginals).ravel())
    scale = 1.0 + float(np.abs(res.x).sum())
    tight = (residual < 1e-7 * scale) | (marginals > 1e-9)
    active = np.nonzero(tight)[0]
    cap = 4 * npoints + 100
    if len(active) > cap:
        order = np.argsort(residual[active])
        active = active[order[:cap]]
    return [int(r) for r in active]


def _exact_subset_solve(
    rows: sparse.csr_matrix, c: Sequence[Fraction], active: Sequence[int], npoints: int
):
    """Solve the LP restricted to the active rows, exactly.

    Free weights are modelled as w_z = v_z - t with v, t >= 0 (a shared
    negative offset), which halves the variable count relative to splitting
    every coordinate.  The >=0 rows are emitted in <= form so their slacks
    start basic and phase one only has to place the normalization row.
    """
    nv = npoints + 1
    csum = sum(c, _ZERO)
    objective = tuple(c) + (-csum,)
    lp_rows = []
    indptr, indices, data = rows.indptr, rows.indices, rows.data
    for r in active:
        coeffs = [_ZERO] * nv
        total = 0
        for pos in range(indptr[r], indptr[r + 1]):
            val = int(data[pos])
            coeffs[indices[pos]] = Fraction(-val)
            total += val
        coeffs[npoints] = Fraction(total)
        lp_rows.append((tuple(coeffs), "le", _ZERO))
    norm = tuple([Fraction(1)] * npoints + [Fraction(-npoints)])
    lp_rows.append((norm, "eq", Fraction(1)))
    lp = StandardLP(objective, tuple(lp_rows), sense="min")
    return simplex_solve(lp, pivot_rule="dantzig")


def _to_weights(solution: Sequence[Fraction], npoints: int) -> tuple[Fraction, ...]:
    t = solution[npoints]
    return tuple(solution[z] - t for z in range(npoints))


def minimize_point_lp(
    rows: sparse.csr_matrix,
    c: Sequence[Fraction],
    feasible_point: Optional[int] = None,
    warm_start: Optional[Sequence[int]] = None,
) -> PointLPOutcome:
    """Certified exact minimum of c.w over {w : rows.w >= 0, sum(w) = 1}.

    `rows` is an integer CSR matrix with 2^n columns; `c` gives the exact
    objective coefficient of each point weight; `feasible_point` is the
    encoding of a point known to satisfy every row (weights = that unit
    vector), used to certify unbounded outcomes.  `warm_start` supplies an
    initial active set (typically the `active` field of a previous outcome
    on the same rows); it replaces the float seeding step and, like it, only
    affects round count, never correctness.
    """
    npoints = rows.shape[1]
    nrows = rows.shape[0]
    c = [Fraction(v) for v in c]
    if len(c) != npoints:
        raise LPError("objective length mismatch")
    screen = _Screen(rows)
    if warm_start:
        active = [r for r in warm_start if 0 <= r < nrows]
    elif nrows <= max(2 * npoints + 40, 200):
        active = list(range(nrows))
    else:
        c_f = np.array([float(v) for v in c])
        seeded = _float_active_set(screen.rows_f, c_f, npoints)
        active = seeded if seeded else list(range(min(nrows, npoints + 100)))
    active_set = set(active)
    for rounds in range(1, _MAX_ROUNDS + 1):
        res = _exact_subset_solve(rows, c, sorted(active_set), npoints)
        if res.status == "infeasible":
            # A relaxation is infeasible, so the full LP is too.
            return PointLPOutcome("infeasible", None, None, None, rounds)
        if res.status == "optimal":
            w = _to_weights(res.solution, npoints)
            bad = screen.violated(w)
            if not bad:
                value = sum((cz * wz for cz, wz in zip(c, w)), _ZERO)
                return PointLPOutcome(
                    "optimal", value, w, None, rounds, tuple(sorted(active_set))
                )
            active_set.update(bad)
            continue
        # Unbounded on the subset: certify or refute the ray on all rows.
        ray = _to_weights(res.ray, npoints)
        if sum(ray, _ZERO) != 0:
            raise LPError("simplex ray violates the normalization direction")
        obj_dir = sum((cz * dz for cz, dz in zip(c, ray)), _ZERO)
        if obj_dir >= 0:
            raise LPError("simplex ray is not an improving direction")
        bad = screen.violated(ray)
        if bad:
            active_set.update(bad)
            continue
        if feasible_point is None or not screen.point_feasible(feasible_point):
            raise LPError(
                "unbounded direction found but no exactly-feasible point "
                "was supplied to certify feasibility"
            )
        return PointLPOutcome("unbounded", None, None, ray, rounds)
    raise LPError(f"row generation did not converge in {_MAX_ROUNDS} rounds")
