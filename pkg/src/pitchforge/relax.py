"""Moment relaxations driven by a family of indicator multipliers.

Given a covering (or knapsack) instance and a family S of 0/1-valued
polynomials, the relaxation asks for a linear functional y on the span of
T = {p} ∪ {x_i * p : p ∈ S} with

    y[1] = 1,   y[q] >= 0,   y[q * g] >= 0

for every q ∈ S and every constraint g, where g ranges over the instance
rows (a.x - a0 >= 0) and the variable bounds x_j >= 0.  Products q * g stay
inside the span by construction: q * (sum_j x_j - a0) telescopes into span
generators, so no extension step is ever needed.

Internally the functional is represented by free point weights w over the
2^n hypercube points (y[p] = sum_z w_z p(z)); every functional on the span
arises this way, so optimizing over w is exactly optimizing over y.  Rows
are therefore stored as integer vectors of point evaluations (scaled by a
positive integer to clear denominators) rather than as coordinate vectors
over a moment basis; `MomentBasis` and the coordinate views are computed
lazily for inspection, never on the optimization path.

All optimization goes through the certified exact engine in `momentlp`.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import sparse

from .config import current_limits, guard
from .errors import InvalidInputError, LPError
from .instances import (
    CoverInstance,
    KnapsackInstance,
    LinearInequality,
    PackingInstance,
)
from .momentlp import minimize_point_lp
from .polyalg import (
    DeltaProduct,
    DeltaStructured,
    MultilinearPoly,
    SingleDelta,
    SymmetricSum,
    delta_value,
    structured_to_json,
)
from .ratio import format_fraction
from .spanning import SpanMember, SpanningSet

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)

MemberLike = Union[SpanMember, DeltaStructured, MultilinearPoly]
RelaxInstance = Union[CoverInstance, KnapsackInstance]


def _member_polys(family) -> tuple:
    """Normalize a SpanningSet / iterable of members into bare polynomials."""
    if isinstance(family, SpanningSet):
        return family.polys()
    out = []
    for item in family:
        out.append(item.poly if isinstance(item, SpanMember) else item)
    return tuple(out)


def cardinality_indicators(nvars: int) -> tuple[SymmetricSum, ...]:
    """Indicators of "exactly k ones", k = 0..n; they partition the cube."""
    full = frozenset(range(nvars))
    empty = frozenset()
    return tuple(SymmetricSum(full, empty, empty, k) for k in range(nvars + 1))


# ---------------------------------------------------------------------------
# Vectorized point evaluation
# ---------------------------------------------------------------------------


def _popcount_table(npoints: int) -> np.ndarray:
    return np.array([z.bit_count() for z in range(npoints)], dtype=np.int64)


def _mask(s: frozenset[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << i
    return m


def _support_array(d, zz: np.ndarray, pop: np.ndarray) -> np.ndarray:
    """Boolean evaluation vector of a 0/1-valued family member."""
    if isinstance(d, SingleDelta):
        return (zz & _mask(d.zset)) == _mask(d.iset)
    if isinstance(d, SymmetricSum):
        ok = (zz & _mask(d.pset)) == _mask(d.iset)
        free = _mask(d.vset) & ~_mask(d.pset)
        return ok & (pop[zz & free] == d.k)
    if isinstance(d, DeltaProduct):
        return _support_array(d.head, zz, pop) & _support_array(d.tail, zz, pop)
    if isinstance(d, MultilinearPoly):
        values = np.array([d.eval_mask(int(z)) for z in zz], dtype=object)
        if not all(v in (0, 1) for v in values):
            raise InvalidInputError("family members must be 0/1-valued")
        return values == 1
    raise InvalidInputError(f"not a supported family member: {d!r}")


def _scaled_constraint_vector(
    ineq: LinearInequality, zbits: Sequence[np.ndarray]
) -> np.ndarray:
    """Integer vector of den * (slack of the constraint) at every point."""
    den = lcm(
        ineq.rhs.denominator, *(c.denominator for c in ineq.coeffs)
    )
    total = np.full(zbits[0].shape, -int(ineq.rhs * den), dtype=np.int64)
    for j, c in enumerate(ineq.coeffs):
        ci = int(c * den)
        if ci:
            total = total + ci * zbits[j]
    if ineq.sense == "le":
        total = -total
    return total


# ---------------------------------------------------------------------------
# Moment basis (lazy, inspection-oriented)
# ---------------------------------------------------------------------------


class MomentBasis:
    """Exact basis of span{p, x_i * p : p ∈ S} over the evaluation pairing.

    Generators are ordered (p, x_1*p, .., x_n*p) per family member; a greedy
    exact Gaussian elimination in that order selects the basis, stopping
    early once the span is the full 2^n-dimensional space.  Coordinates of
    any generator (or any vector in the span) are solved on demand.
    """

    def __init__(self, family, nvars: int, limits=None):
        lim = limits if limits is not None else current_limits()
        guard(nvars, lim.max_hypercube_n, "hypercube dimension")
        self.nvars = nvars
        self.npoints = 1 << nvars
        self.sources = _member_polys(family)
        # (source index, variable index or -1 for the bare member)
        self.labels: tuple[tuple[int, int], ...] = tuple(
            (si, vi)
            for si in range(len(self.sources))
            for vi in range(-1, nvars)
        )
        self._zz = np.arange(self.npoints, dtype=np.int64)
        self._pop = _popcount_table(self.npoints)
        self._coord_cache: dict[int, tuple[Fraction, ...]] = {}
        self._gen_poly_cache: dict[int, MultilinearPoly] = {}
        self._eliminate()

    # -- construction -------------------------------------------------------

    def _gen_values(self, gen_index: int) -> list:
        si, vi = self.labels[gen_index]
        src = self.sources[si]
        if isinstance(src, MultilinearPoly):
            base = list(src.point_vector())
        else:
            base = [
                _ONE if b else _ZERO
                for b in _support_array(src, self._zz, self._pop)
            ]
        if vi >= 0:
            bit = 1 << vi
            base = [v if z & bit else _ZERO for z, v in enumerate(base)]
        return base

    def _eliminate(self) -> None:
        reduced: list[tuple[int, list]] = []  # (pivot point, mpq row)
        exprs: list[list] = []  # reduced row = sum expr[b] * basis vector b
        basis: list[int] = []
        seen: set[tuple] = set()
        for gi in range(len(self.labels)):
            if len(basis) == self.npoints:
                break
            values = self._gen_values(gi)
            key = tuple(values)
            if key in seen:
                continue
            seen.add(key)
            vec = [_Q(v.numerator, v.denominator) for v in values]
            expr = [_Q(0)] * (len(basis) + 1)
            expr[len(basis)] = _Q(1)
            for ri, (pivot, row) in enumerate(reduced):
                f = vec[pivot]
                if f:
                    vec = [a - f * b for a, b in zip(vec, row)]
                    old = exprs[ri]
                    for b in range(len(old)):
                        expr[b] -= f * old[b]
            pivot = next((z for z, v in enumerate(vec) if v), None)
            if pivot is None:
                continue
            inv = 1 / vec[pivot]
            reduced.append((pivot, [v * inv for v in vec]))
            exprs.append([e * inv for e in expr])
            basis.append(gi)
        self._reduced = reduced
        self._exprs = exprs
        self.basis_indices = tuple(basis)

    # -- queries ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.basis_indices)

    def generator_count(self) -> int:
        return len(self.labels)

    def generator_poly(self, gen_index: int) -> MultilinearPoly:
        cached = self._gen_poly_cache.get(gen_index)
        if cached is None:
            cached = MultilinearPoly.from_point_values(
                self.nvars, self._gen_values(gen_index)
            )
            self._gen_poly_cache[gen_index] = cached
        return cached

    @property
    def generators(self) -> tuple[MultilinearPoly, ...]:
        return tuple(
            self.generator_poly(gi) for gi in range(len(self.labels))
        )

    def basis_polys(self) -> tuple[MultilinearPoly, ...]:
        return tuple(self.generator_poly(gi) for gi in self.basis_indices)

    def coordinates_of_vector(self, values: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of an arbitrary point-evaluation vector in the basis;
        raises if the vector lies outside the span."""
        if len(values) != self.npoints:
            raise InvalidInputError("vector length mismatch")
        vec = [_Q(Fraction(v).numerator, Fraction(v).denominator) for v in values]
        coeffs = [_Q(0)] * len(self.basis_indices)
        for ri, (pivot, row) in enumerate(self._reduced):
            f = vec[pivot]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
                expr = self._exprs[ri]
                for b in range(len(expr)):
                    coeffs[b] += f * expr[b]
        if any(vec):
            raise LPError("vector lies outside the span of the family")
        return tuple(Fraction(int(c.numerator), int(c.denominator)) for c in coeffs)

    def coords(self, gen_index: int) -> tuple[Fraction, ...]:
        """Coordinates of a generator in the basis (cached)."""
        cached = self._coord_cache.get(gen_index)
        if cached is None:
            cached = self.coordinates_of_vector(self._gen_values(gen_index))
            self._coord_cache[gen_index] = cached
        return cached


def build_moment_basis(family, inst_or_nvars, limits=None) -> MomentBasis:
    nvars = (
        inst_or_nvars if isinstance(inst_or_nvars, int) else inst_or_nvars.nvars
    )
    return MomentBasis(family, nvars, limits)


# ---------------------------------------------------------------------------
# The relaxation LP
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RowLabel:
    """Provenance of an LP row: which member, paired with what.

    kind "member" is the bare y[q] >= 0 row; "constraint" pairs the member
    with instance row `index`; "nonneg" pairs it with x_{index+1} >= 0.
    """

    kind: str
    member: int
    index: int = -1


class RelaxationLP:
    """Point-evaluation form of the moment LP for one instance + family."""

    def __init__(self, inst: RelaxInstance, family, limits=None):
        lim = limits if limits is not None else current_limits()
        guard(inst.nvars, lim.max_hypercube_n, "hypercube dimension")
        self.inst = inst
        self.nvars = inst.nvars
        self.npoints = 1 << inst.nvars
        self.member_polys = _member_polys(family)
        self.member_info = (
            tuple(family) if isinstance(family, SpanningSet) else None
        )
        self._limits = lim
        self._basis: Optional[MomentBasis] = None
        self._warm: tuple[int, ...] = ()  # last optimal active set
        self._build_rows()

    def _build_rows(self) -> None:
        zz = np.arange(self.npoints, dtype=np.int64)
        pop = _popcount_table(self.npoints)
        self._zbits = [
            ((zz >> j) & 1).astype(np.int64) for j in range(self.nvars)
        ]
        self.constraints = self.inst.constraints()
        gvecs = [
            _scaled_constraint_vector(c, self._zbits) for c in self.constraints
        ]
        data_parts: list[np.ndarray] = []
        index_parts: list[np.ndarray] = []
        indptr = [0]
        labels: list[list[RowLabel]] = []
        vacuous: list[RowLabel] = []
        dedup: dict[bytes, int] = {}

        def add_row(points: np.ndarray, values: np.ndarray, label: RowLabel):
            keep = values != 0
            points, values = points[keep], values[keep]
            if len(points) == 0:
                vacuous.append(label)
                return
            key = points.tobytes() + b"|" + values.tobytes()
            hit = dedup.get(key)
            if hit is not None:
                labels[hit].append(label)
                return
            dedup[key] = len(labels)
            labels.append([label])
            index_parts.append(points)
            data_parts.append(values)
            indptr.append(indptr[-1] + len(points))

        for mi, poly in enumerate(self.member_polys):
            supp = _support_array(poly, zz, pop)
            zs = np.nonzero(supp)[0].astype(np.int32)
            if len(zs) == 0:
                vacuous.append(RowLabel("member", mi))
                continue
            ones = np.ones(len(zs), dtype=np.int64)
            add_row(zs, ones, RowLabel("member", mi))
            for ci, gv in enumerate(gvecs):
                add_row(zs, gv[zs], RowLabel("constraint", mi, ci))
            for j in range(self.nvars):
                add_row(zs, self._zbits[j][zs], RowLabel("nonneg", mi, j))

        if data_parts:
            data = np.concatenate(data_parts)
            indices = np.concatenate(index_parts)
        else:  # no rows at all (empty family)
            data = np.zeros(0, dtype=np.int64)
            indices = np.zeros(0, dtype=np.int32)
        self.rows = sparse.csr_matrix(
            (data, indices, np.array(indptr)), shape=(len(labels), self.npoints)
        )
        self.row_labels: tuple[tuple[RowLabel, ...], ...] = tuple(
            tuple(ls) for ls in labels
        )
        self.vacuous_labels = frozenset(vacuous)
        self._label_index = {
            lab: ri for ri, ls in enumerate(self.row_labels) for lab in ls
        }

    # -- row access ---------------------------------------------------------

    @property
    def nrows(self) -> int:
        return self.rows.shape[0]

    def row_of(self, label: RowLabel) -> int:
        if label in self.vacuous_labels:
            raise KeyError(f"{label} produced an identically-zero row")
        return self._label_index[label]

    def row_vector(self, row_index: int) -> tuple[int, ...]:
        return tuple(
            int(v) for v in self.rows.getrow(row_index).toarray().ravel()
        )

    def x_vector(self, j: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self._zbits[j])

    # -- lazy coordinate views ----------------------------------------------

    @property
    def basis(self) -> MomentBasis:
        if self._basis is None:
            self._basis = MomentBasis(
                self.member_polys, self.nvars, self._limits
            )
        return self._basis

    def coordinate_row(self, row_index: int) -> tuple[Fraction, ...]:
        """The row as a coordinate vector over the moment basis."""
        return self.basis.coordinates_of_vector(
            [Fraction(v) for v in self.row_vector(row_index)]
        )


def build_sa_lp(inst: RelaxInstance, family, limits=None) -> RelaxationLP:
    """Relaxation LP for a covering-type instance and a member family."""
    return RelaxationLP(inst, family, limits)


def build_standard_sa(inst: RelaxInstance, d: int, limits=None) -> RelaxationLP:
    """Plain degree-d hierarchy: the family is all monomials of degree <= d."""
    if d < 0:
        raise InvalidInputError("degree must be nonnegative")
    if d > inst.nvars:
        d = inst.nvars
    lim = limits if limits is not None else current_limits()
    count = sum(
        1
        for size in range(d + 1)
        for _ in itertools.combinations(range(inst.nvars), size)
    )
    guard(count, lim.max_enumeration, "monomial family size")
    members = tuple(
        SingleDelta(frozenset(combo), frozenset(combo))
        for size in range(d + 1)
        for combo in itertools.combinations(range(inst.nvars), size)
    )
    return RelaxationLP(inst, members, lim)


# ---------------------------------------------------------------------------
# Functionals and optimization
# ---------------------------------------------------------------------------


class Functional:
    """Linear functional y on multilinear polynomials, given by exact point
    weights: y[p] = sum_z w_z p(z).  Normalized so that y[1] = 1."""

    __slots__ = ("nvars", "weights", "_superset")

    def __init__(self, nvars: int, weights: Sequence[Fraction]):
        if len(weights) != (1 << nvars):
            raise InvalidInputError("weight vector length mismatch")
        ws = tuple(Fraction(v) for v in weights)
        if sum(ws) != 1:
            raise InvalidInputError("functional is not normalized")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "_superset", None)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("Functional is immutable")

    def _superset_sums(self) -> list[Fraction]:
        cached = object.__getattribute__(self, "_superset")
        if cached is None:
            size = 1 << self.nvars
            work = list(self.weights)
            for bit in range(self.nvars):
                step = 1 << bit
                for z in range(size):
                    if not z & step:
                        work[z] += work[z | step]
            cached = work
            object.__setattr__(self, "_superset", cached)
        return cached

    def of_poly(self, p: MultilinearPoly) -> Fraction:
        if p.nvars != self.nvars:
            raise InvalidInputError("nvars mismatch")
        sums = self._superset_sums()
        return sum((c * sums[m] for m, c in p.terms.items()), _ZERO)

    def of_structured(self, d: DeltaStructured) -> Fraction:
        return sum(
            (w for z, w in enumerate(self.weights) if w != 0 and delta_value(d, z)),
            _ZERO,
        )

    def of_point_values(self, values: Sequence) -> Fraction:
        return sum(
            (w * Fraction(values[z]) for z, w in enumerate(self.weights) if w != 0),
            _ZERO,
        )

    def projected_point(self) -> tuple[Fraction, ...]:
        """(y[x_1], ..., y[x_n])."""
        out = []
        for j in range(self.nvars):
            bit = 1 << j
            out.append(
                sum((w for z, w in enumerate(self.weights) if w != 0 and z & bit), _ZERO)
            )
        return tuple(out)

    def basis_values(self, basis: MomentBasis) -> tuple[Fraction, ...]:
        """y evaluated on each basis generator."""
        return tuple(
            self.of_point_values(basis._gen_values(gi))
            for gi in basis.basis_indices
        )


def _objective_point_values(
    objective: Sequence, nvars: int
) -> list[Fraction]:
    obj = [Fraction(v) for v in objective]
    if len(obj) != nvars:
        raise InvalidInputError("objective length mismatch")
    values = [_ZERO] * (1 << nvars)
    for j, cj in enumerate(obj):
        if cj == 0:
            continue
        bit = 1 << j
        for z in range(1 << nvars):
            if z & bit:
                values[z] += cj
    return values


def optimize(
    lp: RelaxationLP, objective: Sequence, sense: str = "min"
) -> tuple[str, Optional[Fraction], Optional[Functional]]:
    """Exact optimum of sum_j c_j y[x_j] over the relaxation.

    Returns (status, optimum, functional); status is "optimal" or
    "unbounded" (an infeasible relaxation is impossible for instances with a
    feasible point and raises LPError).
    """
    if sense not in ("min", "max"):
        raise InvalidInputError("sense must be 'min' or 'max'")
    c = _objective_point_values(objective, lp.nvars)
    flip = sense == "max"
    if flip:
        c = [-v for v in c]
    # All-ones satisfies every covering/knapsack row, all-zeros every
    # packing row; either gives the engine an exactly-feasible unit-weight
    # functional for the unbounded-status check.
    unit = 0 if isinstance(lp.inst, PackingInstance) else (1 << lp.nvars) - 1
    out = minimize_point_lp(lp.rows, c, feasible_point=unit, warm_start=lp._warm)
    if out.active:
        # Binding rows barely move between objectives on the same LP, so the
        # terminal active set is the best available seed for the next solve.
        # If it has bloated past usefulness, drop it and reseed cold instead.
        cap = 6 * lp.npoints + 200
        lp._warm = out.active if len(out.active) <= cap else ()
    if out.status == "infeasible":
        raise LPError(
            "moment relaxation reported infeasible; integral points embed "
            "as feasible functionals, so this indicates corrupted input"
        )
    if out.status == "unbounded":
        return ("unbounded", None, None)
    value = -out.optimum if flip else out.optimum
    return ("optimal", value, Functional(lp.nvars, out.weights))


def check_inequality(lp: RelaxationLP, ineq: LinearInequality) -> Fraction:
    """Worst-case slack of the inequality over the relaxation.

    Minimum of a.y[x] - a0 for covering sense, a0 - a.y[x] for packing
    sense; nonnegative exactly when every point of the relaxation satisfies
    the inequality.
    """
    if ineq.nvars != lp.nvars:
        raise InvalidInputError("inequality/relaxation dimension mismatch")
    if ineq.sense == "ge":
        status, value, _ = optimize(lp, ineq.coeffs, "min")
        if status != "optimal":
            raise LPError("relaxation value unbounded below")
        return value - ineq.rhs
    status, value, _ = optimize(lp, ineq.coeffs, "max")
    if status != "optimal":
        raise LPError("relaxation value unbounded above")
    return ineq.rhs - value


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------


def lp_to_json(lp: RelaxationLP) -> dict:
    rows = []
    for ri, labels in enumerate(lp.row_labels):
        row = lp.rows.getrow(ri)
        rows.append(
            {
                "labels": [
                    {"kind": lab.kind, "member": lab.member, "index": lab.index}
                    for lab in labels
                ],
                "sense": "ge",
                "rhs": "0",
                "entries": [
                    {"point": int(z), "value": int(v)}
                    for z, v in zip(row.indices, row.data)
                ],
            }
        )
    return {
        "kind": "moment-lp",
        "n": lp.nvars,
        "points": lp.npoints,
        "members": [
            structured_to_json(p)
            if not isinstance(p, MultilinearPoly)
            else {"kind": "poly", "n": p.nvars}
            for p in lp.member_polys
        ],
        "normalization": {"sense": "eq", "rhs": "1", "coeffs": "ones"},
        "rows": rows,
    }


def lp_to_text(lp: RelaxationLP, objective: Optional[Sequence] = None) -> str:
    """Plain-text LP rendering: variables w{z} are the point weights.

    Format: an objective line "min: ...", one line per row "r{i}: ... >= 0",
    and the normalization "norm: w0 + ... + w{2^n-1} = 1", with exact
    fraction coefficients.
    """
    def term(coeff, z):
        return f"{format_fraction(Fraction(coeff))} w{z}"

    lines = []
    if objective is None:
        lines.append("min: 0")
    else:
        values = _objective_point_values(objective, lp.nvars)
        body = " + ".join(
            term(v, z) for z, v in enumerate(values) if v != 0
        )
        lines.append(f"min: {body if body else '0'}")
    for ri in range(lp.nrows):
        row = lp.rows.getrow(ri)
        body = " + ".join(term(int(v), int(z)) for z, v in zip(row.indices, row.data))
        lines.append(f"r{ri}: {body} >= 0")
    norm = " + ".join(f"w{z}" for z in range(lp.npoints))
    lines.append(f"norm: {norm} = 1")
    return "\n".join(lines) + "\n"
