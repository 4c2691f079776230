"""Covering and packing instances over 0/1 variables, with brute-force oracles.

A cover instance is a 0/1 system "A x >= 1" given by the supports of its rows;
a packing instance is "A x <= b" with nonnegative rational data; the knapsack
instance is the single symmetric row "x_1 + ... + x_n >= b" whose right-hand
side may be a non-integral rational.  All indices are 0-based in memory and
1-based in JSON files.

The brute-force helpers (`feasible_points`, `is_valid`,
`enumerate_valid_inequalities`) enumerate the hypercube and are guarded by the
configured size limits; they serve as ground truth for everything else.

Pitch of an inequality with nonnegative coefficients, support size h and the
nonzero coefficients sorted ascending:

* covering sense (a.x >= a0): the least 0 <= pi <= h whose pi cheapest
  coefficients already sum to at least a0 (pi = 0 iff a0 <= 0);
* packing sense (a.x <= a0): the greatest 0 <= pi <= h whose pi cheapest
  coefficients still fit under a0.

Rows of restricted instances remember which original row they came from
(`origins`), which certificate construction uses to report multipliers
against the rows of the instance the caller started from.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import random
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .config import current_limits, guard
from .errors import InfeasibleRestrictionError, InvalidInputError
from .polyalg import PartialAssignment, mask_of, mask_to_vars
from .ratio import format_fraction, parse_fraction

_ZERO = Fraction(0)


@dataclasses.dataclass(frozen=True)
class LinearInequality:
    """An inequality a.x >= a0 (sense "ge") or a.x <= a0 (sense "le")."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    sense: str

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.sense not in ("ge", "le"):
            raise InvalidInputError(f"sense must be 'ge' or 'le', got {self.sense!r}")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)

    def value_at_mask(self, point_mask: int) -> Fraction:
        total = _ZERO
        for i in mask_to_vars(point_mask):
            if i >= self.nvars:
                raise InvalidInputError("point mask out of range")
            total += self.coeffs[i]
        return total

    def slack_at_mask(self, point_mask: int) -> Fraction:
        """Nonnegative iff the point satisfies the inequality."""
        value = self.value_at_mask(point_mask)
        return value - self.rhs if self.sense == "ge" else self.rhs - value

    def normalized(self) -> "LinearInequality":
        """Scale so the integer content of (a, a0) is 1 (for dedup)."""
        nums = [c.numerator for c in self.coeffs] + [self.rhs.numerator]
        dens = [c.denominator for c in self.coeffs] + [self.rhs.denominator]
        lcm = math.lcm(*dens)
        ints = [n * (lcm // d) for n, d in zip(nums, dens)]
        g = math.gcd(*ints)
        scale = Fraction(lcm, g) if g else Fraction(lcm)
        return LinearInequality(
            tuple(c * scale for c in self.coeffs), self.rhs * scale, self.sense
        )


@dataclasses.dataclass(frozen=True)
class CoverInstance:
    """0/1 covering system: every row's support must contain a one."""

    nvars: int
    rows: tuple[frozenset[int], ...]
    origins: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(frozenset(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for r in rows:
            if not r:
                raise InvalidInputError("cover rows must be nonempty")
            mask_of(r, self.nvars)  # range check
        origins = self.origins if self.origins else tuple(range(len(rows)))
        if len(origins) != len(rows):
            raise InvalidInputError("origins length must match rows")
        object.__setattr__(self, "origins", tuple(origins))
        lim = current_limits()
        guard(len(rows), lim.max_rows, "cover instance rows")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(r, self.nvars) for r in self.rows)

    def constraints(self) -> tuple[LinearInequality, ...]:
        out = []
        for r in self.rows:
            coeffs = [_ZERO] * self.nvars
            for i in r:
                coeffs[i] = Fraction(1)
            out.append(LinearInequality(tuple(coeffs), Fraction(1), "ge"))
        return tuple(out)

    def key(self) -> tuple:
        """Structural fingerprint (row order matters)."""
        return (self.nvars, tuple(tuple(sorted(r)) for r in self.rows))

    def is_minimal(self) -> bool:
        for i, ri in enumerate(self.rows):
            for j, rj in enumerate(self.rows):
                if i != j and rj <= ri:
                    return False
        return True


@dataclasses.dataclass(frozen=True)
class KnapsackInstance:
    """The single symmetric covering row  x_1 + ... + x_n >= rhs."""

    nvars: int
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.nvars < 1:
            raise InvalidInputError("knapsack needs at least one variable")
        if self.rhs > self.nvars:
            raise InvalidInputError("knapsack rhs exceeds the number of variables")

    @property
    def nrows(self) -> int:
        return 1

    def constraints(self) -> tuple[LinearInequality, ...]:
        return (
            LinearInequality(tuple(Fraction(1) for _ in range(self.nvars)), self.rhs, "ge"),
        )


@dataclasses.dataclass(frozen=True)
class PackingInstance:
    """Packing system A x <= b with nonnegative rational data."""

    nvars: int
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        clean = []
        for coeffs, rhs in self.rows:
            coeffs = tuple(Fraction(c) for c in coeffs)
            rhs = Fraction(rhs)
            if len(coeffs) != self.nvars:
                raise InvalidInputError("packing row length mismatch")
            if any(c < 0 for c in coeffs) or rhs < 0:
                raise InvalidInputError("packing data must be nonnegative")
            clean.append((coeffs, rhs))
        object.__setattr__(self, "rows", tuple(clean))
        lim = current_limits()
        guard(len(clean), lim.max_rows, "packing instance rows")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def constraints(self) -> tuple[LinearInequality, ...]:
        return tuple(
            LinearInequality(coeffs, rhs, "le") for coeffs, rhs in self.rows
        )


Instance = Union[CoverInstance, KnapsackInstance, PackingInstance]


# ---------------------------------------------------------------------------
# Structure operations
# ---------------------------------------------------------------------------


def minimalize(inst: CoverInstance) -> CoverInstance:
    """Drop every row whose support contains another row's support.

    Of duplicate rows the first occurrence survives; surviving rows keep
    their origin labels.
    """
    keep: list[int] = []
    for i, ri in enumerate(inst.rows):
        dominated = False
        for j, rj in enumerate(inst.rows):
            if i == j:
                continue
            if rj < ri or (rj == ri and j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return CoverInstance(
        inst.nvars,
        tuple(inst.rows[i] for i in keep),
        tuple(inst.origins[i] for i in keep),
    )


def restrict_instance(inst: CoverInstance, assignment: PartialAssignment) -> CoverInstance:
    """Fix variables per the assignment and simplify.

    Rows meeting the true-set are satisfied and dropped; false-set variables
    disappear from the remaining supports.  A row whose support empties out
    witnesses that the restricted system has no feasible 0/1 point, which is
    raised as InfeasibleRestrictionError.  The result is minimalized and its
    rows' `origins` refer to rows of `inst`.
    """
    tset = assignment.trueset
    fset = assignment.falseset
    for i in tset | fset:
        if not 0 <= i < inst.nvars:
            raise InvalidInputError(f"assignment index {i} out of range")
    rows: list[frozenset[int]] = []
    origins: list[int] = []
    for row, origin in zip(inst.rows, inst.origins):
        if row & tset:
            continue
        reduced = row - fset
        if not reduced:
            raise InfeasibleRestrictionError(
                f"row {sorted(row)} emptied by fixing {sorted(fset)} to zero"
            )
        rows.append(reduced)
        origins.append(origin)
    return minimalize(CoverInstance(inst.nvars, tuple(rows), tuple(origins)))


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------


def feasible_masks(inst: Instance, limits=None) -> tuple[int, ...]:
    """Encodings of all feasible 0/1 points, ascending."""
    lim = limits if limits is not None else current_limits()
    guard(inst.nvars, lim.max_hypercube_n, "hypercube dimension")
    cons = inst.constraints()
    out = []
    for z in range(1 << inst.nvars):
        if all(c.slack_at_mask(z) >= 0 for c in cons):
            out.append(z)
    return tuple(out)


def feasible_points(inst: Instance, limits=None) -> tuple[tuple[int, ...], ...]:
    """All feasible 0/1 points as vectors, in encoding order (x_1 is the
    least significant bit of the encoding)."""
    n = inst.nvars
    return tuple(
        tuple((z >> i) & 1 for i in range(n)) for z in feasible_masks(inst, limits)
    )


def is_valid(ineq: LinearInequality, inst: Instance, limits=None) -> bool:
    """True iff every feasible 0/1 point satisfies the inequality."""
    if ineq.nvars != inst.nvars:
        raise InvalidInputError("inequality/instance dimension mismatch")
    return all(ineq.slack_at_mask(z) >= 0 for z in feasible_masks(inst, limits))


def pitch(ineq: LinearInequality) -> int:
    """Pitch of an inequality with nonnegative coefficients (see module doc)."""
    if any(c < 0 for c in ineq.coeffs):
        raise InvalidInputError("pitch is defined for nonnegative coefficients")
    ordered = sorted(c for c in ineq.coeffs if c != 0)
    if ineq.sense == "ge":
        if ineq.rhs <= 0:
            return 0
        total = _ZERO
        for count, c in enumerate(ordered, start=1):
            total += c
            if total >= ineq.rhs:
                return count
        raise InvalidInputError(
            "covering inequality is violated even at the all-ones point"
        )
    # packing
    if ineq.rhs < 0:
        raise InvalidInputError(
            "packing inequality is violated even at the all-zeros point"
        )
    total = _ZERO
    count = 0
    for c in ordered:
        if total + c > ineq.rhs:
            break
        total += c
        count += 1
    return count


def enumerate_valid_inequalities(
    inst: Instance,
    max_pitch: int,
    coef_bound: int = 2,
    limits=None,
) -> tuple[LinearInequality, ...]:
    """All valid inequalities on an integer grid, up to positive scaling.

    Coefficients range over {0..coef_bound}^n and the right-hand side over
    {0..n*coef_bound}; the sense matches the instance kind (>= for covering
    systems, <= for packing).  Results are gcd-normalized, deduplicated, and
    filtered to pitch <= max_pitch, in deterministic grid order.
    """
    lim = limits if limits is not None else current_limits()
    n = inst.nvars
    sense = "le" if isinstance(inst, PackingInstance) else "ge"
    candidates = (coef_bound + 1) ** n * (n * coef_bound + 1)
    guard(candidates, lim.max_enumeration, "inequality enumeration")
    masks = feasible_masks(inst, lim)
    if not masks:
        raise InvalidInputError("instance has no feasible point")
    out: list[LinearInequality] = []
    seen: set[tuple] = set()
    for coeffs in itertools.product(range(coef_bound + 1), repeat=n):
        values = [sum(coeffs[i] for i in mask_to_vars(z)) for z in masks]
        bound = min(values) if sense == "ge" else max(values)
        for rhs in range(n * coef_bound + 1):
            if sense == "ge" and rhs > bound:
                break
            if sense == "le" and rhs < bound:
                continue
            ineq = LinearInequality(
                tuple(Fraction(c) for c in coeffs), Fraction(rhs), sense
            )
            if pitch(ineq) > max_pitch:
                continue
            norm = ineq.normalized()
            key = (norm.coeffs, norm.rhs, norm.sense)
            if key in seen:
                continue
            seen.add(key)
            out.append(norm)
    return tuple(out)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_full_circulant(n: int) -> CoverInstance:
    """Row i is the complement of {i}: n rows, each of size n-1 (n >= 3)."""
    if n < 3:
        raise InvalidInputError("full circulant needs n >= 3")
    rows = tuple(frozenset(range(n)) - {i} for i in range(n))
    return CoverInstance(n, rows)


def gen_symmetric_knapsack(n: int, rhs: Fraction | str) -> KnapsackInstance:
    return KnapsackInstance(n, parse_fraction(rhs))


def gen_random_cover(n: int, m: int, density: float = 0.5, seed: int = 0) -> CoverInstance:
    """Seeded random minimal cover instance with at most m rows.

    Rows are sampled with the given density and kept only when incomparable
    with the rows already accepted, so the result is minimal by construction.
    """
    if n < 1 or m < 1:
        raise InvalidInputError("need n >= 1 and m >= 1")
    if not 0 < density <= 1:
        raise InvalidInputError("density must be in (0, 1]")
    rng = random.Random(seed)
    rows: list[frozenset[int]] = []
    attempts = 0
    while len(rows) < m and attempts < 200 * m:
        attempts += 1
        row = frozenset(i for i in range(n) if rng.random() < density)
        if not row:
            continue
        if any(r <= row or row <= r for r in rows):
            continue
        rows.append(row)
    if not rows:
        rows.append(frozenset(range(n)))
    return CoverInstance(n, tuple(rows))


def gen_random_packing(
    n: int, m: int, coef_bound: int = 3, seed: int = 0
) -> PackingInstance:
    """Seeded random packing instance with small integer data."""
    if n < 1 or m < 1:
        raise InvalidInputError("need n >= 1 and m >= 1")
    rng = random.Random(seed)
    rows = []
    for _ in range(m):
        while True:
            coeffs = tuple(Fraction(rng.randint(0, coef_bound)) for _ in range(n))
            if any(c > 0 for c in coeffs):
                break
        total = sum(coeffs)
        rhs = Fraction(rng.randint(1, max(1, int(total) - 1)))
        rows.append((coeffs, rhs))
    return PackingInstance(n, tuple(rows))


# ---------------------------------------------------------------------------
# Serialization (1-based indices in files)
# ---------------------------------------------------------------------------


def instance_to_json(inst: Instance) -> dict:
    if isinstance(inst, CoverInstance):
        return {
            "kind": "cover",
            "n": inst.nvars,
            "rows": [[i + 1 for i in sorted(r)] for r in inst.rows],
        }
    if isinstance(inst, KnapsackInstance):
        return {"kind": "knapsack", "n": inst.nvars, "b": format_fraction(inst.rhs)}
    if isinstance(inst, PackingInstance):
        return {
            "kind": "packing",
            "n": inst.nvars,
            "rows": [
                {
                    "a": [format_fraction(c) for c in coeffs],
                    "b": format_fraction(rhs),
                }
                for coeffs, rhs in inst.rows
            ],
        }
    raise InvalidInputError(f"not an instance: {inst!r}")


def instance_from_json(data: dict) -> Instance:
    try:
        kind = data["kind"]
        n = int(data["n"])
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad instance object: {data!r}") from exc
    if kind == "cover":
        rows = tuple(
            frozenset(int(i) - 1 for i in row) for row in data.get("rows", [])
        )
        return CoverInstance(n, rows)
    if kind == "knapsack":
        return KnapsackInstance(n, parse_fraction(data["b"]))
    if kind == "packing":
        rows = tuple(
            (
                tuple(parse_fraction(c) for c in row["a"]),
                parse_fraction(row["b"]),
            )
            for row in data.get("rows", [])
        )
        return PackingInstance(n, rows)
    raise InvalidInputError(f"unknown instance kind {kind!r}")


def inequality_to_json(ineq: LinearInequality) -> dict:
    return {
        "a": [format_fraction(c) for c in ineq.coeffs],
        "a0": format_fraction(ineq.rhs),
        "sense": ineq.sense,
    }


def inequality_from_json(data: dict) -> LinearInequality:
    try:
        coeffs = tuple(parse_fraction(c) for c in data["a"])
        rhs = parse_fraction(data["a0"])
        sense = data.get("sense", "ge")
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad inequality object: {data!r}") from exc
    return LinearInequality(coeffs, rhs, sense)
