"""Exact multilinear polynomial arithmetic over the Boolean hypercube.

Everything lives in the quotient of Q[x_1..x_n] by the relations x_i^2 = x_i,
so each element has a unique square-free normal form, and two polynomials are
equal in the quotient exactly when they agree as functions on {0,1}^n.

Representation: a polynomial is a sparse map from monomials to nonzero
Fraction coefficients, where a monomial is the bitmask of its variable set
(bit i <-> x_{i+1}).  Multiplying monomials is then a bitwise OR, which makes
the idempotent reduction automatic.  The zero polynomial is the empty map.

Point order convention: the hypercube point with encoding k has x_{i+1} equal
to bit i of k, and `point_vector` lists evaluations for k = 0 .. 2^n - 1, so
the first variable is the fastest-cycling coordinate: for n = 2 the vector of
x_1 is (0, 1, 0, 1).

The module also provides compressed representations for the indicator-style
polynomials used throughout the package (products of x_i and (1 - x_j), and
symmetric sums of those), which can be evaluated at a point in O(1) bit
operations without expanding.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .config import current_limits, guard
from .errors import InvalidInputError
from .ratio import format_fraction, parse_fraction

Coeff = Union[Fraction, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mask_of(vars_iter: Iterable[int], nvars: int) -> int:
    """Bitmask of a set of 0-based variable indices, with range checking."""
    mask = 0
    for i in vars_iter:
        if not 0 <= i < nvars:
            raise InvalidInputError(f"variable index {i} out of range for n={nvars}")
        mask |= 1 << i
    return mask


def mask_to_vars(mask: int) -> tuple[int, ...]:
    """0-based variable indices of a monomial bitmask, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, including 0 and `mask` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class MultilinearPoly:
    """Immutable square-free polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[int, Coeff] | None = None):
        if nvars < 0:
            raise InvalidInputError("nvars must be nonnegative")
        clean: dict[int, Fraction] = {}
        if terms:
            top = 1 << nvars
            for mask, coeff in terms.items():
                if not 0 <= mask < top:
                    raise InvalidInputError(
                        f"monomial mask {mask} out of range for n={nvars}"
                    )
                frac = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
                if frac != 0:
                    clean[mask] = frac
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("MultilinearPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultilinearPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: Coeff) -> "MultilinearPoly":
        return cls(nvars, {0: value})

    @classmethod
    def one(cls, nvars: int) -> "MultilinearPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "MultilinearPoly":
        """The polynomial x_{index+1} (0-based index)."""
        if not 0 <= index < nvars:
            raise InvalidInputError(f"variable index {index} out of range")
        return cls(nvars, {1 << index: 1})

    @classmethod
    def monomial(cls, nvars: int, vars_iter: Iterable[int], coeff: Coeff = 1) -> "MultilinearPoly":
        return cls(nvars, {mask_of(vars_iter, nvars): coeff})

    @classmethod
    def from_point_values(cls, nvars: int, values: Sequence[Coeff]) -> "MultilinearPoly":
        """Interpolate the unique square-free polynomial with the given
        evaluations on all 2^n points (inverse of `point_vector`)."""
        size = 1 << nvars
        if len(values) != size:
            raise InvalidInputError(f"need {size} point values, got {len(values)}")
        work = [Fraction(v) for v in values]
        # Moebius transform over the subset lattice.
        for bit in range(nvars):
            step = 1 << bit
            for z in range(size):
                if z & step:
                    work[z] -= work[z ^ step]
        return cls(nvars, {m: c for m, c in enumerate(work) if c != 0})

    # -- basic protocol -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms):
            coeff = self.terms[mask]
            if mask == 0:
                parts.append(format_fraction(coeff))
                continue
            mono = "*".join(f"x{i + 1}" for i in mask_to_vars(mask))
            if coeff == 1:
                parts.append(mono)
            elif coeff == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{format_fraction(coeff)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- ring operations ----------------------------------------------------

    def _check_compatible(self, other: "MultilinearPoly") -> None:
        if self.nvars != other.nvars:
            raise InvalidInputError(
                f"nvars mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other: "MultilinearPoly | Coeff") -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            other = MultilinearPoly.constant(self.nvars, other)
        self._check_compatible(other)
        terms = dict(self.terms)
        for mask, coeff in other.terms.items():
            new = terms.get(mask, _ZERO) + coeff
            if new == 0:
                terms.pop(mask, None)
            else:
                terms[mask] = new
        out = MultilinearPoly.__new__(MultilinearPoly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", terms)
        return out

    __radd__ = __add__

    def __neg__(self) -> "MultilinearPoly":
        return self.scale(-1)

    def __sub__(self, other: "MultilinearPoly | Coeff") -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            other = MultilinearPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other: Coeff) -> "MultilinearPoly":
        return MultilinearPoly.constant(self.nvars, other) - self

    def scale(self, factor: Coeff) -> "MultilinearPoly":
        factor = Fraction(factor)
        if factor == 0:
            return MultilinearPoly.zero(self.nvars)
        out = MultilinearPoly.__new__(MultilinearPoly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", {m: c * factor for m, c in self.terms.items()})
        return out

    def __mul__(self, other: "MultilinearPoly | Coeff") -> "MultilinearPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        # Square-free reduction is the bitwise OR of the monomial masks.
        acc: dict[int, Fraction] = {}
        small, big = (self.terms, other.terms)
        if len(small) > len(big):
            small, big = big, small
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                mask = m1 | m2
                new = acc.get(mask, _ZERO) + c1 * c2
                if new == 0:
                    acc.pop(mask, None)
                else:
                    acc[mask] = new
        out = MultilinearPoly.__new__(MultilinearPoly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", acc)
        return out

    __rmul__ = __mul__

    # -- queries ------------------------------------------------------------

    def degree(self) -> int:
        """Largest monomial size (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return max(mask.bit_count() for mask in self.terms)

    def coefficient(self, vars_iter: Iterable[int]) -> Fraction:
        return self.terms.get(mask_of(vars_iter, self.nvars), _ZERO)

    def constant_term(self) -> Fraction:
        return self.terms.get(0, _ZERO)

    def support_vars(self) -> int:
        """Bitmask of variables appearing in some monomial."""
        mask = 0
        for m in self.terms:
            mask |= m
        return mask

    # -- evaluation ---------------------------------------------------------

    def eval_mask(self, point_mask: int) -> Fraction:
        """Evaluate at the 0/1 point whose 1-set is `point_mask`."""
        total = _ZERO
        for mask, coeff in self.terms.items():
            if mask & point_mask == mask:
                total += coeff
        return total

    def eval_point(self, point: Sequence[Coeff]) -> Fraction:
        """Evaluate at an arbitrary rational point (exact)."""
        if len(point) != self.nvars:
            raise InvalidInputError("point length mismatch")
        values = [Fraction(v) for v in point]
        total = _ZERO
        for mask, coeff in self.terms.items():
            prod = coeff
            for i in mask_to_vars(mask):
                prod *= values[i]
                if prod == 0:
                    break
            total += prod
        return total

    def point_vector(self, limits=None) -> tuple[Fraction, ...]:
        """Evaluations at all 2^n points, point encoding ascending (x_1 is
        the least significant bit of the encoding)."""
        lim = limits if limits is not None else current_limits()
        guard(self.nvars, lim.max_hypercube_n, "hypercube dimension")
        size = 1 << self.nvars
        work = [_ZERO] * size
        for mask, coeff in self.terms.items():
            work[mask] = coeff
        # Zeta transform: accumulate over the subset lattice.
        for bit in range(self.nvars):
            step = 1 << bit
            for z in range(size):
                if z & step:
                    work[z] += work[z ^ step]
        return tuple(work)

    # -- substitution -------------------------------------------------------

    def restrict(self, assignment: "PartialAssignment") -> "MultilinearPoly":
        """Substitute x_i = 1 on the true-set and x_j = 0 on the false-set."""
        tmask = assignment.true_mask(self.nvars)
        fmask = assignment.false_mask(self.nvars)
        acc: dict[int, Fraction] = {}
        for mask, coeff in self.terms.items():
            if mask & fmask:
                continue
            new_mask = mask & ~tmask
            new = acc.get(new_mask, _ZERO) + coeff
            if new == 0:
                acc.pop(new_mask, None)
            else:
                acc[new_mask] = new
        out = MultilinearPoly.__new__(MultilinearPoly)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", acc)
        return out


@dataclasses.dataclass(frozen=True)
class PartialAssignment:
    """A disjoint pair of variable sets fixed to 1 (`trueset`) and 0
    (`falseset`); all 0-based indices."""

    trueset: frozenset[int]
    falseset: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "trueset", frozenset(self.trueset))
        object.__setattr__(self, "falseset", frozenset(self.falseset))
        if self.trueset & self.falseset:
            raise InvalidInputError(
                f"assignment sets overlap: {sorted(self.trueset & self.falseset)}"
            )

    def true_mask(self, nvars: int) -> int:
        return mask_of(self.trueset, nvars)

    def false_mask(self, nvars: int) -> int:
        return mask_of(self.falseset, nvars)

    def fixed(self) -> frozenset[int]:
        return self.trueset | self.falseset


def delta(zset: Iterable[int], iset: Iterable[int], nvars: int) -> MultilinearPoly:
    """Indicator polynomial of the partial pattern "I true, Z \\ I false".

    delta(Z, I) = prod_{i in I} x_i * prod_{j in Z\\I} (1 - x_j); the empty
    ground set gives the constant 1.  Requires I to be a subset of Z.
    """
    imask = mask_of(iset, nvars)
    zmask = mask_of(zset, nvars)
    if imask & ~zmask:
        raise InvalidInputError("delta: I must be a subset of Z")
    offmask = zmask & ~imask
    terms: dict[int, Fraction] = {}
    for sub in submasks(offmask):
        sign = -1 if (sub.bit_count() & 1) else 1
        terms[imask | sub] = Fraction(sign)
    return MultilinearPoly(nvars, terms)


# ---------------------------------------------------------------------------
# Compressed indicator forms
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class SingleDelta:
    """delta(Z, I): indicator of "I all true and Z \\ I all false"."""

    zset: frozenset[int]
    iset: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "zset", frozenset(self.zset))
        object.__setattr__(self, "iset", frozenset(self.iset))
        if not self.iset <= self.zset:
            raise InvalidInputError("SingleDelta: I must be a subset of Z")


@dataclasses.dataclass(frozen=True)
class SymmetricSum:
    """Sum of delta(V, I | J) over all J of size k drawn from V \\ P.

    Indicator of the points whose trace on the excluded prefix P equals the
    fixed part I (which must lie inside P) and which have exactly k ones in
    V \\ P.  When k exceeds |V \\ P| the sum is empty and expands to zero.
    """

    vset: frozenset[int]
    iset: frozenset[int]
    pset: frozenset[int]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "vset", frozenset(self.vset))
        object.__setattr__(self, "iset", frozenset(self.iset))
        object.__setattr__(self, "pset", frozenset(self.pset))
        if not self.pset <= self.vset:
            raise InvalidInputError("SymmetricSum: P must be a subset of V")
        if not self.iset <= self.pset:
            raise InvalidInputError("SymmetricSum: I must be a subset of P")
        if self.k < 0:
            raise InvalidInputError("SymmetricSum: k must be nonnegative")


@dataclasses.dataclass(frozen=True)
class DeltaProduct:
    """Product of a SingleDelta with another indicator over disjoint
    relevant variables (used for restricted-instance recursion)."""

    head: SingleDelta
    tail: "DeltaStructured"

    def __post_init__(self):
        if relevant_vars(self.head) & relevant_vars(self.tail):
            raise InvalidInputError("DeltaProduct: factors share variables")


DeltaStructured = Union[SingleDelta, SymmetricSum, DeltaProduct]

TRIVIAL_DELTA = SingleDelta(frozenset(), frozenset())


def relevant_vars(d: DeltaStructured) -> frozenset[int]:
    """Variables that the indicator actually constrains."""
    if isinstance(d, SingleDelta):
        return d.zset
    if isinstance(d, SymmetricSum):
        return d.vset
    if isinstance(d, DeltaProduct):
        return relevant_vars(d.head) | relevant_vars(d.tail)
    raise InvalidInputError(f"not a structured delta: {d!r}")


def delta_product(head: SingleDelta, tail: DeltaStructured) -> DeltaStructured:
    """Build a DeltaProduct, collapsing trivial factors."""
    if not head.zset:
        return tail
    if isinstance(tail, SingleDelta) and not tail.zset:
        return head
    return DeltaProduct(head, tail)


def delta_value(d: DeltaStructured, point_mask: int) -> int:
    """Evaluate a structured indicator at a 0/1 point in O(1) bit ops."""
    if isinstance(d, SingleDelta):
        zmask = _cached_mask(d.zset)
        return 1 if point_mask & zmask == _cached_mask(d.iset) else 0
    if isinstance(d, SymmetricSum):
        pmask = _cached_mask(d.pset)
        if point_mask & pmask != _cached_mask(d.iset):
            return 0
        free = _cached_mask(d.vset) & ~pmask
        return 1 if (point_mask & free).bit_count() == d.k else 0
    if isinstance(d, DeltaProduct):
        return delta_value(d.head, point_mask) & delta_value(d.tail, point_mask)
    raise InvalidInputError(f"not a structured delta: {d!r}")


_MASK_CACHE: dict[frozenset, int] = {}


def _cached_mask(s: frozenset[int]) -> int:
    mask = _MASK_CACHE.get(s)
    if mask is None:
        mask = 0
        for i in s:
            mask |= 1 << i
        _MASK_CACHE[s] = mask
    return mask


def expand(d: DeltaStructured, nvars: int) -> MultilinearPoly:
    """Expand a structured indicator into its square-free normal form."""
    if isinstance(d, SingleDelta):
        return delta(d.zset, d.iset, nvars)
    if isinstance(d, SymmetricSum):
        total = MultilinearPoly.zero(nvars)
        pool = sorted(d.vset - d.pset)
        if d.k > len(pool):
            return total
        from itertools import combinations

        for combo in combinations(pool, d.k):
            total = total + delta(d.vset, d.iset | frozenset(combo), nvars)
        return total
    if isinstance(d, DeltaProduct):
        return expand(d.head, nvars) * expand(d.tail, nvars)
    raise InvalidInputError(f"not a structured delta: {d!r}")


def structured_point_vector(d: DeltaStructured, nvars: int, limits=None) -> tuple[int, ...]:
    """0/1 evaluation vector of a structured indicator on all 2^n points."""
    lim = limits if limits is not None else current_limits()
    guard(nvars, lim.max_hypercube_n, "hypercube dimension")
    return tuple(delta_value(d, z) for z in range(1 << nvars))


# ---------------------------------------------------------------------------
# Serialization (1-based variable indices in files)
# ---------------------------------------------------------------------------


def poly_to_json(p: MultilinearPoly) -> dict:
    terms = []
    for mask in sorted(p.terms):
        terms.append(
            {
                "vars": [i + 1 for i in mask_to_vars(mask)],
                "coef": format_fraction(p.terms[mask]),
            }
        )
    return {"n": p.nvars, "terms": terms}


def poly_from_json(data: dict) -> MultilinearPoly:
    try:
        nvars = int(data["n"])
        raw_terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad polynomial object: {data!r}") from exc
    terms: dict[int, Fraction] = {}
    for item in raw_terms:
        try:
            vars_1b = item["vars"]
            coeff = parse_fraction(item["coef"])
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"bad polynomial term: {item!r}") from exc
        mask = mask_of((int(v) - 1 for v in vars_1b), nvars)
        terms[mask] = terms.get(mask, _ZERO) + coeff
    return MultilinearPoly(nvars, terms)


def _sorted_1b(s: frozenset[int]) -> list[int]:
    return [i + 1 for i in sorted(s)]


def structured_to_json(d: DeltaStructured) -> dict:
    if isinstance(d, SingleDelta):
        return {"kind": "delta", "Z": _sorted_1b(d.zset), "I": _sorted_1b(d.iset)}
    if isinstance(d, SymmetricSum):
        return {
            "kind": "symsum",
            "V": _sorted_1b(d.vset),
            "I": _sorted_1b(d.iset),
            "P": _sorted_1b(d.pset),
            "k": d.k,
        }
    if isinstance(d, DeltaProduct):
        return {
            "kind": "product",
            "head": structured_to_json(d.head),
            "tail": structured_to_json(d.tail),
        }
    raise InvalidInputError(f"not a structured delta: {d!r}")


def _set_0b(items) -> frozenset[int]:
    return frozenset(int(v) - 1 for v in items)


def structured_from_json(data: dict) -> DeltaStructured:
    try:
        kind = data["kind"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"bad structured delta: {data!r}") from exc
    if kind == "delta":
        return SingleDelta(_set_0b(data["Z"]), _set_0b(data["I"]))
    if kind == "symsum":
        return SymmetricSum(
            _set_0b(data["V"]), _set_0b(data["I"]), _set_0b(data["P"]), int(data["k"])
        )
    if kind == "product":
        head = structured_from_json(data["head"])
        if not isinstance(head, SingleDelta):
            raise InvalidInputError("product head must be a plain delta")
        return DeltaProduct(head, structured_from_json(data["tail"]))
    raise InvalidInputError(f"unknown structured delta kind {kind!r}")
