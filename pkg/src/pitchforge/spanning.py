"""Delta-structured spanning families for covering systems.

For a covering system and a pitch budget pi, this module builds the family of
indicator polynomials that the pitch-bounded relaxation and the certificate
builder share.  Members come in three flavours, each anchored at a small
"core" of rows C (|C| <= pi) and its overlap set V_C (variables shared by at
least two core rows):

* First: the indicator of "all of V_C false".
* Second: an indicator fixing a nonempty proper part J of V_C true and the
  rest false, times (recursively) a member for the instance restricted by
  that fixing; the pitch budget drops by |J|, so the recursion terminates.
* Third: symmetric sums of indicators over V_C that fix a pattern I on a
  small excluded prefix P and count ones in V_C \\ P; generated for every
  prefix P with |P| <= pi since the certificate's choice of prefix depends
  on the inequality being certified, which is unknown here.

For pi <= 1 every core has an empty overlap set and the family collapses to
the single constant 1.

Members are deduplicated by their 0/1 evaluation table when the hypercube
fits under the configured limit, otherwise structurally; the first generation
of a function keeps its provenance (core, fixing, recursion path).
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Iterator, Optional

from .config import current_limits, guard
from .errors import InfeasibleRestrictionError, InvalidInputError
from .instances import CoverInstance, restrict_instance
from .polyalg import (
    DeltaStructured,
    PartialAssignment,
    SingleDelta,
    SymmetricSum,
    delta_product,
    delta_value,
    structured_to_json,
)


@dataclasses.dataclass(frozen=True)
class CoreFamily:
    """All row-index subsets of size <= pi (including the empty one)."""

    pi: int
    members: tuple[frozenset[int], ...]


def core_family(inst: CoverInstance, pi: int) -> CoreFamily:
    if pi < 0:
        raise InvalidInputError("pitch budget must be nonnegative")
    members = []
    for size in range(min(pi, inst.nrows) + 1):
        for combo in itertools.combinations(range(inst.nrows), size):
            members.append(frozenset(combo))
    return CoreFamily(pi, tuple(members))


def overlap_set(inst: CoverInstance, core: frozenset[int]) -> frozenset[int]:
    """Variables covered by at least two distinct rows of the core."""
    out: set[int] = set()
    rows = []
    for i in core:
        if not 0 <= i < inst.nrows:
            raise InvalidInputError(f"row index {i} out of range")
        rows.append(inst.rows[i])
    for a, b in itertools.combinations(rows, 2):
        out |= a & b
    return frozenset(out)


@dataclasses.dataclass(frozen=True)
class SpanMember:
    """A spanning-set member with the parameters that generated it.

    `fixed` holds J for Second members and I for Third members; `prefix` and
    `k` are Third-only; `inner` is the recursive member a Second one wraps.
    """

    poly: DeltaStructured
    tag: str  # "First" | "Second" | "Third"
    core: tuple[int, ...]
    fixed: tuple[int, ...] = ()
    prefix: tuple[int, ...] = ()
    k: int = -1
    inner: Optional["SpanMember"] = None


@dataclasses.dataclass(frozen=True)
class SpanningSet:
    instance_key: tuple
    pi: int
    members: tuple[SpanMember, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[SpanMember]:
        return iter(self.members)

    def polys(self) -> tuple[DeltaStructured, ...]:
        return tuple(m.poly for m in self.members)


def _fingerprint(poly: DeltaStructured, nvars: int, structural: bool):
    if structural:
        return poly
    fp = 0
    for z in range(1 << nvars):
        if delta_value(poly, z):
            fp |= 1 << z
    return fp


class _Builder:
    def __init__(self, nvars: int, limits):
        self.nvars = nvars
        self.limits = limits
        self.structural = nvars > limits.max_hypercube_n
        self.memo: dict[tuple, tuple[SpanMember, ...]] = {}
        self.candidates = 0

    def _tick(self) -> None:
        self.candidates += 1
        guard(self.candidates, self.limits.max_enumeration, "spanning-set candidates")

    def build(self, inst: CoverInstance, pi: int) -> tuple[SpanMember, ...]:
        key = (inst.key(), pi)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        members: list[SpanMember] = []
        seen: set = set()

        def add(member: SpanMember) -> None:
            self._tick()
            fp = _fingerprint(member.poly, self.nvars, self.structural)
            if fp == 0 or fp in seen:
                return
            seen.add(fp)
            members.append(member)

        cores = core_family(inst, pi).members
        overlaps = {core: overlap_set(inst, core) for core in cores}
        for core in cores:
            vset = overlaps[core]
            add(SpanMember(SingleDelta(vset, frozenset()), "First", tuple(sorted(core))))
        for core in cores:
            vset = overlaps[core]
            ordered = sorted(vset)
            for jsize in range(1, pi):
                for jcombo in itertools.combinations(ordered, jsize):
                    jset = frozenset(jcombo)
                    try:
                        sub = restrict_instance(
                            inst, PartialAssignment(jset, vset - jset)
                        )
                    except InfeasibleRestrictionError:
                        continue
                    head = SingleDelta(vset, jset)
                    for inner in self.build(sub, pi - jsize):
                        add(
                            SpanMember(
                                delta_product(head, inner.poly),
                                "Second",
                                tuple(sorted(core)),
                                fixed=jcombo,
                                inner=inner,
                            )
                        )
        for core in cores:
            vset = overlaps[core]
            ordered = sorted(vset)
            for psize in range(min(pi, len(ordered)) + 1):
                for pcombo in itertools.combinations(ordered, psize):
                    pset = frozenset(pcombo)
                    rest = len(vset) - psize
                    for isize in range(psize + 1):
                        for icombo in itertools.combinations(pcombo, isize):
                            for k in range(max(pi - isize, 0), rest + 1):
                                add(
                                    SpanMember(
                                        SymmetricSum(vset, frozenset(icombo), pset, k),
                                        "Third",
                                        tuple(sorted(core)),
                                        fixed=icombo,
                                        prefix=pcombo,
                                        k=k,
                                    )
                                )
        out = tuple(members)
        self.memo[key] = out
        return out


def build_spanning_set(inst: CoverInstance, pi: int, limits=None) -> SpanningSet:
    """The full deduplicated family for the given instance and pitch budget."""
    lim = limits if limits is not None else current_limits()
    guard(pi, lim.max_pitch, "pitch budget")
    builder = _Builder(inst.nvars, lim)
    return SpanningSet(inst.key(), pi, builder.build(inst, pi))


def spanning_size(inst: CoverInstance, pi: int, limits=None) -> int:
    return len(build_spanning_set(inst, pi, limits))


def _member_to_json(member: SpanMember) -> dict:
    params: dict = {}
    if member.tag == "Second":
        params["J"] = [i + 1 for i in member.fixed]
        params["inner"] = _member_to_json(member.inner)
    elif member.tag == "Third":
        params["I"] = [i + 1 for i in member.fixed]
        params["P"] = [i + 1 for i in member.prefix]
        params["k"] = member.k
    return {
        "tag": member.tag,
        "C": [i + 1 for i in member.core],
        "params": params,
        "poly": structured_to_json(member.poly),
    }


def spanning_to_json(ss: SpanningSet) -> dict:
    return {
        "pi": ss.pi,
        "size": len(ss.members),
        "members": [_member_to_json(m) for m in ss.members],
    }
