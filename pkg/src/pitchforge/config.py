"""Size guards and run configuration.

All potentially exponential code paths (hypercube expansion, inequality
enumeration, cut enumeration) consult a `Limits` record before doing work.
The defaults are desk scale; the environment variable ``PITCHFORGE_LIMITS``
overrides individual fields with a comma-separated ``key=value`` list, e.g.::

    PITCHFORGE_LIMITS="n=18,m=14,pi=5,gen=500000"

Recognised keys: ``n`` (hypercube dimension), ``m`` (instance rows),
``pi`` (certificate pitch level), ``gen`` (enumeration ceiling),
``cg`` (CG multiplier combinations), ``interp`` (interpolation dimension).
"""

from __future__ import annotations

import dataclasses
import os

from .errors import InvalidInputError, SizeGuardError

_ENV_VAR = "PITCHFORGE_LIMITS"

_KEY_TO_FIELD = {
    "n": "max_hypercube_n",
    "m": "max_rows",
    "pi": "max_pitch",
    "gen": "max_enumeration",
    "cg": "max_cg_combos",
    "interp": "max_interpolation_n",
}


@dataclasses.dataclass(frozen=True)
class Limits:
    """Hard ceilings for the exponential-cost code paths."""

    max_hypercube_n: int = 16
    max_rows: int = 12
    max_pitch: int = 4
    max_enumeration: int = 250_000
    max_cg_combos: int = 100_000
    max_interpolation_n: int = 10

    def with_overrides(self, **kwargs: int) -> "Limits":
        return dataclasses.replace(self, **kwargs)


def parse_limits_spec(spec: str, base: Limits | None = None) -> Limits:
    """Parse a ``key=value,key=value`` override string."""
    base = base if base is not None else Limits()
    overrides: dict[str, int] = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise InvalidInputError(f"bad limits item {chunk!r} (expected key=value)")
        key, _, value = chunk.partition("=")
        key = key.strip().lower()
        if key not in _KEY_TO_FIELD:
            raise InvalidInputError(f"unknown limits key {key!r}")
        try:
            overrides[_KEY_TO_FIELD[key]] = int(value)
        except ValueError as exc:
            raise InvalidInputError(f"bad limits value {value!r} for {key!r}") from exc
    return base.with_overrides(**overrides)


def current_limits() -> Limits:
    """Default limits merged with the PITCHFORGE_LIMITS environment variable."""
    spec = os.environ.get(_ENV_VAR, "")
    if not spec:
        return Limits()
    return parse_limits_spec(spec)


def guard(value: int, ceiling: int, what: str) -> None:
    """Raise SizeGuardError when `value` exceeds `ceiling`."""
    if value > ceiling:
        raise SizeGuardError(f"{what} = {value} exceeds configured limit {ceiling}")
