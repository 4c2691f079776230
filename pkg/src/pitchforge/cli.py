"""Command-line front end.

Subcommands: gen, relax, certify, verify, compare, closure, spanning.
Instances are given either as a path to an instance JSON file or as a
generator spec (``fc:6``, ``symknap:5:3/2``, ``random:6:5:0.5``,
``randompack:5:3``); all rational values in input and output are fraction
strings.  Exit codes: 0 success/verified, 1 verification failure, 2 invalid
input, 3 size guard tripped.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .certify import (
    build_cover_certificate,
    certificate_from_json,
    certificate_residual,
    certificate_to_json,
    full_interpolation_certificate,
    packing_certificate,
    symmetric_knapsack_certificate,
    verify_certificate,
)
from .cgtools import closure_experiment, closure_report_to_json
from .errors import (
    CertificateError,
    InfeasibleRestrictionError,
    InvalidInputError,
    LPError,
    PitchforgeError,
    SizeGuardError,
    VerificationError,
)
from .instances import (
    CoverInstance,
    KnapsackInstance,
    LinearInequality,
    PackingInstance,
    feasible_masks,
    gen_full_circulant,
    gen_random_cover,
    gen_random_packing,
    gen_symmetric_knapsack,
    inequality_from_json,
    instance_from_json,
    instance_to_json,
    pitch,
)
from .polyalg import MultilinearPoly, poly_from_json
from .ratio import format_fraction, parse_fraction
from .relax import (
    build_sa_lp,
    build_standard_sa,
    check_inequality,
    lp_to_json,
    lp_to_text,
    optimize,
)
from .spanning import build_spanning_set, spanning_to_json

_ENV_VAR = "PITCHFORGE_LIMITS"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Validated shared parameters of one CLI invocation."""

    command: str
    instance: Optional[str] = None
    pi: Optional[int] = None
    degree: Optional[int] = None
    t: int = 1
    epsilon: Fraction = Fraction(1, 2)
    out: Optional[str] = None
    fmt: str = "table"
    seed: int = 0
    limit_n: Optional[int] = None

    def __post_init__(self):
        if self.pi is not None and self.pi < 0:
            raise InvalidInputError("--pi must be nonnegative")
        if self.degree is not None and self.degree < 0:
            raise InvalidInputError("--degree must be nonnegative")
        if self.t < 0:
            raise InvalidInputError("--t must be nonnegative")
        if self.epsilon <= 0:
            raise InvalidInputError("--epsilon must be positive")
        if self.fmt not in ("json", "table"):
            raise InvalidInputError("--format must be json or table")
        if self.limit_n is not None and self.limit_n < 1:
            raise InvalidInputError("--limit-n must be positive")


# ---------------------------------------------------------------------------
# Input plumbing
# ---------------------------------------------------------------------------


def _generate(spec: str, seed: int):
    parts = spec.split(":")
    kind = parts[0]
    try:
        if kind == "fc":
            (n,) = parts[1:]
            return gen_full_circulant(int(n))
        if kind == "symknap":
            n, b = parts[1:]
            return gen_symmetric_knapsack(int(n), b)
        if kind == "random":
            n, m, density = parts[1:]
            return gen_random_cover(int(n), int(m), float(density), seed)
        if kind == "randompack":
            if len(parts) == 3:
                n, m = parts[1:]
                return gen_random_packing(int(n), int(m), seed=seed)
            n, m, bound = parts[1:]
            return gen_random_packing(int(n), int(m), int(bound), seed)
    except (ValueError, IndexError) as exc:
        raise InvalidInputError(f"bad generator spec {spec!r}") from exc
    raise InvalidInputError(
        f"unknown generator {kind!r} (use fc:n, symknap:n:b, "
        f"random:n:m:density, randompack:n:m[:bound])"
    )


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path!r}: {exc}") from exc
    except ValueError as exc:
        raise InvalidInputError(f"{path!r} is not valid JSON: {exc}") from exc


def _load_instance(text: str, seed: int):
    if os.path.exists(text):
        return instance_from_json(_read_json(text))
    if ":" in text:
        return _generate(text, seed)
    raise InvalidInputError(
        f"{text!r} is neither an existing file nor a generator spec"
    )


def _parse_inequality(spec: str, nvars: int) -> LinearInequality:
    """Parse '1,1,1,1>=2' (or '<=') with fraction entries."""
    for token, sense in ((">=", "ge"), ("<=", "le")):
        if token in spec:
            left, _, right = spec.partition(token)
            coeffs = tuple(parse_fraction(p) for p in left.split(","))
            if len(coeffs) != nvars:
                raise InvalidInputError(
                    f"inequality has {len(coeffs)} coefficients, "
                    f"instance has {nvars} variables"
                )
            return LinearInequality(coeffs, parse_fraction(right), sense)
    raise InvalidInputError(f"no >= or <= in inequality {spec!r}")


def _parse_objective(
    spec: Optional[str], nvars: int, default_sense: str = "min"
) -> tuple[str, tuple[Fraction, ...]]:
    if spec is None:
        return default_sense, tuple(Fraction(1) for _ in range(nvars))
    sense = default_sense
    body = spec
    for prefix in ("min", "max"):
        if spec.startswith(prefix + ":"):
            sense, body = prefix, spec[len(prefix) + 1 :]
            break
    coeffs = tuple(parse_fraction(p) for p in body.split(","))
    if len(coeffs) != nvars:
        raise InvalidInputError(
            f"objective has {len(coeffs)} entries, instance has {nvars} variables"
        )
    return sense, coeffs


def _load_poly(spec: str) -> MultilinearPoly:
    if spec.lstrip().startswith("{"):
        return poly_from_json(json.loads(spec))
    if not os.path.exists(spec):
        raise InvalidInputError(f"polynomial file {spec!r} not found")
    return poly_from_json(_read_json(spec))


def _emit(payload, out: Optional[str]) -> None:
    text = (
        json.dumps(payload, indent=2) + "\n"
        if isinstance(payload, (dict, list))
        else str(payload).rstrip("\n") + "\n"
    )
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mask_point(mask: int, nvars: int) -> list[int]:
    return [(mask >> j) & 1 for j in range(nvars)]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(cfg: RunConfig, args) -> int:
    inst = _generate(args.spec, cfg.seed)
    _emit(instance_to_json(inst), cfg.out)
    return 0


def _relax_lp(inst, cfg: RunConfig):
    if (cfg.pi is None) == (cfg.degree is None):
        raise InvalidInputError("give exactly one of --pi or --degree")
    if cfg.pi is not None:
        family = build_spanning_set(inst, cfg.pi)
        return build_sa_lp(inst, family), f"pitch:{cfg.pi}", len(family)
    lp = build_standard_sa(inst, cfg.degree)
    return lp, f"degree:{cfg.degree}", len(lp.member_polys)


def cmd_relax(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    lp, mode, nmembers = _relax_lp(inst, cfg)
    sense, coeffs = _parse_objective(args.objective, inst.nvars)
    status, optimum, func = optimize(lp, coeffs, sense)
    rank = lp.basis.rank if lp.npoints <= 1024 else None
    report = {
        "kind": "relax-report",
        "instance": instance_to_json(inst),
        "mode": mode,
        "sense": sense,
        "objective": [format_fraction(v) for v in coeffs],
        "status": status,
        "optimum": format_fraction(optimum) if optimum is not None else None,
        "point": [format_fraction(v) for v in func.projected_point()]
        if func is not None
        else None,
        "rows": lp.nrows,
        "points": lp.npoints,
        "members": nmembers,
        "span_rank": rank,
    }
    if cfg.fmt == "json":
        _emit(report, cfg.out)
    else:
        lines = [
            f"relaxation {mode} on {inst.nvars} variables",
            f"  members {nmembers}, rows {lp.nrows}, points {lp.npoints}"
            + (f", span rank {rank}" if rank is not None else ""),
            f"  {sense} objective -> {report['optimum']}"
            if status == "optimal"
            else f"  {sense} objective -> {status}",
        ]
        if report["point"] is not None:
            lines.append("  projected point: (" + ", ".join(report["point"]) + ")")
        _emit("\n".join(lines), cfg.out)
    return 0


def _witness_invalid(ineq: LinearInequality, inst) -> Optional[int]:
    for z in feasible_masks(inst):
        if ineq.slack_at_mask(z) < 0:
            return z
    return None


def cmd_certify(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    mode = args.mode
    if mode == "cover":
        if args.ineq is None:
            raise InvalidInputError("cover mode needs --ineq")
        ineq = _parse_inequality(args.ineq, inst.nvars)
        if not isinstance(inst, (CoverInstance, KnapsackInstance)):
            raise InvalidInputError("cover mode needs a covering-style instance")
        bad = _witness_invalid(ineq, inst)
        if bad is not None:
            raise InvalidInputError(
                f"inequality fails at the feasible point {_mask_point(bad, inst.nvars)}"
            )
        level = cfg.pi if cfg.pi is not None else pitch(ineq)
        cert = build_cover_certificate(inst, ineq, level)
    elif mode == "packing":
        if args.ineq is None:
            raise InvalidInputError("packing mode needs --ineq")
        if not isinstance(inst, PackingInstance):
            raise InvalidInputError("packing mode needs a packing instance")
        ineq = _parse_inequality(args.ineq, inst.nvars)
        bad = _witness_invalid(ineq, inst)
        if bad is not None:
            raise InvalidInputError(
                f"inequality fails at the feasible point {_mask_point(bad, inst.nvars)}"
            )
        cert = packing_certificate(inst, ineq)
    elif mode == "symknap":
        if not isinstance(inst, KnapsackInstance):
            raise InvalidInputError("symknap mode needs a symknap:n:b instance")
        cert = symmetric_knapsack_certificate(inst.nvars, inst.rhs)
    elif mode == "interpolate":
        if args.poly is None:
            raise InvalidInputError("interpolate mode needs --poly")
        poly = _load_poly(args.poly)
        cert = full_interpolation_certificate(inst, poly)
    else:
        raise InvalidInputError(f"unknown certify mode {mode!r}")
    ok = verify_certificate(cert, inst)
    _emit(certificate_to_json(cert), cfg.out)
    if not ok:
        residual, problems = certificate_residual(cert, inst)
        print(
            "verification FAILED: "
            + "; ".join(problems or [f"residual {residual!r}"]),
            file=sys.stderr,
        )
        return 1
    print(f"verified: {len(cert.terms)} terms", file=sys.stderr)
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    cert = certificate_from_json(_read_json(args.certificate))
    residual, problems = certificate_residual(cert, inst)
    if problems or residual:
        for p in problems:
            print(f"problem: {p}", file=sys.stderr)
        if residual:
            print(f"residual: {residual!r}", file=sys.stderr)
        print("NOT verified", file=sys.stderr)
        return 1
    print(f"verified: {len(cert.terms)} terms", file=sys.stderr)
    return 0


def cmd_compare(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    sense, coeffs = _parse_objective(args.objective, inst.nvars)
    degrees = (
        [int(p) for p in args.degrees.split(",")] if args.degrees else [0, 1]
    )
    rows: list[tuple[str, str]] = []

    def record(name: str, lp):
        status, value, _ = optimize(lp, coeffs, sense)
        rows.append(
            (name, format_fraction(value) if status == "optimal" else status)
        )

    for d in degrees:
        record(f"sa-degree-{d}", build_standard_sa(inst, d))
    if cfg.pi is not None:
        family = build_spanning_set(inst, cfg.pi)
        record(f"sa-pitch-{cfg.pi}", build_sa_lp(inst, family))
    best = None
    for z in feasible_masks(inst):
        value = sum(
            (coeffs[j] for j in range(inst.nvars) if z >> j & 1), Fraction(0)
        )
        if best is None or (value < best if sense == "min" else value > best):
            best = value
    rows.append(
        ("integer-hull", format_fraction(best) if best is not None else "infeasible")
    )
    if cfg.fmt == "json":
        _emit(
            {
                "kind": "compare-report",
                "instance": instance_to_json(inst),
                "sense": sense,
                "objective": [format_fraction(v) for v in coeffs],
                "optima": {name: value for name, value in rows},
            },
            cfg.out,
        )
    else:
        width = max(len(name) for name, _ in rows)
        lines = [f"{name.ljust(width)}  {value}" for name, value in rows]
        _emit("\n".join(lines), cfg.out)
    return 0


def cmd_closure(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    if not isinstance(inst, PackingInstance):
        raise InvalidInputError("closure experiments need a packing instance")
    _, coeffs = _parse_objective(args.objective, inst.nvars, "max")
    report = closure_experiment(
        inst, coeffs, cfg.t, cfg.epsilon, cfg.pi, args.denom
    )
    if cfg.fmt == "json":
        _emit(closure_report_to_json(report), cfg.out)
        return 0
    lines = [
        f"closure experiment: t={report.t} epsilon={format_fraction(report.epsilon)}"
        f" -> d={report.d}",
        f"  plain LP optimum   {format_fraction(report.lp_opt)}",
        f"  pitch-bounded opt  {format_fraction(report.opt_d)}",
        "  scaled point       ("
        + ", ".join(format_fraction(v) for v in report.scaled_point)
        + ")",
        f"  cuts checked       {len(report.cuts)}"
        f" ({'all satisfied' if report.all_satisfied() else 'VIOLATIONS'})",
    ]
    for cg, ok in report.cuts:
        coeff_txt = ",".join(format_fraction(v) for v in cg.cut.coeffs)
        op = ">=" if cg.cut.sense == "ge" else "<="
        lines.append(
            f"    [{coeff_txt}] {op} {format_fraction(cg.cut.rhs)}"
            f"  {'ok' if ok else 'VIOLATED'}"
        )
    _emit("\n".join(lines), cfg.out)
    return 0


def cmd_spanning(cfg: RunConfig, args) -> int:
    inst = _load_instance(cfg.instance, cfg.seed)
    if cfg.pi is None:
        raise InvalidInputError("spanning needs --pi")
    ss = build_spanning_set(inst, cfg.pi)
    if cfg.fmt == "json":
        _emit(spanning_to_json(ss), cfg.out)
        return 0
    data = spanning_to_json(ss)
    lines = [f"spanning set at pitch {cfg.pi}: {data['size']} members"]
    for member in data["members"]:
        core = ",".join(str(i) for i in member["C"])
        lines.append(f"  {member['tag']:<6} C={{{core}}} {member['params']}")
    _emit("\n".join(lines), cfg.out)
    return 0


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pitchforge",
        description="Exact pitch-bounded relaxations, certificates and cuts "
        "for small 0/1 covering and packing systems.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("instance", help="instance JSON path or generator spec")
        p.add_argument("--pi", type=int, default=None)
        p.add_argument("--degree", type=int, default=None)
        p.add_argument("--objective", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", default="table", dest="fmt")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--limit-n", type=int, default=None, dest="limit_n")

    p = sub.add_parser("gen", help="generate an instance JSON")
    p.add_argument("spec", help="fc:n | symknap:n:b | random:n:m:density | randompack:n:m[:bound]")
    common(p, instance=False)

    p = sub.add_parser("relax", help="build and solve a relaxation LP")
    common(p)

    p = sub.add_parser("certify", help="build + verify a certificate")
    common(p)
    p.add_argument("--mode", required=True,
                   choices=("cover", "packing", "symknap", "interpolate"))
    p.add_argument("--ineq", default=None, help="e.g. '1,1,1,1>=2'")
    p.add_argument("--poly", default=None, help="polynomial JSON (path or inline)")

    p = sub.add_parser("verify", help="verify a certificate file")
    common(p)
    p.add_argument("certificate", help="certificate JSON path")

    p = sub.add_parser("compare", help="tabulate relaxation optima")
    common(p)
    p.add_argument("--degrees", default=None, help="comma list, default 0,1")

    p = sub.add_parser("closure", help="run the scaling/closure experiment")
    common(p)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--denom", type=int, default=2)

    p = sub.add_parser("spanning", help="dump the spanning family")
    common(p)
    return ap


_HANDLERS = {
    "gen": cmd_gen,
    "relax": cmd_relax,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "compare": cmd_compare,
    "closure": cmd_closure,
    "spanning": cmd_spanning,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            instance=getattr(args, "instance", None),
            pi=args.pi,
            degree=args.degree,
            t=getattr(args, "t", 1),
            epsilon=parse_fraction(str(getattr(args, "epsilon", "1/2"))),
            out=args.out,
            fmt=args.fmt,
            seed=args.seed,
            limit_n=args.limit_n,
        )
        # scope the tightened limit to this invocation; main() is callable
        # in-process and must not leave the environment dirty
        previous = os.environ.get(_ENV_VAR)
        if cfg.limit_n is not None:
            os.environ[_ENV_VAR] = (
                f"{previous},n={cfg.limit_n}" if previous else f"n={cfg.limit_n}"
            )
        try:
            return _HANDLERS[args.command](cfg, args)
        finally:
            if cfg.limit_n is not None:
                if previous is None:
                    os.environ.pop(_ENV_VAR, None)
                else:
                    os.environ[_ENV_VAR] = previous
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 3
    except (
        InvalidInputError,
        CertificateError,
        InfeasibleRestrictionError,
        LPError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PitchforgeError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
