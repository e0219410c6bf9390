"""Command-line front end: instance ingestion, computation, verification, plots.

Exit codes: 0 all checks passed, 1 a verification exceeded its tolerance,
2 input or usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .elemop import KTupleOperator, russo_dye_norm, shifted_norm
from .fov import field_of_values
from .io import (
    InstanceFormatError,
    dumps_result,
    instance_to_dict,
    parse_instance,
    region_to_dict,
    result_to_csv,
    write_text_atomic,
)
from .orbit import banach_region, default_s_schedule, orbit_region
from .region import RegionEmptyError
from .svg import render_svg
from .unitary_opt import OptConfig
from .verify import (
    DEFAULT_CFG,
    DEFAULT_DIRECTIONS,
    random_batch,
    verify_derivation,
    verify_main,
    verify_mult_projection,
    hermitian_check,
)

_WITNESS_CAP = 512


def _common_options(sub, directions: int, restarts: int):
    sub.add_argument("--directions", type=int, default=directions,
                     help=f"support directions (default {directions})")
    sub.add_argument("--restarts", type=int, default=restarts,
                     help=f"Haar restarts per optimization (default {restarts})")
    sub.add_argument("--haar-samples", type=int, default=64,
                     help="Haar samples for the witness cloud (default 64)")
    sub.add_argument("--smax-factor", type=float, default=64.0,
                     help="largest shift as a multiple of scale (default 64)")
    sub.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    sub.add_argument("--tol", type=float, default=None,
                     help="override the verification tolerance")
    sub.add_argument("--threads", type=int, default=1,
                     help="instance-level worker threads (default 1)")
    sub.add_argument("--out", type=str, default=None, help="output file path")
    sub.add_argument("--format", choices=("json", "csv", "svg"), default="json",
                     help="output format (default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elemrange",
        description="Numerical range of elementary operators on M_n, two ways.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fov", help="field of values of the instance's first a-matrix")
    p.add_argument("instance", help="instance file")
    _common_options(p, 720, 16)

    p = subs.add_parser("norm", help="operator norm over the unitary group")
    p.add_argument("instance", help="instance file")
    p.add_argument("--z", type=str, default=None,
                   help="complex shift RE,IM: compute |R - z Id| instead")
    _common_options(p, 720, 16)

    p = subs.add_parser("range", help="numerical-range regions of an instance")
    p.add_argument("instance", help="instance file")
    p.add_argument("--side", choices=("lhs", "rhs", "both"), default="both",
                   help="operator side (lhs), orbit side (rhs), or both")
    _common_options(p, 720, 16)

    p = subs.add_parser("verify", help="verify the orbit formula on a batch")
    p.add_argument("instances", nargs="*", help="instance files (default: random batch)")
    p.add_argument("--count", type=int, default=20, help="random instances (default 20)")
    p.add_argument("--dim", type=int, default=2, help="matrix dimension (default 2)")
    p.add_argument("--tuples", type=int, default=2, help="tuple length k (default 2)")
    _common_options(p, DEFAULT_DIRECTIONS, DEFAULT_CFG.restarts)

    p = subs.add_parser("derivation",
                        help="check x -> Ax - xB against W(A) - W(B)")
    p.add_argument("instances", nargs="*",
                   help="instance files encoding a derivation (default: random batch)")
    p.add_argument("--count", type=int, default=10, help="random pairs (default 10)")
    p.add_argument("--dim", type=int, default=2, help="matrix dimension (default 2)")
    _common_options(p, DEFAULT_DIRECTIONS, DEFAULT_CFG.restarts)

    p = subs.add_parser("projection",
                        help="two-sided multiplication by an orthogonal projection")
    p.add_argument("instances", nargs="*",
                   help="instance files with a_1 = b_1 = p (default: diag projection)")
    p.add_argument("--dim", type=int, default=2, help="matrix dimension (default 2)")
    p.add_argument("--rank", type=int, default=1, help="projection rank (default 1)")
    _common_options(p, DEFAULT_DIRECTIONS, DEFAULT_CFG.restarts)

    return parser


def _config(args) -> OptConfig:
    return OptConfig(restarts=args.restarts, seed=args.seed)


def _config_echo(args) -> dict:
    # The output path is not part of the computation configuration; leaving
    # it out keeps result files for identical runs byte-identical.
    echo = {
        key: val
        for key, val in vars(args).items()
        if key not in ("command", "instance", "instances", "out") and val is not None
    }
    echo["command"] = args.command
    return echo


def _labelled(path: str) -> KTupleOperator:
    r = parse_instance(path)
    if r.label is None:
        base = os.path.splitext(os.path.basename(path))[0]
        return KTupleOperator(r.a, r.b, label=base, seed=r.seed)
    return r


def _witness_pairs(samples) -> list:
    if samples is None:
        return []
    pts = np.asarray(samples)
    stride = max(1, int(np.ceil(pts.size / _WITNESS_CAP)))
    pts = pts[::stride]
    return [[float(p.real), float(p.imag)] for p in pts]


def _estimate_fragment(inst: dict, side: str, est):
    inst.setdefault("regions", {})[side] = region_to_dict(est.region)
    spreads = [float(s) for s in est.restart_spreads]
    if side == "rhs":
        inst["witnesses"] = _witness_pairs(est.samples)
        inst.setdefault("restart_spreads", spreads)
    if est.residuals is not None:
        inst["residuals"] = [float(x) for x in est.residuals]
        prior = inst.get("restart_spreads")
        if prior:
            inst["restart_spreads"] = [max(a, b) for a, b in zip(prior, spreads)]
        else:
            inst["restart_spreads"] = spreads


def _report_fragment(inst: dict, report):
    inst["checks"] = [c.to_dict() for c in report.checks]
    inst["diagnostics"] = report.diagnostics
    for side in ("lhs", "rhs"):
        est = report.artifacts.get(side)
        if est is not None:
            _estimate_fragment(inst, side, est)
    oracle = report.artifacts.get("oracle")
    if oracle is not None:
        inst.setdefault("regions", {})["oracle"] = region_to_dict(oracle)


def _result_shell(args) -> dict:
    return {
        "tool": {"name": "elemrange", "version": __version__},
        "command": args.command,
        "config": _config_echo(args),
        "instances": [],
    }


def _emit(result: dict, args) -> None:
    if args.out is None:
        if args.format == "json":
            print(dumps_result(result))
        elif args.format == "csv":
            sys.stdout.write(result_to_csv(result))
        else:
            raise ValueError("--format svg requires --out")
        return
    if args.format == "json":
        write_text_atomic(args.out, dumps_result(result) + "\n")
    elif args.format == "csv":
        write_text_atomic(args.out, result_to_csv(result))
    else:
        render_svg(result, args.out)
    print(f"wrote {args.out}")


def _print_checks(result: dict) -> int:
    failures = 0
    for inst in result["instances"]:
        for chk in inst.get("checks", []):
            status = "PASS" if chk["passed"] else "FAIL"
            if not chk["passed"]:
                failures += 1
            print(
                f"{inst['label']}: {chk['name']} "
                f"discrepancy={chk['discrepancy']:.3e} "
                f"tolerance={chk['tolerance']:.3e} {status}"
            )
    if failures:
        print(f"{failures} check(s) FAILED")
        return 1
    return 0


def _cmd_fov(args) -> int:
    r = _labelled(args.instance)
    region = field_of_values(r.a[0], args.directions)
    result = _result_shell(args)
    result["instances"].append(
        {
            "label": r.label,
            "instance": instance_to_dict(r),
            "regions": {"fov": region_to_dict(region)},
        }
    )
    _emit(result, args)
    return 0


def _cmd_norm(args) -> int:
    r = _labelled(args.instance)
    cfg = _config(args)
    if args.z is not None:
        parts = [float(x) for x in args.z.split(",")]
        z = complex(parts[0], parts[1] if len(parts) > 1 else 0.0)
        rep = shifted_norm(r, z, cfg)
    else:
        z = 0.0
        rep = russo_dye_norm(r, cfg)
    result = _result_shell(args)
    result["instances"].append(
        {
            "label": r.label,
            "instance": instance_to_dict(r),
            "diagnostics": {
                "value": rep.value,
                "z": [z.real, z.imag] if isinstance(z, complex) else [z, 0.0],
                "iterations": rep.iterations,
                "converged": rep.converged,
                "restart_spread": rep.spread,
                "start_values": [float(v) for v in rep.start_values],
            },
        }
    )
    _emit(result, args)
    print(f"{r.label}: norm value {rep.value!r} (converged={rep.converged})")
    return 0


def _cmd_range(args) -> int:
    r = _labelled(args.instance)
    cfg = _config(args)
    inst: dict = {"label": r.label, "instance": instance_to_dict(r)}
    rhs = None
    if args.side in ("rhs", "both"):
        rhs = orbit_region(r, args.directions, cfg, n_haar=args.haar_samples)
        _estimate_fragment(inst, "rhs", rhs)
    if args.side in ("lhs", "both"):
        warm = rhs.maximizers if rhs is not None else None
        scale = russo_dye_norm(r, cfg).value + 1.0
        lhs = banach_region(
            r,
            args.directions,
            cfg,
            s_schedule=default_s_schedule(scale, args.smax_factor),
            warm_starts=warm,
        )
        _estimate_fragment(inst, "lhs", lhs)
    result = _result_shell(args)
    result["instances"].append(inst)
    _emit(result, args)
    return 0


def _run_batch(instances, worker, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, instances))
    return [worker(r) for r in instances]


def _cmd_verify(args) -> int:
    cfg = _config(args)
    if args.instances:
        batch = [_labelled(p) for p in args.instances]
    else:
        batch = random_batch(args.count, args.dim, args.tuples, args.seed)

    def worker(r):
        return verify_main(
            r,
            m=args.directions,
            cfg=cfg,
            n_haar=args.haar_samples,
            smax_factor=args.smax_factor,
            tol=args.tol,
        )

    reports = _run_batch(batch, worker, args.threads)
    result = _result_shell(args)
    for r, rep in zip(batch, reports):
        inst = {"label": r.label, "instance": instance_to_dict(r)}
        _report_fragment(inst, rep)
        result["instances"].append(inst)
    _emit(result, args)
    return _print_checks(result)


def _as_derivation(r: KTupleOperator):
    eye = np.eye(r.n)
    if (
        r.k != 2
        or float(np.abs(r.a[1] - eye).max()) > 1e-12
        or float(np.abs(r.b[0] - eye).max()) > 1e-12
    ):
        raise InstanceFormatError(
            f"instance '{r.label}' does not encode x -> Ax - xB "
            "(need k=2, a=(A, I), b=(I, -B))"
        )
    return r.a[0], -r.b[1]


def _cmd_derivation(args) -> int:
    cfg = _config(args)
    if args.instances:
        pairs = []
        for path in args.instances:
            r = _labelled(path)
            a, b = _as_derivation(r)
            pairs.append((a, b, r.label))
    else:
        pairs = []
        for i in range(args.count):
            rng = np.random.default_rng([args.seed, 131, i])
            n = args.dim
            a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
            b = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
            pairs.append((a, b, f"derivation-n{n}-{i:02d}"))

    def worker(pair):
        a, b, label = pair
        kwargs = {} if args.tol is None else {"tol_rel": args.tol}
        return verify_derivation(a, b, m=args.directions, cfg=cfg, label=label, **kwargs)

    reports = _run_batch(pairs, worker, args.threads)
    result = _result_shell(args)
    for (a, b, label), rep in zip(pairs, reports):
        inst = {"label": label}
        _report_fragment(inst, rep)
        result["instances"].append(inst)
    _emit(result, args)
    return _print_checks(result)


def _cmd_projection(args) -> int:
    cfg = _config(args)
    items = []
    if args.instances:
        for path in args.instances:
            r = _labelled(path)
            if r.k != 1 or float(np.abs(r.a[0] - r.b[0]).max()) > 1e-12:
                raise InstanceFormatError(
                    f"instance '{r.label}' does not encode x -> p x p (need k=1, a=b=(p,))"
                )
            items.append((r.a[0], r.label))
    else:
        p = np.zeros((args.dim, args.dim), dtype=complex)
        for i in range(min(args.rank, args.dim)):
            p[i, i] = 1.0
        items.append((p, f"projection-n{args.dim}r{args.rank}"))

    result = _result_shell(args)
    code = 0
    for p, label in items:
        rep = verify_mult_projection(p, m=args.directions, cfg=cfg)
        rep.label = label
        herm = hermitian_check(
            KTupleOperator.multiplication(p, p, label=label),
            m=args.directions,
            cfg=cfg,
        )
        inst = {"label": label}
        _report_fragment(inst, rep)
        inst["diagnostics"] = {
            **rep.diagnostics,
            "hermitian": herm.check("real_range").passed,
            "imaginary_extent": herm.diagnostics["imaginary_extent"],
            "sampled_asymmetry": herm.diagnostics["sampled_asymmetry"],
        }
        result["instances"].append(inst)
    _emit(result, args)
    code = _print_checks(result)
    return code


_HANDLERS = {
    "fov": _cmd_fov,
    "norm": _cmd_norm,
    "range": _cmd_range,
    "verify": _cmd_verify,
    "derivation": _cmd_derivation,
    "projection": _cmd_projection,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (InstanceFormatError, RegionEmptyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
