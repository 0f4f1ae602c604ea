"""Command-line front end.

Commands: solve | sweep | oracle | generate | bench.  Exit codes: 0 on
success, 1 on operational errors (bad input, unsupported structure, solver
breakdown), 2 when a mathematical guarantee is violated -- a certified
ratio below its theory floor, an oracle value contradicting a certified
bound, or a failing bench criterion.  That separation lets CI gate on the
guarantees without tripping over I/O problems.

All randomness flows from the single --seed through fixed substream
offsets (instance generation +0, hyperplane rounding +1000000); local
refinement is deterministic and needs no stream.  Identical (arguments,
seed) pairs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import reports
from .model import (
    Convention,
    GENERATOR_KINDS,
    CifhInstance,
    InstanceError,
    generate,
    heisenberg_line4,
    instance_digest,
    named_graph,
    parse_instance,
    serialize_instance,
)
from .oracle import ORACLE_MODE_LIMIT, exact_spectrum, line4_upper_bound
from .pipeline import (
    CertificationError,
    PipelineError,
    solve,
    sweep_p_class,
)
from .sdp import SdpFailure

_SUBSTREAMS = {"instancegen": 0, "gw": 1_000_000}


def substream(seed: int, name: str) -> int:
    return seed + _SUBSTREAMS[name]


def _add_instance_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("instance source (pick one)")
    source.add_argument("--in", dest="infile", metavar="PATH",
                        help="read an instance document")
    source.add_argument("--generate", metavar="KIND", choices=GENERATOR_KINDS,
                        help="build a named instance: " + ", ".join(GENERATOR_KINDS))
    source.add_argument("--graph", metavar="NAME",
                        help="build from a named graph (line4, cycle5, complete6, "
                             "star4, ...) with unit weights")
    parser.add_argument("--convention", choices=[c.value for c in Convention],
                        default=None, help="convention for --graph (default traceless)")
    parser.add_argument("--n", type=int, help="mode count (generators that take one)")
    parser.add_argument("--w", type=float, default=1.0, help="uniform weight")
    parser.add_argument("--t", type=float, default=1.0, help="hopping amplitude")
    parser.add_argument("--U", dest="u", type=float, default=2.0,
                        help="on-site interaction strength")
    parser.add_argument("--mu0", type=float, default=0.0, help="potential offset")
    parser.add_argument("--sites", type=int, help="site count (hubbard-chain)")
    parser.add_argument("--p-edge", type=float, default=0.5,
                        help="edge density (random)")
    parser.add_argument("--p-hop", type=float, default=0.5,
                        help="hopping density (random)")
    parser.add_argument("--bipartite", action="store_true",
                        help="restrict random interactions to even-odd pairs")
    parser.add_argument("--zero-potentials", action="store_true",
                        help="zero out random potentials")
    parser.add_argument("--particle-target", type=int, default=None,
                        help="average particle number constraint")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (required for any randomized step)")


def _load_instance(args) -> CifhInstance:
    picked = [s for s in (args.infile, args.generate, args.graph) if s]
    if len(picked) != 1:
        raise InstanceError("exactly one of --in, --generate, --graph is required")
    if args.infile:
        return parse_instance(Path(args.infile).read_text())
    if args.graph:
        conv = Convention(args.convention or "traceless")
        if conv is Convention.FMC:
            return generate("fmc-graph", graph=args.graph, w=args.w)
        n, edges = named_graph(args.graph, args.w)
        return CifhInstance(
            n=n,
            interaction_edges=tuple(edges),
            potentials=(0.0,) * n,
            hopping_edges=(),
            convention=conv,
            particle_target=args.particle_target,
        )
    kind = args.generate
    params: dict = {}
    if kind == "complete-dense":
        if args.n is None:
            raise InstanceError("complete-dense needs --n")
        params = {"n": args.n, "w": args.w}
    elif kind == "hubbard-triangle":
        params = {"t": args.t, "u": args.u, "mu0": args.mu0}
    elif kind == "hubbard-chain":
        if args.sites is None:
            raise InstanceError("hubbard-chain needs --sites")
        params = {"sites": args.sites, "t": args.t, "u": args.u, "mu0": args.mu0}
    elif kind == "fmc-graph":
        if args.graph is None:
            raise InstanceError("fmc-graph needs --graph")
        params = {"graph": args.graph, "w": args.w}
    elif kind == "random":
        if args.n is None:
            raise InstanceError("random needs --n")
        if args.seed is None:
            raise InstanceError("random generation needs --seed")
        params = {
            "n": args.n,
            "seed": substream(args.seed, "instancegen"),
            "convention": args.convention or "traceless",
            "p_edge": args.p_edge,
            "p_hop": args.p_hop,
            "bipartite": args.bipartite,
            "zero_potentials": args.zero_potentials,
            "particle_target": args.particle_target,
        }
    return generate(kind, **params)


def _require_seed_when_random(args, inst: CifhInstance) -> int:
    """psd solves round random hyperplanes; everything else is deterministic."""
    if inst.convention is Convention.PSD:
        if args.seed is None:
            raise InstanceError("--seed is required for psd instances (randomized "
                                "hyperplane rounding)")
        return substream(args.seed, "gw")
    return args.seed if args.seed is not None else 0


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _sibling(path: str, suffix: str) -> str:
    return str(Path(path).with_suffix(suffix))


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    gw_seed = _require_seed_when_random(args, inst)
    solution = solve(
        inst,
        trials=args.trials,
        seed=gw_seed,
        refine_budget=args.refine,
        sdp_tol=args.tol,
        oracle=args.oracle,
    )
    options = {
        "seed": args.seed,
        "trials": args.trials,
        "refine_budget": args.refine,
        "oracle": args.oracle,
        "sdp_tol": args.tol,
    }
    report = reports.solve_report(inst, solution, options)
    _write_or_print(reports.render_report(report), args.report)
    if args.sweep:
        result = sweep_p_class(
            inst,
            [i / args.sweep for i in range(args.sweep + 1)],
            trials=args.trials,
            seed=gw_seed,
            refine_budget=args.refine,
            sdp_tol=args.tol,
        )
        curve_path = args.curve
        if curve_path is None and args.report:
            curve_path = _sibling(args.report, ".csv")
        _write_or_print(reports.sweep_csv(result), curve_path)
        if curve_path and not args.no_figure:
            figure_path = args.figure or _sibling(curve_path, ".png")
            reports.sweep_figure(result, figure_path,
                                 title=f"blend sweep ({inst.convention.value}, n={inst.n})")
    exact = ("" if solution.exact_ratio is None
             else f", exact_ratio = {solution.exact_ratio:.6f}")
    print(
        f"certified ratio_bound = {solution.ratio_bound:.6f} "
        f"(floor {solution.ratio_derivation['floor']:.6f}, "
        f"method {solution.method}@p={solution.p_class:.2f}{exact})",
        file=sys.stderr,
    )
    return 0


def cmd_sweep(args) -> int:
    inst = _load_instance(args)
    gw_seed = _require_seed_when_random(args, inst)
    result = sweep_p_class(
        inst,
        [i / args.steps for i in range(args.steps + 1)],
        trials=args.trials,
        seed=gw_seed,
        refine_budget=args.refine,
        sdp_tol=args.tol,
    )
    _write_or_print(reports.sweep_csv(result), args.out)
    if args.out and not args.no_figure:
        figure_path = args.figure or _sibling(args.out, ".png")
        reports.sweep_figure(result, figure_path,
                             title=f"blend sweep ({inst.convention.value}, n={inst.n})")
    if result.skipped:
        print(f"skipped p values (solver failure): {list(result.skipped)}",
              file=sys.stderr)
    return 0


def cmd_oracle(args) -> int:
    inst = _load_instance(args)
    if inst.n > ORACLE_MODE_LIMIT:
        raise InstanceError(
            f"oracle refuses n = {inst.n} > {ORACLE_MODE_LIMIT} modes"
        )
    spectrum = exact_spectrum(inst)
    extra = {}
    if instance_digest(inst) == instance_digest(heisenberg_line4()):
        record = line4_upper_bound()
        extra = {
            "alpha_star": record.alpha_star,
            "ratio_upper": record.ratio_upper,
            "overlap_s": record.s,
        }
    _write_or_print(reports.oracle_report(inst, spectrum, extra), args.out)
    return 0


def cmd_generate(args) -> int:
    inst = _load_instance(args)
    _write_or_print(serialize_instance(inst) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    from . import bench

    results = bench.run_criteria(name_filter=args.filter)
    if not results:
        print(f"no criteria match filter {args.filter!r}", file=sys.stderr)
        return 1
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  [{r.elapsed:7.2f}s]  {r.detail}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cifh",
        description="certified Gaussian approximations for classically "
                    "interacting fermionic Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance with certification")
    _add_instance_args(p_solve)
    p_solve.add_argument("--trials", type=int, default=64,
                         help="hyperplane rounding trials (psd)")
    p_solve.add_argument("--refine", type=int, default=0,
                         help="local refinement budget (candidate evaluations)")
    p_solve.add_argument("--oracle", nargs="?", const="on", default="auto",
                         choices=["auto", "on", "off"],
                         help="exact-diagonalization cross-check")
    p_solve.add_argument("--tol", type=float, default=1e-7, help="SDP tolerance")
    p_solve.add_argument("--sweep", type=int, metavar="M",
                         help="also emit the blend curve on an M-interval grid")
    p_solve.add_argument("--report", metavar="PATH", help="report file (default stdout)")
    p_solve.add_argument("--curve", metavar="PATH", help="sweep CSV file")
    p_solve.add_argument("--figure", metavar="PATH", help="sweep figure file")
    p_solve.add_argument("--no-figure", action="store_true",
                         help="suppress the sweep figure")
    p_solve.set_defaults(fn=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="emit the blend curve CSV (and figure)")
    _add_instance_args(p_sweep)
    p_sweep.add_argument("--steps", type=int, default=20, metavar="M",
                         help="grid intervals (M+1 rows)")
    p_sweep.add_argument("--trials", type=int, default=64)
    p_sweep.add_argument("--refine", type=int, default=0)
    p_sweep.add_argument("--tol", type=float, default=1e-7)
    p_sweep.add_argument("--out", metavar="PATH", help="CSV file (default stdout)")
    p_sweep.add_argument("--figure", metavar="PATH", help="figure file")
    p_sweep.add_argument("--no-figure", action="store_true")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="exact spectra (n <= 14)")
    _add_instance_args(p_oracle)
    p_oracle.add_argument("--out", metavar="PATH", help="report file (default stdout)")
    p_oracle.set_defaults(fn=cmd_oracle)

    p_gen = sub.add_parser("generate", help="emit an instance document")
    _add_instance_args(p_gen)
    p_gen.add_argument("--out", metavar="PATH", help="instance file (default stdout)")
    p_gen.set_defaults(fn=cmd_generate)

    p_bench = sub.add_parser("bench", help="run the acceptance criteria")
    p_bench.add_argument("--filter", metavar="SUBSTRING", default=None,
                         help="run only criteria whose name contains SUBSTRING")
    p_bench.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CertificationError as exc:
        print(f"guarantee violated: {exc}", file=sys.stderr)
        return 2
    except (InstanceError, PipelineError, SdpFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
