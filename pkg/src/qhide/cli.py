"""Command line front end: every module as a subcommand, figure data as CSV.

Exit codes: 0 success, 2 validation error (the message names the violated
cap), 3 solver non-convergence.  The default seed is the fixed constant
DEFAULT_SEED; the QHIDE_SEED environment variable overrides it and an explicit
--seed flag beats both.  Identical arguments always produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, clifford, states
from .commitment import CheatModel, run_sessions
from .pauli import cardinalities
from .protocols import (
    pairwise_attack_exact,
    pairwise_attack_mc,
    prepare_rho0,
    prepare_rho1_sample,
    tau_protocol_exact,
    tau_protocol_mc,
)
from .tauopt import SolverNonConvergence, maximize_tau_bias, tau_ppt_region

DEFAULT_SEED = 1905
EXIT_VALIDATION = 2
EXIT_SOLVER = 3


# ---------------------------------------------------------------------------
# Output plumbing


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if value is None:
        return ""
    return str(value)


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _write_text(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_record(payload: dict, args):
    if args.format == "json":
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    else:
        lines = ["key,value"]
        for key, value in payload.items():
            if isinstance(value, (list, tuple, np.ndarray, dict)):
                value = json.dumps(_jsonable(value))
                value = '"' + value.replace('"', '""') + '"'
                lines.append(f"{key},{value}")
            else:
                lines.append(f"{key},{_fmt(value)}")
        text = "\n".join(lines) + "\n"
    _write_text(text, args.out)


def _emit_table(header: list[str], rows, comments: list[str], args):
    if args.format == "json":
        payload = {
            "comments": comments,
            "columns": header,
            "rows": [[_jsonable(v) for v in row] for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# {c}" for c in comments]
        lines.append(",".join(header))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    _write_text(text, args.out)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("QHIDE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"QHIDE_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# Subcommands


def cmd_states(args) -> int:
    n, bit = args.n, args.bit
    n_even, n_odd = cardinalities(n)
    payload = {
        "n": n,
        "bit": bit,
        "even_labels": n_even,
        "odd_labels": n_odd,
        "mixing_weight": states.mixing_weight(bit, n) if n > 1 else None,
        "werner_residual": states.werner_form_check(bit, n),
        "recursion_residual": states.recursion_check(bit, n) if n > 1 else 0.0,
        "mixture_residual": states.maximally_mixed_check(n),
    }
    if args.state_out:
        states.save_operator(states.hiding_state(bit, n), args.state_out)
        payload["state_path"] = args.state_out
    _emit_record(payload, args)
    return 0


def cmd_attack(args) -> int:
    seed = _resolve_seed(args)
    if args.family == "tau":
        exact = tau_protocol_exact()
        payload = {"family": "tau", "exact_p00": exact.p00, "exact_p11": exact.p11}
        if args.trials:
            mc = tau_protocol_mc(args.trials, seed)
            payload.update(
                p00=mc.p00, p11=mc.p11, se00=mc.se00, se11=mc.se11, trials=mc.trials
            )
        _emit_record(payload, args)
        return 0
    exact = pairwise_attack_exact(args.n)
    payload = {
        "family": "pair",
        "n": args.n,
        "exact_p00": exact.p00,
        "exact_p11": exact.p11,
    }
    if args.trials:
        mc = pairwise_attack_mc(args.n, args.trials, seed, threads=args.threads)
        payload.update(
            p00=mc.p00, p11=mc.p11, se00=mc.se00, se11=mc.se11, trials=mc.trials
        )
    else:
        payload.update(
            p00=float(exact.p00), p11=float(exact.p11), se00=0.0, se11=0.0, trials=0
        )
    _emit_record(payload, args)
    return 0


def _bound_single(args) -> int:
    bound = bounds.single_bit_bound(args.n)
    payload = {
        "n": args.n,
        "tight_formula": "2/(2^n+1)",
        "tight": bound.tight,
        "tight_value": float(bound.tight),
        "weak_formula": "2^-(n-1)",
        "weak": bound.weak,
        "weak_value": float(bound.weak),
    }
    _emit_record(payload, args)
    return 0


def _bound_lp(args) -> int:
    lp = bounds.bell_diag_lp(args.n)
    closed = 1 + Fraction(2, 2**args.n + 1)
    payload = {
        "n": args.n,
        "optimum_p00_plus_p11": lp.optimum,
        "closed_form": closed,
        "closed_form_value": float(closed),
        "alpha": lp.povm.alpha,
    }
    _emit_record(payload, args)
    return 0


def _bound_werner(args) -> int:
    region = bounds.werner_feasible_region(args.n, args.grid)
    comments = [
        "qhide bound werner: token=fig2",
        "max p11 at fixed p00 over M0 = alpha*I + beta*2^n*H with 0 <= M0 <= I and 0 <= PT(M0) <= I",
        "p11_max = 1 - p00 + 2*min(p00/2, (1 - p00)/(2^n - 1))",
        f"params: n={args.n} grid={args.grid}",
        f"best: p00={region.best_p00!r} p00+p11={region.best_sum!r}",
    ]
    rows = [(args.n, float(t), float(p)) for t, p in region.points]
    _emit_table(["n", "p00", "p11_max"], rows, comments, args)
    return 0


def _bound_multi(args) -> int:
    mb = bounds.multi_bit_bound(args.n, args.k)
    payload = {
        "n": mb.n,
        "k": mb.k,
        "low": list(mb.low),
        "up": list(mb.up),
        "delta": mb.delta,
        "delta_value": float(mb.delta),
        "info_bound_bits": mb.info_bound,
        "leading_term": bounds.correlation_defect_leading(mb.k, mb.n),
    }
    _emit_record(payload, args)
    return 0


def _bound_theorem1(args) -> int:
    payload = {
        "n": args.n,
        "x": args.x,
        "curve": bounds.theorem1_curve(args.n, args.x),
        "corollary": bounds.theorem1_curve(args.n, 0.0),
    }
    _emit_record(payload, args)
    return 0


def _bound_info(args) -> int:
    cap, channel = bounds.mutual_info_cap(args.delta, args.prior)
    payload = {
        "delta": args.delta,
        "prior_p0": args.prior,
        "cap_bits": cap,
        "channel": channel,
        "channel_mutual_info": bounds.channel_mutual_info(
            [args.prior, 1 - args.prior], channel
        ),
    }
    _emit_record(payload, args)
    return 0


def _bound_tau(args) -> int:
    if args.region:
        table = tau_ppt_region(args.n, args.grid)
        comments = [
            "qhide bound tau --region: token=talppt (outer boundary token=tallocc-outer)",
            "max p11 at fixed p00 over symmetric POVMs with 0 <= M0 <= I and PT(M0) = M0",
            f"params: n={args.n} grid={args.grid}",
            "the LOCC-attainability inner curve is out of scope (no published data)",
        ]
        rows = [(args.n, float(t), float(p)) for t, p in table]
        _emit_table(["n", "p00", "p11_max"], rows, comments, args)
        return 0
    opt = maximize_tau_bias(args.n)
    rep = bounds.tau_repetition_bound(args.n)
    payload = {
        "n": args.n,
        "p00": opt.p00,
        "p11": opt.p11,
        "p00_plus_p11": opt.p00_plus_p11,
        "bias": opt.p00_plus_p11 - 1.0,
        "cut_rounds": opt.cut_rounds,
        "conjectured_bias": rep.bias,
        "qubit_overhead": rep.qubit_overhead,
    }
    _emit_record(payload, args)
    return 0


def _bound_emin(args) -> int:
    value = bounds.emin_lower_bound(args.n)
    payload = {
        "n": args.n,
        "emin": value,
        "emin_value": float(value),
        "closed_form_value": 0.5 * (1.0 - 2.0 ** (-args.n)),
        "mixture_residual": bounds.uniform_mixture_defect(args.n),
    }
    _emit_record(payload, args)
    return 0


def _bound_contours(args) -> int:
    ks = list(range(1, args.k_max + 1))
    ns = list(range(1, args.n_max + 1))
    table = bounds.multi_bit_contours(ns, ks)
    comments = [
        "qhide bound contours: token=mbound",
        "log2 of the information bound (2^k/ln 2) * Delta(n, k)",
        f"params: k=1..{args.k_max} n=1..{args.n_max}",
    ]
    rows = [
        (k, n, float(table[i, j])) for i, k in enumerate(ks) for j, n in enumerate(ns)
    ]
    _emit_table(["k", "n", "log2_info_bound_bits"], rows, comments, args)
    return 0


def cmd_bound(args) -> int:
    handlers = {
        "single": _bound_single,
        "lp": _bound_lp,
        "werner": _bound_werner,
        "multi": _bound_multi,
        "contours": _bound_contours,
        "theorem1": _bound_theorem1,
        "info": _bound_info,
        "tau": _bound_tau,
        "emin": _bound_emin,
    }
    return handlers[args.topic](args)


def cmd_clifford(args) -> int:
    seed = _resolve_seed(args)
    n = args.n
    payload = {
        "n": n,
        "elements": clifford.group_order(n) // 8,
        "order_with_phases": clifford.group_order(n),
        "generators": len(clifford.generator_gates(n)),
        "gate_budget": 3 * n * n + 7 * n + clifford.SYNTH_GATE_MARGIN,
        "policy_steps": clifford.walk_length_policy(n, args.epsilon),
    }
    if args.samples:
        counts = []
        for i in range(args.samples):
            element = clifford.random_walk_sample(n, payload["policy_steps"], (seed, i))
            counts.append(len(clifford.synthesize_circuit(element)))
        payload.update(
            sampled=args.samples,
            mean_gates=float(np.mean(counts)),
            max_gates=int(np.max(counts)),
        )
    _emit_record(payload, args)
    return 0


def cmd_prepare(args) -> int:
    seed = _resolve_seed(args)
    if args.bit == 0:
        circuit, info = prepare_rho0(args.n, seed, steps=args.steps)
        payload = dict(info)
        payload["bit"] = 0
        payload["circuit"] = [
            {"gate": g.name, "qubits": list(g.qubits)} for g in circuit.gates
        ]
    else:
        rng = np.random.default_rng(np.random.SeedSequence((seed,)))
        samples = [
            prepare_rho1_sample(args.n, rng).to_text() for _ in range(args.samples)
        ]
        payload = {"bit": 1, "n": args.n, "seed": seed, "labels": samples}
    _emit_record(payload, args)
    return 0


def cmd_commit(args) -> int:
    seed = _resolve_seed(args)
    cheat = CheatModel.parse(args.cheat)
    stats = run_sessions(
        args.n, args.r, args.bit, cheat, args.sessions, seed, threads=args.threads
    )
    payload = stats.to_json_dict()
    payload.update(n=args.n, r=args.r, bit=args.bit, cheat=args.cheat, seed=seed)
    _emit_record(payload, args)
    return 0


def _figure_fig2(grid: int) -> tuple[list[str], list[str], list]:
    comments = [
        "token=fig2",
        "reachable (p00, p11) region boundary for the Bell-mixture pair",
        "p11_max = 1 - p00 + 2*min(p00/2, (1 - p00)/(2^n - 1))",
        f"params: n in (1, 2); grid={grid}",
    ]
    for n in (1, 2):
        pts = bounds.fig2_points(n)
        parts = ", ".join(
            f"{name}=({_fmt(float(p))}, {_fmt(float(q))})" for name, (p, q) in pts.items()
        )
        comments.append(f"corners n={n}: {parts}")
    rows = []
    for n in (1, 2):
        region = bounds.werner_feasible_region(n, grid)
        rows.extend((n, float(t), float(p)) for t, p in region.points)
    return ["n", "p00", "p11_max"], comments, rows


def _figure_boundcurve(grid: int) -> tuple[list[str], list[str], list]:
    comments = [
        "token=boundcurve",
        "guaranteed p00 + p11 - 1 at outcome asymmetry x = p00 - p11",
        "bound = sqrt(1 + x^2) / sqrt(16^n - 1)",
        f"params: n in (1, 2, 3); x grid={grid} on [-1, 1]",
    ]
    rows = []
    for n in (1, 2, 3):
        for x in np.linspace(-1.0, 1.0, grid):
            rows.append((n, float(x), bounds.theorem1_curve(n, float(x))))
    return ["n", "x", "bound"], comments, rows


def _figure_mbound(k_max: int = 8, n_max: int = 24) -> tuple[list[str], list[str], list]:
    comments = [
        "token=mbound",
        "log2 of the information bound (2^k/ln 2) * Delta(n, k) for k hidden bits in n pairs",
        f"params: k=1..{k_max} n=1..{n_max}",
    ]
    ks = list(range(1, k_max + 1))
    ns = list(range(1, n_max + 1))
    table = bounds.multi_bit_contours(ns, ks)
    rows = [
        (k, n, float(table[i, j])) for i, k in enumerate(ks) for j, n in enumerate(ns)
    ]
    return ["k", "n", "log2_info_bound_bits"], comments, rows


def _figure_talppt(grid: int, full: bool) -> tuple[list[str], list[str], list]:
    comments = [
        "token=talppt (outer boundary token=tallocc-outer)",
        "reachable (p00, p11) boundary for the separable pair under PT-invariant POVMs",
        "max p11 at fixed p00 via eigenvector cutting planes; PT(M0) = M0 holds exactly",
        "the LOCC-attainability inner curve is out of scope (no published data)",
        f"params: n in ({'1, 2' if full else '1'}); grid={grid}",
    ]
    rows = []
    for n in (1, 2) if full else (1,):
        table = tau_ppt_region(n, grid)
        rows.extend((n, float(t), float(p)) for t, p in table)
    return ["n", "p00", "p11_max"], comments, rows


def _figure_tal2bdd(full: bool) -> tuple[list[str], list[str], list]:
    comments = [
        "token=tal2bdd",
        "optimal p00 + p11 for the repeated separable pair vs the (sqrt(3)/2)^n conjecture",
        f"params: n in ({'1, 2, 3' if full else '1, 2'})",
    ]
    rows = []
    for n in (1, 2, 3) if full else (1, 2):
        opt = maximize_tau_bias(n)
        rows.append(
            (
                n,
                opt.p00_plus_p11,
                opt.p00_plus_p11 - 1.0,
                (math.sqrt(3.0) / 2.0) ** n,
            )
        )
    return ["n", "p00_plus_p11", "bias", "conjectured_bias"], comments, rows


def cmd_figures(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    built = {
        "fig2.csv": _figure_fig2(args.grid),
        "boundcurve.csv": _figure_boundcurve(args.grid),
        "mbound.csv": _figure_mbound(),
        "talppt.csv": _figure_talppt(args.grid, args.full),
        "tal2bdd.csv": _figure_tal2bdd(args.full),
    }
    for name, (header, comments, rows) in built.items():
        lines = [f"# {c}" for c in comments]
        lines.append(",".join(header))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        (out_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    sys.stdout.write("\n".join(f"wrote {out_dir / name}" for name in built) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhide",
        description="Bell-mixture data hiding: states, attacks, bounds, commitment.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("states", parents=[common], help="construct and verify hiding states")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bit", type=int, choices=(0, 1), default=0)
    p.add_argument("--state-out", default=None, help="write the state as JSON")
    p.set_defaults(func=cmd_states)

    p = sub.add_parser("attack", parents=[common], help="LOCC attack statistics")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--family", choices=("pair", "tau"), default="pair")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("bound", parents=[common], help="security bounds")
    p.add_argument(
        "topic",
        choices=(
            "single",
            "lp",
            "werner",
            "multi",
            "contours",
            "theorem1",
            "info",
            "tau",
            "emin",
        ),
    )
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--prior", type=float, default=0.5)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--n-max", type=int, default=24)
    p.add_argument("--region", action="store_true", help="tau: sweep the boundary")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("clifford", parents=[common], help="group, walk, synthesis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("prepare", parents=[common], help="sample hiding-state preparations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bit", type=int, choices=(0, 1), default=0)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("commit", parents=[common], help="bit commitment sessions")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--r", type=int, default=8)
    p.add_argument("--bit", type=int, choices=(0, 1), default=0)
    p.add_argument("--cheat", default="honest", help="honest | parity | nonsinglet:ALPHA")
    p.add_argument("--sessions", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_commit)

    p = sub.add_parser("figures", help="batch-emit all figure datasets as CSV")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--full", action="store_true", help="include the slow n=2,3 tau rows")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverNonConvergence as exc:
        print(f"solver failed to converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, AssertionError) as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
