"""Command-line front end.

Subcommands run the ensemble scenarios, the three-party algebra checks,
and the causal-geometry analyses, emitting deterministic JSON (or CSV
sample tables) so identical invocations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import boxes, quantum, spacetime
from .ensembles import (
    EnsembleRun,
    ExactDistribution,
    RunMode,
    ScenarioKind,
    ScenarioSpec,
    run_ghz_scenario,
    run_jamming_scenario,
    run_pr_scenario,
    run_tsirelson_scenario,
)
from .errors import InvariantViolation
from .reportio import SCHEMA_VERSION, dump_report
from .signaling import (
    ghz_verdict,
    jamming_unary_exact,
    marginal_mapping,
    pr_verdict,
    total_variation,
    tsirelson_verdict,
)

_MODES = {"exact": RunMode.EXACT, "mc": RunMode.MONTE_CARLO}


def _envelope(command: str, config: dict, results: dict, checks: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": results,
        "checks": checks,
    }


def _scenario_config(args) -> dict:
    return {
        "n": args.n,
        "trials": args.trials,
        "seed": args.seed,
        "mode": args.mode,
        "format": args.format,
    }


def _dist_json(result) -> list[dict]:
    """Serialize an exact or sampled collective distribution uniformly."""
    if isinstance(result, ExactDistribution):
        return result.to_json_obj()
    dist = ExactDistribution.from_mapping(result.empirical(), result.labels, result.n_rounds)
    return dist.to_json_obj()


def _marginal_json(result, indices: tuple[int, ...]) -> list[dict]:
    if isinstance(result, ExactDistribution):
        return result.marginal(indices).to_json_obj()
    mapping = marginal_mapping(result.empirical(), indices)
    labels = tuple(result.labels[i] for i in indices)
    dist = ExactDistribution.from_mapping(mapping, labels, result.n_rounds)
    return dist.to_json_obj()


def _frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _dist_csv_rows(choice: str, result, rows: list[list]) -> None:
    if isinstance(result, ExactDistribution):
        for point, prob in zip(result.support, result.probs):
            rows.append([choice, *[_frac_str(v) for v in point], prob.numerator, prob.denominator])
    else:
        for trial, row in enumerate(result.collectives):
            rows.append([choice, trial, *[float(v) for v in row]])


def _dist_csv(results_by_choice: dict[str, ExactDistribution | EnsembleRun]) -> tuple[list[str], list[list]]:
    first = next(iter(results_by_choice.values()))
    if isinstance(first, ExactDistribution):
        header = ["choice", *first.labels, "numerator", "denominator"]
    else:
        header = ["choice", "trial", *first.labels]
    rows: list[list] = []
    for choice, result in results_by_choice.items():
        _dist_csv_rows(choice, result, rows)
    return header, rows


def cmd_pr_signal(args) -> tuple[dict, tuple | None]:
    mode = _MODES[args.mode]
    verdict = pr_verdict(args.n, mode, args.trials, args.seed)
    dists = {}
    for choice in ("u", "p"):
        spec = ScenarioSpec(
            kind=ScenarioKind.PR_BOX,
            n_rounds=args.n,
            sender_choice=choice,
            trials=args.trials,
            seed=args.seed,
            mode=mode,
        )
        dists[choice] = run_pr_scenario(spec)
    variance = verdict.extras["variance_signature"]
    results = {
        "verdict": verdict.to_json_obj(),
        "variance_signature": variance,
        "joint_distribution": {c: _dist_json(d) for c, d in dists.items()},
    }
    checks = {
        "distinguishable": verdict.distinguishable,
        "variance_collapse": variance["u"]["var_diff"] == 0 and variance["p"]["var_sum"] == 0,
    }
    if mode is RunMode.EXACT:
        one = Fraction(1)
        p_joint = dists["u"].probability(lambda v: v[0] == one and v[1] == one)
        p_anti = dists["p"].probability(lambda v: v[0] == one and v[1] == -one)
        results["rare_events"] = {
            "p_both_plus_under_u": p_joint,
            "p_plus_minus_under_p": p_anti,
        }
        checks["rare_event_match"] = (
            p_joint == Fraction(1, 2**args.n) and p_anti == Fraction(1, 2**args.n)
        )
    report = _envelope("pr-signal", _scenario_config(args), results, checks)
    return report, _dist_csv(dists)


def cmd_tsirelson(args) -> tuple[dict, tuple | None]:
    mode = _MODES[args.mode]
    verdict = tsirelson_verdict(args.n, mode, args.trials, args.seed)
    box = boxes.make_tsirelson_box()
    correlations = {
        "|".join(key): boxes.correlation(box, key)
        for key in (("u", "u"), ("u", "p"), ("p", "u"), ("p", "p"))
    }
    chsh = boxes.chsh_value(box)
    dists = {}
    for axis in ("z", "x"):
        for choice in ("u", "p"):
            spec = ScenarioSpec(
                kind=ScenarioKind.TSIRELSON,
                n_rounds=args.n,
                sender_choice=choice,
                trials=args.trials,
                seed=args.seed,
                mode=mode,
            )
            dists[f"{axis}|{choice}"] = run_tsirelson_scenario(spec, bob_axis=axis)
    results = {
        "verdict": verdict.to_json_obj(),
        "box_correlations": correlations,
        "chsh": chsh,
        "tv_per_axis": verdict.extras["tv_per_axis"],
        "collective_variance": verdict.extras["collective_variance"],
        "bob_distribution": {key: _dist_json(d) for key, d in dists.items()},
    }
    checks = {
        "no_signaling": not verdict.distinguishable,
        "chsh_saturates_quantum_bound": abs(float(chsh) - 2.0 * math.sqrt(2.0)) < 1e-12,
        "no_signaling_box": boxes.check_no_signaling(box)["holds"],
    }
    report = _envelope("tsirelson", _scenario_config(args), results, checks)
    return report, _dist_csv(dists)


def cmd_ghz_signal(args) -> tuple[dict, tuple | None]:
    mode = _MODES[args.mode]
    verdict = ghz_verdict(args.n, mode, args.trials, args.seed)
    dists = {}
    for choice in ("u", "p"):
        spec = ScenarioSpec(
            kind=ScenarioKind.GHZ,
            n_rounds=args.n,
            sender_choice=choice,
            trials=args.trials,
            seed=args.seed,
            mode=mode,
        )
        dists[choice] = run_ghz_scenario(spec)
    results = {
        "verdict": verdict.to_json_obj(),
        "hit_probability": {"u": verdict.values[0], "p": verdict.values[1]},
        "tv_joint_receiver": verdict.extras["tv_joint_receiver"],
        "receiver_distribution": {c: _marginal_json(d, (0, 1)) for c, d in dists.items()},
    }
    checks = {
        "no_signaling": not verdict.distinguishable,
        "hit_probabilities_equal": verdict.values[0] == verdict.values[1],
    }
    if mode is RunMode.EXACT:
        expected = Fraction(1, 4**args.n)
        checks["hit_probability_matches"] = verdict.values[0] == expected
    report = _envelope("ghz-signal", _scenario_config(args), results, checks)
    return report, _dist_csv(dists)


def cmd_ghz_algebra(args) -> tuple[dict, tuple | None]:
    state = quantum.ghz_state()
    stabilizers = [
        {
            "observable": obs.label(),
            "expected": expected,
            "expectation": quantum.expectation(state, obs),
        }
        for obs, expected in quantum.GHZ_STABILIZERS
    ]
    xx = quantum.PauliObservable(("X", "X", "I"))
    yy = quantum.PauliObservable(("Y", "Y", "I"))
    xy = quantum.PauliObservable(("X", "Y", "I"))
    yx = quantum.PauliObservable(("Y", "X", "I"))
    zz = quantum.PauliObservable(("Z", "Z", "I"))

    commutators = {
        "[XX,YY]": quantum.commutator_norm(xx, yy),
        "[XY,YX]": quantum.commutator_norm(xy, yx),
    }
    products = {
        "xx_times_yy": quantum.product_expectation(state, xx, yy),
        "xy_times_yx": quantum.product_expectation(state, xy, yx),
        "zz": quantum.expectation(state, zz),
    }
    full_search = quantum.ghz_assignment_search()
    positive_only = quantum.ghz_assignment_search(
        tuple(c for c in quantum.GHZ_PRODUCT_CONSTRAINTS if c[1] == 1)
    )
    results = {
        "stabilizers": stabilizers,
        "commutator_norms": commutators,
        "pair_products": products,
        "assignment_search": {
            "full_constraints_solutions": len(full_search),
            "positive_constraints_solutions": len(positive_only),
        },
    }
    checks = {
        "stabilizers_match": all(
            abs(s["expectation"] - s["expected"]) < 1e-12 for s in stabilizers
        ),
        "commutators_vanish": all(v < 1e-12 for v in commutators.values()),
        "pair_products_match": abs(products["xx_times_yy"] + 1.0) < 1e-12
        and abs(products["xy_times_yx"] - 1.0) < 1e-12,
        "no_consistent_assignment": len(full_search) == 0,
    }
    report = _envelope(
        "ghz-algebra", {"format": args.format}, results, checks
    )
    return report, None


def cmd_jamming(args) -> tuple[dict, tuple | None]:
    records = run_jamming_scenario(args.n, args.jim, args.trials, args.seed)
    binned = records.binned_correlations()
    bin_counts = {str(j): int(rows.shape[0]) for j, rows in records.bin_by_jim().items()}
    overall = records.overall_correlation()
    unary = jamming_unary_exact()
    total = records.trials
    results = {
        "jim_choice": args.jim,
        "triplets": total,
        "bin_counts": bin_counts,
        "binned_correlation": {str(j): c for j, c in binned.items()},
        "overall_correlation": overall,
        "unary_condition": unary,
    }
    checks = {"unary_holds": unary["holds"]}
    if args.jim == "x":
        ok = all(c is not None and c == -float(j) for j, c in binned.items())
        checks["binned_constraint_ok"] = ok
    else:
        bound = 4.0 / math.sqrt(total)
        per_bin_ok = all(
            c is None or abs(c) < 4.0 / math.sqrt(max(1, int(bin_counts[str(j)])))
            for j, c in binned.items()
        )
        checks["uncorrelated"] = abs(overall) < bound and per_bin_ok
    config = {
        "n": args.n,
        "trials": args.trials,
        "seed": args.seed,
        "jim": args.jim,
        "format": args.format,
    }
    report = _envelope("jamming", config, results, checks)
    header = ["triplet", "a_x", "b_x", "j"]
    rows = [[i, int(r[0]), int(r[1]), int(r[2])] for i, r in enumerate(records.outcomes)]
    return report, (header, rows)


def cmd_causal(args) -> tuple[dict, tuple | None]:
    path = Path(args.config)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ValueError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError("causal config must be a JSON object")

    events = {}
    for key in ("a_hat", "b_hat", "j_hat"):
        if key in data:
            events[key] = spacetime.event_from_json_obj(data[key])
    results: dict = {}
    checks: dict = {}

    if "a_hat" in events and "b_hat" in events:
        apex = spacetime.cone_overlap_apex(events["a_hat"], events["b_hat"])
        results["overlap_apex"] = apex.to_json_obj()
        if "j_hat" in events:
            config = spacetime.CausalConfig(
                a_hat=events["a_hat"], b_hat=events["b_hat"], j_hat=events["j_hat"]
            )
            binary = spacetime.binary_condition(config)
            results["binary_condition"] = {
                "holds": binary["holds"],
                "overlap_apex": binary["overlap_apex"].to_json_obj(),
            }
            checks["binary_condition_holds"] = binary["holds"]

    if "beta" in data:
        if "a_hat" not in events or "b_hat" not in events:
            raise ValueError("round-trip chronology needs a_hat and b_hat events")
        beta = float(data["beta"])
        chrono = spacetime.round_trip_chronology(
            alice_x=events["a_hat"].x,
            bob_x=events["b_hat"].x,
            send_t=events["a_hat"].t,
            beta=beta,
        )
        results["round_trip"] = {
            "reply_arrival": chrono["reply_arrival"].to_json_obj(),
            "retrocausal": chrono["retrocausal"],
            "beta": beta,
        }
        checks["retrocausal"] = chrono["retrocausal"]

    if "alice_map" in data or "bob_map" in data:
        if not ("alice_map" in data and "bob_map" in data):
            raise ValueError("loop analysis needs both alice_map and bob_map")
        policy = spacetime.DevicePolicy(alice_map=data["alice_map"], bob_map=data["bob_map"])
        loop = spacetime.loop_analysis(policy)
        scan = spacetime.policy_scan()
        results["loop"] = {
            "alice_map": policy.alice_map,
            "bob_map": policy.bob_map,
            "consistent": loop["consistent"],
            "fixed_points": [list(fp) for fp in loop["fixed_points"]],
        }
        results["policy_scan_summary"] = {
            "pairs": len(scan),
            "contradictory_pairs": sum(1 for r in scan if r["n_fixed_points"] == 0),
            "underdetermined_pairs": sum(1 for r in scan if r["n_fixed_points"] == 2),
            "pairs_without_unique_fixed_point": sum(1 for r in scan if r["n_fixed_points"] != 1),
        }
        checks["loop_consistent"] = loop["consistent"]

    if not results:
        raise ValueError("config contains no analyzable sections")
    config_echo = {"config_path": str(path), "config": data, "format": args.format}
    report = _envelope("causal", config_echo, results, checks)
    return report, None


def _render_csv(payload: tuple[list[str], list[list]]) -> str:
    header, rows = payload
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


_COMMANDS = {
    "pr-signal": cmd_pr_signal,
    "tsirelson": cmd_tsirelson,
    "ghz-signal": cmd_ghz_signal,
    "ghz-algebra": cmd_ghz_algebra,
    "jamming": cmd_jamming,
    "causal": cmd_causal,
}


def _add_output_flags(sp) -> None:
    sp.add_argument("--out", default=None, help="write the report to this path instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default="json")


def _add_scenario_flags(sp) -> None:
    sp.add_argument("--n", type=int, default=6, help="rounds per trial (exact mode: at most 24)")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    _add_output_flags(sp)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrlab",
        description="Ensemble signaling experiments and causal-geometry checks for correlation boxes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pr-signal", help="classical-limit signaling test for the maximal bipartite box")
    _add_scenario_flags(sp)

    sp = sub.add_parser("tsirelson", help="classical-limit signaling test for the Bell-state box")
    _add_scenario_flags(sp)

    sp = sub.add_parser("ghz-signal", help="three-party rare-event signaling test")
    _add_scenario_flags(sp)

    sp = sub.add_parser("ghz-algebra", help="stabilizer, commutator, and assignment-search identities")
    _add_output_flags(sp)

    sp = sub.add_parser("jamming", help="binned third-party jamming statistics")
    sp.add_argument("--jim", choices=("x", "z"), required=True, help="Jim's measurement axis")
    sp.add_argument("--n", type=int, default=6, help="triplet rounds per trial")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    _add_output_flags(sp)

    sp = sub.add_parser("causal", help="light-cone geometry and causal-loop analysis")
    sp.add_argument("--config", required=True, help="JSON file with events, boost, and device maps")
    _add_output_flags(sp)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        report, csv_payload = handler(args)
        if args.format == "csv":
            if csv_payload is None:
                raise ValueError(f"csv output is not available for {args.command}")
            text = _render_csv(csv_payload)
        else:
            text = dump_report(report)
        _emit(text, args.out)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
