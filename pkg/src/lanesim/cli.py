"""Command-line harness: evaluate, score, replay, map-validate.

Exit codes: 0 on success, 2 on validation errors (bad maps, bad arguments,
degenerate score inputs), 1 on runtime failures.
"""
from __future__ import annotations

import argparse
import sys

from .harness import Campaign, replay_command, run_evaluation, score_command
from .mapdata import MapInvariantError, MapSchemaError, load_scenario
from .metrics import DegenerateWeightError
from .observation import VARIANTS
from .policies import POLICY_NAMES


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lanesim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="run a seeded evaluation campaign")
    ev.add_argument("--scenario", action="append", default=None,
                    help="scenario name or map file (repeatable; default loop_intersection)")
    ev.add_argument("--policy", default="pure_pursuit", choices=POLICY_NAMES)
    ev.add_argument("--sims", type=int, default=32, help="simulations per scenario")
    ev.add_argument("--steps", type=int, default=1200, help="steps per simulation")
    ev.add_argument("--seed", type=int, default=0, help="base seed; sim k uses seed+k")
    ev.add_argument("--out", default="eval_out", help="output directory")
    ev.add_argument("--variant", default="M0", choices=VARIANTS)
    ev.add_argument("--agents", type=int, default=4)
    ev.add_argument("--jobs", type=int, default=1, help="parallel simulation workers")
    ev.add_argument("--model-label", default=None, help="model column value in the CSV")

    sc = sub.add_parser("score", help="composite scores from a metrics CSV")
    sc.add_argument("metrics_csv")
    sc.add_argument("--json", dest="json_out", default=None, help="also write a JSON report")

    rp = sub.add_parser("replay", help="render a trajectory log to SVG frames")
    rp.add_argument("log")
    rp.add_argument("--scenario", default=None, help="must match the log's recorded scenario")
    rp.add_argument("--out", default="replay_out")
    rp.add_argument("--every", type=int, default=1, help="render every k-th frame")

    mv = sub.add_parser("map-validate", help="load and validate a scenario map")
    mv.add_argument("scenario", help="scenario name or map file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "evaluate":
            scenarios = tuple(args.scenario) if args.scenario else ("loop_intersection",)
            campaign = Campaign(
                scenarios=scenarios,
                policy=args.policy,
                num_sims=args.sims,
                steps=args.steps,
                base_seed=args.seed,
                out_dir=args.out,
                variant=args.variant,
                num_agents=args.agents,
                jobs=args.jobs,
                model_label=args.model_label,
            )
            run_evaluation(campaign)
            print(f"wrote {args.out}/metrics.csv")
        elif args.command == "score":
            report = score_command(args.metrics_csv, json_out=args.json_out)
            print(report, end="")
        elif args.command == "replay":
            frames = replay_command(args.log, scenario=args.scenario, out_dir=args.out, every=args.every)
            print(f"wrote {len(frames)} frames to {args.out}")
        elif args.command == "map-validate":
            smap = load_scenario(args.scenario)
            print(
                f"OK: {smap.name}: {len(smap.lanelets)} lanelets, "
                f"{len(smap.reference_paths)} reference paths, bounds "
                f"[{smap.bounds[0]:.2f}, {smap.bounds[1]:.2f}, {smap.bounds[2]:.2f}, {smap.bounds[3]:.2f}]"
            )
    except (MapSchemaError, MapInvariantError, DegenerateWeightError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
