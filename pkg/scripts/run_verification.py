"""Run the randomized proposition suite and witness checks, writing a JSON report.

    python3 scripts/run_verification.py --n 200 --n-qutrit 50 --restarts 4 --out results/verification.json
"""
import argparse
import json
import time
from pathlib import Path

from cop.manifold_opt import OptimizerConfig
from cop.verify import PROPS, run_suite, witness_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--props", default="all")
    ap.add_argument("--n", type=int, default=200, help="qubit samples per proposition")
    ap.add_argument("--n-qutrit", type=int, default=50)
    ap.add_argument("--n-pair", type=int, default=50, help="samples for the two-system checks P7 and P8")
    ap.add_argument("--restarts", type=int, default=4)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--out", default="results/verification.json")
    args = ap.parse_args()

    props = PROPS if args.props == "all" else tuple(args.props.split(","))
    counts = {}
    for p in props:
        counts[(p, 2)] = args.n_pair if p in ("P7", "P8") else args.n
        counts[(p, 3)] = args.n_qutrit
    config = OptimizerConfig(restarts=args.restarts, seed=args.seed)

    t0 = time.perf_counter()
    reports = run_suite(props, counts, (2, 3), args.seed, config, threads=args.threads)
    reports.append(witness_checks(config))
    elapsed = time.perf_counter() - t0
    for r in reports:
        print(r.summary())
    print(f"total {elapsed:.0f}s")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"seed": args.seed, "restarts": args.restarts, "seconds": elapsed,
                               "reports": [r.to_dict() for r in reports]}, indent=2, default=float))


if __name__ == "__main__":
    main()
