"""Run every verification suite over several seeds and print a table.

    python scripts/run_acceptance.py --seeds 0,1,2,3,4,5 [--json out.json]

Exit status is 0 only when every suite passes for every seed within its
time limit.
"""

import argparse
import json
import sys

from gradedqs.suites import DEFAULT_SEED, SUITES, SuiteConfig, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", default=",".join(str(DEFAULT_SEED + k) for k in range(6)))
    ap.add_argument("--suites", default=",".join(SUITES))
    ap.add_argument("--json", dest="json_path")
    args = ap.parse_args(argv)
    seeds = [int(s) for s in args.seeds.split(",")]
    names = args.suites.split(",")

    rows, ok = [], True
    print(f"{'#':>2}  {'suite':<14}{'trials':>8}{'fail':>6}{'slowest':>10}{'limit':>7}  verdict")
    for number, name in enumerate(names, 1):
        limit = SUITES[name].time_limit
        reports = [run_suite(name, SuiteConfig(seed=s)) for s in seeds]
        trials = sum(r.trials for r in reports)
        fails = sum(len(r.failures) for r in reports)
        slowest = max(r.elapsed for r in reports)
        passed = fails == 0 and slowest < limit
        ok &= passed
        print(f"{number:>2}  {name:<14}{trials:>8}{fails:>6}{slowest:>9.2f}s{limit:>6}s  {'PASS' if passed else 'FAIL'}")
        rows.append({
            "suite": name,
            "seeds": seeds,
            "reports": [r.to_json(True) for r in reports],
            "passed": passed,
        })
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
