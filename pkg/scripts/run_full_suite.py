"""Run the full default battery through the command-line front end.

Thin wrapper over `uncertlab suite`; exit code 0 means every bound
check passed, 2 means some physics floor was violated.
"""

import argparse
import sys

from uncertlab.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="suite-out")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    return cli_main(["suite", "--out", args.out, "--seed", str(args.seed)])


if __name__ == "__main__":
    sys.exit(main())
