#!/usr/bin/env python3
"""Single-threaded prompt-generation throughput (label + prune + sample) on a
1024x1024 synthetic coarse mask. Target: >= 10 images/s; hard floor 5."""

import argparse
import sys

from maskprompt.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    return cli_main(["bench", "--size", str(args.size),
                     "--repeat", str(args.repeat), "--seed", str(args.seed)])


if __name__ == "__main__":
    sys.exit(main())
