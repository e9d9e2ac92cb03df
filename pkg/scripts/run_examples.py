"""Run the CLI over every shipped problem file, with the oracle where the budget allows."""
import sys
from pathlib import Path

from quiverbf.cli import main

problems = sorted((Path(__file__).resolve().parent.parent / "problems").glob("*.txt"))
for p in problems:
    print(f"== {p.name}")
    args = ["bfn", str(p)] if "appendix" not in p.name else ["decompose", str(p), "--dn-diagram"]
    if "--verify" in sys.argv[1:] and args[0] == "bfn":
        args.append("--verify")
    print(f"exit {main(args)}\n")
