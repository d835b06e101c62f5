#!/usr/bin/env python3
"""Write seeded benchmark instances as JSON documents (one file per kind and seed)."""
from __future__ import annotations

import argparse
from pathlib import Path

from rcg.core.logging_config import get_logger, setup_logging
from rcg.features.objectives import ProblemKind, make_instance, save_instance

log = get_logger(__name__)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("data/instances"))
    parser.add_argument("--seeds", type=int, default=10, help="seeds 0..N-1")
    parser.add_argument("--kinds", nargs="*", default=[k.value for k in ProblemKind])
    args = parser.parse_args()

    setup_logging()
    args.out.mkdir(parents=True, exist_ok=True)
    for kind in args.kinds:
        for seed in range(args.seeds):
            inst = make_instance(kind, seed)
            save_instance(inst, args.out / f"{inst.id}.json")
    log.info("Wrote %d instances to %s", len(args.kinds) * args.seeds, args.out)


if __name__ == "__main__":
    main()
