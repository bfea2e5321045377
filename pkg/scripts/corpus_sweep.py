"""Summarize every corpus poset into a CSV table."""
import os
import sys
from pathlib import Path

import pandas as pd
from progress.bar import Bar

# Add parent directory to path to import from hibicone
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
from hibicone.checks import run_checks
from hibicone.classgroup import class_group_rank
from hibicone.corpus import CORPUS_NAMES, corpus_poset
from hibicone.hasse import choose_spanning_tree
from hibicone.poset import augment


def corpus_sweep(data_path: str | Path, jobs: int = 1) -> pd.DataFrame:
    """
    Run the property suite on the corpus and save one row per poset.

    Args:
        data_path: Output directory (receives corpus_summary.csv)
        jobs: Worker processes for the sweeps

    Returns:
        The summary table
    """
    rows = []
    with Bar(
        "Sweeping...", max=len(CORPUS_NAMES), suffix="%(percent)d%% | Elapsed: %(elapsed)ds"
    ) as bar:
        for name in CORPUS_NAMES:
            ap = augment(corpus_poset(name))
            tree = choose_spanning_tree(ap)
            report = run_checks(ap, name, jobs, tree=tree)
            oracle = report.result("oracle-equivalence")
            rows.append(
                {
                    "poset": name,
                    "elements": len(ap.base),
                    "edges": ap.n,
                    "rank": class_group_rank(ap),
                    "circuits": report.result("circuits").count,
                    "pure": ap.is_pure(),
                    "conic": oracle.count if oracle.passed else None,
                    "passed": report.passed,
                }
            )
            bar.next()

    summary = pd.DataFrame(rows)
    os.makedirs(data_path, exist_ok=True)
    summary.to_csv(f"{data_path}/corpus_summary.csv", index=False)
    return summary


if __name__ == "__main__":
    corpus_sweep("data")
