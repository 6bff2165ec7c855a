#!/usr/bin/env python3
"""Download classic clustering benchmark datasets and convert them to CSV.

The files live on the public benchmark page at cs.joensuu.fi/sipu/datasets.
Each dataset is whitespace-separated numeric text; some carry the ground
truth as a trailing integer column, others in a separate .pa file whose
header lines are skipped.  Converted files are points CSVs compatible with
``gopc cluster --input`` (label column appended when available).

Nothing in the test suite depends on this script; it exists so results on
the original benchmarks can be reproduced with the bundled generators'
summaries as a cross-check.

Usage:
    python3 scripts/fetch_benchmarks.py --list
    python3 scripts/fetch_benchmarks.py --dest data/ s1 jain spiral
    python3 scripts/fetch_benchmarks.py --dest data/ --all
"""

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

BASE = "https://cs.joensuu.fi/sipu/datasets"

# name -> (data file, labels: "inline" trailing column, a .pa file, or None)
DATASETS = {
    "s1": ("s1.txt", "s1-label.pa"),
    "s2": ("s2.txt", "s2-label.pa"),
    "a3": ("a3.txt", None),
    "unbalance": ("unbalance.txt", "unbalance-gt.pa"),
    "jain": ("jain.txt", "inline"),
    "spiral": ("spiral.txt", "inline"),
    "flame": ("flame.txt", "inline"),
    "aggregation": ("Aggregation.txt", "inline"),
    "compound": ("Compound.txt", "inline"),
    "pathbased": ("pathbased.txt", "inline"),
}


def fetch(url: str, dest: Path, timeout: float) -> None:
    if dest.exists():
        print(f"  kept    {dest} (already present)")
        return
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        dest.write_bytes(resp.read())
    print(f"  fetched {dest}")


def read_rows(path: Path):
    rows = []
    for line in path.read_text().splitlines():
        parts = line.split()
        if parts:
            rows.append(parts)
    return rows


def read_pa_labels(path: Path):
    """Label-per-line .pa file; header lines are non-numeric."""
    labels = []
    for line in path.read_text().splitlines():
        token = line.strip()
        if not token:
            continue
        try:
            labels.append(int(float(token)))
        except ValueError:
            continue  # header
    return labels


def convert(name: str, dest_dir: Path) -> Path:
    data_file, label_source = DATASETS[name]
    rows = read_rows(dest_dir / data_file)
    if label_source == "inline":
        points = [row[:-1] for row in rows]
        labels = [int(float(row[-1])) for row in rows]
    elif label_source is not None:
        points = rows
        labels = read_pa_labels(dest_dir / label_source)
        if len(labels) != len(rows):
            raise SystemExit(
                f"{name}: {len(labels)} labels for {len(rows)} points; "
                "ground-truth file layout changed?"
            )
    else:
        points, labels = rows, None
    out = dest_dir / f"{name}.csv"
    with open(out, "w") as fh:
        for i, row in enumerate(points):
            cells = list(row) + ([str(labels[i])] if labels is not None else [])
            fh.write(",".join(cells) + "\n")
    print(f"  wrote   {out} ({len(points)} rows{', labeled' if labels else ''})")
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("names", nargs="*", help="dataset names (see --list)")
    parser.add_argument("--all", action="store_true", help="fetch every known dataset")
    parser.add_argument("--list", action="store_true", help="print the registry and exit")
    parser.add_argument("--dest", default="benchmarks", help="download directory")
    parser.add_argument("--timeout", type=float, default=30.0)
    args = parser.parse_args(argv)

    if args.list:
        for name, (data_file, label_source) in sorted(DATASETS.items()):
            kind = {
                "inline": "labels in last column",
                None: "no ground truth",
            }.get(label_source, f"labels in {label_source}")
            print(f"{name:12s} {BASE}/{data_file}  ({kind})")
        return 0

    names = sorted(DATASETS) if args.all else args.names
    if not names:
        parser.error("give dataset names, --all, or --list")
    unknown = [n for n in names if n not in DATASETS]
    if unknown:
        parser.error(f"unknown datasets: {unknown}; try --list")

    dest_dir = Path(args.dest)
    dest_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name in names:
        data_file, label_source = DATASETS[name]
        print(f"{name}:")
        try:
            fetch(f"{BASE}/{data_file}", dest_dir / data_file, args.timeout)
            if label_source not in (None, "inline"):
                fetch(f"{BASE}/{label_source}", dest_dir / label_source, args.timeout)
            convert(name, dest_dir)
        except (urllib.error.URLError, OSError) as exc:
            print(f"  failed  {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
