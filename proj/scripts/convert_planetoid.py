#!/usr/bin/env python3
"""Convert the classic Cora/Citeseer release (paper_id-based .cites/.content
files) into the edge TSV + covariate CSV + label file layout this project
reads.

Usage: convert_planetoid.py cora.cites cora.content out_dir
"""
import sys
from pathlib import Path


def main() -> int:
    if len(sys.argv) != 4:
        print(__doc__)
        return 1
    cites, content, out_dir = sys.argv[1], sys.argv[2], Path(sys.argv[3])
    out_dir.mkdir(parents=True, exist_ok=True)

    ids, rows, labels = [], [], []
    with open(content) as f:
        for line in f:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 3:
                continue
            ids.append(parts[0])
            rows.append(parts[1:-1])
            labels.append(parts[-1])
    index = {pid: i for i, pid in enumerate(ids)}
    label_ids = {name: i for i, name in enumerate(sorted(set(labels)))}

    edges, skipped = [], 0
    with open(cites) as f:
        for line in f:
            parts = line.split()
            if len(parts) != 2:
                continue
            # "cited cititing" ordering in the raw files: flip to citing -> cited
            cited, citing = parts
            if citing in index and cited in index:
                edges.append((index[citing], index[cited]))
            else:
                skipped += 1

    with open(out_dir / "edges.tsv", "w") as f:
        for s, t in edges:
            f.write(f"{s}\t{t}\n")
    m = len(rows[0])
    with open(out_dir / "covariates.csv", "w") as f:
        f.write(",".join(f"c{j}" for j in range(m)) + "\n")
        for r in rows:
            f.write(",".join(r) + "\n")
    with open(out_dir / "labels.txt", "w") as f:
        for name in labels:
            f.write(f"{label_ids[name]}\n")
    print(f"n={len(ids)} edges={len(edges)} m={m} k={len(label_ids)} skipped_edges={skipped}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
