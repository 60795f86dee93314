#!/usr/bin/env python3
# Copyright 2026 The MLGCL Authors
# SPDX-License-Identifier: Apache-2.0
"""Convert the Planetoid citation datasets (Cora, Citeseer, Pubmed) into the
directory layout read by `mlgcl`:

    edges.tsv  features.bin  labels.tsv  splits.json

Usage:
    fetch_planetoid.py cora --out data/cora                 # downloads raw files
    fetch_planetoid.py cora --raw-dir raw/ --out data/cora  # uses local ind.cora.* files

The public split is kept: the first 20 labelled nodes per class for training,
the next 500 nodes for validation and the 1000 listed test nodes.
"""

import argparse
import json
import pickle
import struct
import sys
import urllib.request
from pathlib import Path

import numpy as np
import scipy.sparse as sp

BASE_URL = "https://github.com/kimiyoung/planetoid/raw/master/data"
PARTS = ("x", "y", "tx", "ty", "allx", "ally", "graph")
MAGIC = b"MLGC"


def download(name, raw_dir):
    raw_dir.mkdir(parents=True, exist_ok=True)
    for part in PARTS + ("test.index",):
        target = raw_dir / f"ind.{name}.{part}"
        if target.exists():
            continue
        url = f"{BASE_URL}/ind.{name}.{part}"
        print(f"fetching {url}", file=sys.stderr)
        with urllib.request.urlopen(url, timeout=60) as resp:
            target.write_bytes(resp.read())


def load_raw(name, raw_dir):
    objs = {}
    for part in PARTS:
        with open(raw_dir / f"ind.{name}.{part}", "rb") as f:
            objs[part] = pickle.load(f, encoding="latin1")
    test_index = [int(line) for line in (raw_dir / f"ind.{name}.test.index").read_text().split()]
    return objs, test_index


def to_dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m)


def assemble(objs, test_index, row_normalize):
    allx, tx = to_dense(objs["allx"]), to_dense(objs["tx"])
    ally, ty = np.asarray(objs["ally"]), np.asarray(objs["ty"])
    graph = objs["graph"]
    n_train = np.asarray(objs["y"]).shape[0]

    test_sorted = np.sort(test_index)
    # Citeseer lists test ids with gaps (isolated nodes); pad them with zero rows.
    full_range = np.arange(test_sorted.min(), test_sorted.max() + 1)
    tx_ext = np.zeros((len(full_range), tx.shape[1]), dtype=np.float64)
    ty_ext = np.zeros((len(full_range), ty.shape[1]), dtype=np.float64)
    tx_ext[test_sorted - test_sorted.min()] = tx_reorder(tx, test_index, test_sorted)
    ty_ext[test_sorted - test_sorted.min()] = tx_reorder(ty, test_index, test_sorted)

    features = np.vstack([allx, tx_ext])
    onehot = np.vstack([ally, ty_ext])
    n = max(features.shape[0], max(graph.keys()) + 1)
    if features.shape[0] < n:
        features = np.vstack([features, np.zeros((n - features.shape[0], features.shape[1]))])
        onehot = np.vstack([onehot, np.zeros((n - onehot.shape[0], onehot.shape[1]))])
    labels = onehot.argmax(axis=1)

    if row_normalize:
        sums = features.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        features = features / sums

    edges = set()
    for src, nbrs in graph.items():
        for dst in nbrs:
            if src != dst:
                edges.add((min(src, dst), max(src, dst)))

    splits = {
        "train": list(range(n_train)),
        "val": list(range(n_train, min(n_train + 500, allx.shape[0]))),
        "test": [int(i) for i in test_sorted],
    }
    return features, labels, sorted(edges), splits


def tx_reorder(rows, test_index, test_sorted):
    # Row r of tx belongs to node test_index[r]; return rows in sorted-id order.
    order = {node: r for r, node in enumerate(test_index)}
    return rows[[order[node] for node in test_sorted]]


def write_dataset(out, features, labels, edges, splits):
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "edges.tsv", "w") as f:
        for a, b in edges:
            f.write(f"{a}\t{b}\n")
    rows, cols = features.shape
    with open(out / "features.bin", "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", rows, cols))
        f.write(np.ascontiguousarray(features, dtype="<f4").tobytes())
    with open(out / "labels.tsv", "w") as f:
        for i, label in enumerate(labels):
            f.write(f"{i}\t{int(label)}\n")
    (out / "splits.json").write_text(json.dumps(splits) + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("name", choices=["cora", "citeseer", "pubmed"])
    parser.add_argument("--out", type=Path, required=True, help="output dataset directory")
    parser.add_argument("--raw-dir", type=Path, help="directory holding ind.<name>.* files (skips the download)")
    parser.add_argument("--no-row-normalize", action="store_true", help="keep raw feature counts")
    args = parser.parse_args(argv)

    raw_dir = args.raw_dir
    if raw_dir is None:
        raw_dir = args.out / "raw"
        download(args.name, raw_dir)
    objs, test_index = load_raw(args.name, raw_dir)
    features, labels, edges, splits = assemble(objs, test_index, not args.no_row_normalize)
    write_dataset(args.out, features, labels, edges, splits)
    print(f"{args.name}: {features.shape[0]} nodes, {len(edges)} edges, {features.shape[1]} features, "
          f"{labels.max() + 1} classes -> {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
