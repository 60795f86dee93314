# Copyright 2026 The MLGCL Authors
# SPDX-License-Identifier: Apache-2.0
"""Runs tools/fetch_planetoid.py on a hand-built fake dataset and loads the
result with the mlgcl binary.

usage: test_fetch_planetoid.py <fetch_planetoid.py> <mlgcl binary>
"""

import pickle
import struct
import subprocess
import sys
import tempfile
from collections import defaultdict
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def onehot(labels, classes):
    out = np.zeros((len(labels), classes))
    out[np.arange(len(labels)), labels] = 1.0
    return out


def make_fake(raw):
    # 12 nodes, 3 classes. Nodes 0..5 are allx (0..2 labelled train), 6..7 are
    # unlabelled-train fillers, test ids are 8, 9, 11 listed out of order and
    # node 10 is an isolated gap like in Citeseer.
    feats = np.arange(12 * 4, dtype=np.float64).reshape(12, 4) % 5 + 1
    labels = np.array([0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2])
    test_ids = [11, 8, 9]
    allx = feats[:8]
    tx = feats[test_ids]
    graph = defaultdict(list)
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 11), (11, 0), (3, 3)]:
        graph[a].append(b)
        graph[b].append(a)
    graph[1].append(0)  # duplicate
    graph[10] = []
    parts = {
        "x": sp.csr_matrix(feats[:3]),
        "y": onehot(labels[:3], 3),
        "allx": sp.csr_matrix(allx),
        "ally": onehot(labels[:8], 3),
        "tx": sp.csr_matrix(tx),
        "ty": onehot(labels[test_ids], 3),
        "graph": graph,
    }
    for name, obj in parts.items():
        with open(raw / f"ind.fake.{name}", "wb") as f:
            pickle.dump(obj, f)
    (raw / "ind.fake.test.index").write_text("\n".join(map(str, test_ids)) + "\n")
    return feats, labels


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    script, binary = sys.argv[1], sys.argv[2]
    sys.path.insert(0, str(Path(script).parent))
    import fetch_planetoid

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        raw = tmp / "raw"
        raw.mkdir()
        feats, labels = make_fake(raw)
        out = tmp / "fake"

        objs, test_index = fetch_planetoid.load_raw("fake", raw)
        f, l, e, s = fetch_planetoid.assemble(objs, test_index, row_normalize=True)
        fetch_planetoid.write_dataset(out, f, l, e, s)

        check(f.shape == (12, 4), f"feature shape {f.shape}")
        expected = feats / feats.sum(axis=1, keepdims=True)
        expected[10] = 0.0
        check(np.allclose(f, expected), "features are not reordered into node-id order")
        expected_labels = labels.copy()
        expected_labels[10] = 0
        check((l == expected_labels).all(), f"labels {l}")
        check(s == {"train": [0, 1, 2], "val": [3, 4, 5, 6, 7], "test": [8, 9, 11]}, f"splits {s}")
        check((0, 1) in e and (3, 3) not in e and len(e) == len(set(e)), f"edges {e}")

        with open(out / "features.bin", "rb") as fh:
            magic, rows, cols = fh.read(4), *struct.unpack("<II", fh.read(8))
        check(magic == b"MLGC" and (rows, cols) == (12, 4), "features.bin header")

        run = subprocess.run(
            [binary, "train", "--data", str(out), "--out", str(tmp / "run"), "--set", "train.epochs=2",
             "--set", "model.dim=4", "--set", "aug.k=2"],
            capture_output=True, text=True)
        check(run.returncode == 0, f"mlgcl train failed: {run.stdout}{run.stderr}")
    print("ok")


if __name__ == "__main__":
    main()
