#!/usr/bin/env python3
"""Write a small two-class Fashion-MNIST subset as IDX files.

The pixel source is the `fashion-mnist` npm package (MIT), which ships the
dataset as one JSON file per class: src/clothes/<class>.json with
{"data": [[784 ints], ...]}. Fetch it with `npm pack fashion-mnist`.
"""
import argparse
import json
import struct
from pathlib import Path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("package_dir", type=Path, help="unpacked npm package root")
    ap.add_argument("out_prefix", type=Path)
    ap.add_argument("--classes", type=int, nargs="+", default=[0, 1])
    ap.add_argument("--per-class", type=int, default=100)
    args = ap.parse_args()

    per_class = []
    for c in args.classes:
        data = json.loads((args.package_dir / "src" / "clothes" / f"{c}.json").read_text())["data"]
        per_class.append(data[: args.per_class])

    images, labels = [], []
    for i in range(args.per_class):
        for label, rows in enumerate(per_class):
            images.append(rows[i])
            labels.append(label)

    img_path = Path(f"{args.out_prefix}-images-idx3-ubyte")
    lbl_path = Path(f"{args.out_prefix}-labels-idx1-ubyte")
    with img_path.open("wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for im in images:
            f.write(bytes(im))
    with lbl_path.open("wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {len(images)} images to {img_path} and {lbl_path}")


if __name__ == "__main__":
    main()
