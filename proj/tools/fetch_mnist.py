#!/usr/bin/env python3
"""Download the MNIST t10k image/label files into data/mnist and check them.

Tries the usual gzip mirrors first, then falls back to the MNIST-dir wheel on
PyPI, which ships the raw IDX files.
"""

import argparse
import gzip
import hashlib
import io
import json
import pathlib
import sys
import urllib.request
import zipfile

FILES = {
    "t10k-images.idx3-ubyte": "2646ac647ad5339dbf082846283269ea",
    "t10k-labels.idx1-ubyte": "27ae3e4e09519cfbb04c329615203637",
}
GZ_NAMES = {"t10k-images.idx3-ubyte": "t10k-images-idx3-ubyte.gz", "t10k-labels.idx1-ubyte": "t10k-labels-idx1-ubyte.gz"}
MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
]
WHEEL_INDEX = "https://pypi.org/pypi/MNIST-dir/json"


def fetch(url, timeout=60):
    with urllib.request.urlopen(url, timeout=timeout) as r:
        return r.read()


def from_mirrors():
    for base in MIRRORS:
        try:
            return {name: gzip.decompress(fetch(base + GZ_NAMES[name])) for name in FILES}
        except Exception as e:  # noqa: BLE001 - any failure moves on to the next source
            print(f"  {base}: {e}", file=sys.stderr)
    return None


def from_wheel():
    try:
        meta = json.loads(fetch(WHEEL_INDEX))
        url = next(u["url"] for u in meta["urls"] if u["url"].endswith(".whl"))
        wheel = zipfile.ZipFile(io.BytesIO(fetch(url, timeout=300)))
    except Exception as e:  # noqa: BLE001
        print(f"  PyPI wheel: {e}", file=sys.stderr)
        return None
    out = {}
    for member in wheel.namelist():
        base = pathlib.PurePosixPath(member).name.replace("-idx", ".idx")
        if base.endswith(".gz"):
            base, data = base[:-3], gzip.decompress(wheel.read(member))
        else:
            data = wheel.read(member) if base in FILES else None
        if base in FILES and data is not None:
            out[base] = data
    return out if len(out) == len(FILES) else None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "mnist", type=pathlib.Path)
    args = ap.parse_args()

    files = from_mirrors() or from_wheel()
    if not files:
        sys.exit("could not download the MNIST test set from any source")
    args.out.mkdir(parents=True, exist_ok=True)
    for name, data in files.items():
        digest = hashlib.md5(data).hexdigest()
        if digest != FILES[name]:
            sys.exit(f"{name}: md5 {digest}, expected {FILES[name]}")
        (args.out / name).write_bytes(data)
        print(f"{args.out / name}  {len(data)} bytes  md5 ok")


if __name__ == "__main__":
    main()
