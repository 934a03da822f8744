#!/usr/bin/env python3
"""Download the small SNAP datasets used by the optional reproduction tests.

The scoda binary itself never touches the network; this standalone helper
fetches the Amazon and DBLP graphs with their ground-truth communities into
./data (or the directory given by --dest / SCODA_DATA_DIR) and gunzips them.

Usage:
    python scripts/fetch_snap.py [--dest data] [--datasets amazon,dblp]
"""

import argparse
import gzip
import os
import shutil
import sys
import urllib.request
from pathlib import Path

BASE = "https://snap.stanford.edu/data"

FILES = {
    "amazon": [
        "bigdata/communities/com-amazon.ungraph.txt.gz",
        "bigdata/communities/com-amazon.all.dedup.cmty.txt.gz",
    ],
    "dblp": [
        "bigdata/communities/com-dblp.ungraph.txt.gz",
        "bigdata/communities/com-dblp.all.cmty.txt.gz",
    ],
}


def fetch(url: str, dest: Path) -> None:
    gz_path = dest / Path(url).name
    txt_path = gz_path.with_suffix("")
    if txt_path.exists():
        print(f"already present: {txt_path}")
        return
    print(f"downloading {url}")
    with urllib.request.urlopen(url) as resp, open(gz_path, "wb") as out:
        shutil.copyfileobj(resp, out)
    print(f"decompressing  {gz_path}")
    with gzip.open(gz_path, "rb") as src, open(txt_path, "wb") as out:
        shutil.copyfileobj(src, out)
    gz_path.unlink()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--dest",
        default=os.environ.get("SCODA_DATA_DIR", "data"),
        help="target directory (default: ./data or SCODA_DATA_DIR)",
    )
    parser.add_argument(
        "--datasets",
        default="amazon,dblp",
        help="comma list from: " + ",".join(FILES),
    )
    args = parser.parse_args()
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    for name in args.datasets.split(","):
        if name not in FILES:
            print(f"unknown dataset {name!r}", file=sys.stderr)
            return 1
        for rel in FILES[name]:
            fetch(f"{BASE}/{rel}", dest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
