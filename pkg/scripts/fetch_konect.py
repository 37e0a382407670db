#!/usr/bin/env python3
"""
Fetch a KONECT bipartite network and unpack its edge list.

Usage: python scripts/fetch_konect.py NAME [--dest DIR]
e.g.   python scripts/fetch_konect.py dbpedia-location
"""

import argparse
import logging
import os
import shutil
import sys
import tarfile
import tempfile
import urllib.request

logger = logging.getLogger(__name__)

KONECT_URL = "http://konect.cc/files/download.tsv.{name}.tar.bz2"


def fetch(name: str, dest: str) -> str:
    """Download the archive and copy its out.* edge list to DEST/NAME.txt."""
    os.makedirs(dest, exist_ok=True)
    target = os.path.join(dest, f"{name}.txt")
    url = KONECT_URL.format(name=name)
    with tempfile.TemporaryDirectory() as tmp:
        archive = os.path.join(tmp, "network.tar.bz2")
        logger.info("Downloading %s", url)
        urllib.request.urlretrieve(url, archive)
        with tarfile.open(archive, "r:bz2") as tar:
            member = next((m for m in tar.getmembers() if os.path.basename(m.name).startswith("out.")), None)
            if member is None:
                raise FileNotFoundError(f"No out.* edge list in {url}")
            with tar.extractfile(member) as src, open(target, "wb") as dst:
                shutil.copyfileobj(src, dst)
    logger.info("Wrote %s", target)
    return target


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("name", help="KONECT network name")
    parser.add_argument("--dest", default="datasets")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        print(fetch(args.name, args.dest))
    except (OSError, tarfile.TarError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
