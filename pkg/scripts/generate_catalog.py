#!/usr/bin/env python3
"""Regenerate the shipped real-form catalog from the family formulas.

Usage: python scripts/generate_catalog.py [--check]

--check verifies that the shipped file matches the generator output
(guards against drift between families.py and the data file).
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from restweyl import families
from restweyl.linalg import frac_str
from restweyl.realform import CATALOG_SCHEMA, CATALOG_VERSION

OUT = Path(__file__).resolve().parent.parent / "src/restweyl/data/catalog_v1.json"


def render() -> str:
    entries = []
    for rec in families.default_catalog_entries():
        rec = dict(rec)
        rec["projection"] = [[frac_str(x) for x in row]
                             for row in rec["projection"]]
        entries.append(rec)
    payload = {"schema": CATALOG_SCHEMA, "version": CATALOG_VERSION,
               "entries": entries}
    return json.dumps(payload, indent=1) + "\n"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    text = render()
    if args.check:
        if OUT.read_text() != text:
            print("catalog file is stale; rerun scripts/generate_catalog.py")
            return 1
        print("catalog file is up to date")
        return 0
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(text)
    print(f"wrote {OUT} ({len(json.loads(text)['entries'])} entries)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
