"""Shared helpers: a dataclass config filled from the command line, and CSV output."""
import argparse
import csv
import dataclasses
import sys
from pathlib import Path


def parse_config(cls, argv=None):
    ap = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        ap.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=type(f.default),
                        default=f.default)
    return cls(**vars(ap.parse_args(argv)))


def write_rows(path, header, rows):
    """Write CSV to path, or to stdout when path is empty."""
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        fh = open(path, "w", newline="")
    else:
        fh = sys.stdout
    w = csv.writer(fh)
    w.writerow(header)
    w.writerows(rows)
    if path:
        fh.close()
