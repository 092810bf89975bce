"""Mesh refinement study of the corner plug boundary distances."""
import time
from dataclasses import dataclass

from leafavg.geometry import build_corner_plug

from _common import parse_config, write_rows


@dataclass
class Config:
    """Boundary-to-boundary distances for a sequence of mesh sizes."""
    alpha: float = 0.25
    hs: str = "0.08,0.04,0.02"
    out: str = ""


def main(cfg: Config):
    rows = []
    for h in (float(v) for v in cfg.hs.split(",")):
        t0 = time.perf_counter()
        plug = build_corner_plug(cfg.alpha, h)
        for (a, b), (lo, hi) in sorted(plug.boundary_distances().items()):
            rows.append((h, f"{a}-{b}", lo, hi, plug.expected_distance,
                         round(time.perf_counter() - t0, 2)))
    write_rows(cfg.out, ["h", "pair", "min", "max", "expected", "seconds"], rows)


if __name__ == "__main__":
    main(parse_config(Config))
