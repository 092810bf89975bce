"""Ball averages of a character under a Z-action on the 2-torus: quadrature vs closed form."""
import math
from dataclasses import dataclass

from leafavg.actions1d import make_torus
from leafavg.averages import character_ball_average, rotation_ball_average, torus_character

from _common import parse_config, write_rows


@dataclass
class Config:
    """beta_r of cos(2 pi x_1) for alpha = (sqrt 2, sqrt 3)."""
    rmax_exp: int = 4
    out: str = ""


def main(cfg: Config):
    R = make_torus([[math.sqrt(2), math.sqrt(3)]])
    phi = torus_character([1, 0])
    rows = []
    for e in range(0, cfg.rmax_exp + 1):
        r = 10.0 ** e
        v, err = rotation_ball_average(R, phi, (0.0, 0.0), r)
        cf = character_ball_average(R, [1, 0], (0.0, 0.0), r)
        rows.append((r, v, err, cf, 1.0 / (2 * math.pi * r * math.sqrt(2))))
    write_rows(cfg.out, ["r", "quadrature", "error", "closed_form", "rate_bound"], rows)


if __name__ == "__main__":
    main(parse_config(Config))
