"""Sphere-to-ball ratios lambda_n for F_2, Z and Z^2 orbits."""
import math
from dataclasses import dataclass

from leafavg.actions1d import TorusAction, make_torus, rotation_action
from leafavg.group_core import FreeGroupAction, Word, lambda_series

from _common import parse_config, write_rows


@dataclass
class Config:
    """lambda_n for a free, a cyclic and a rank-two abelian orbit."""
    n_free: int = 12
    n_abelian: int = 200
    out: str = ""


def main(cfg: Config):
    rows = []
    s = lambda_series(FreeGroupAction(2), Word(()), cfg.n_free)
    rows += [("F2", n, v) for n, v in zip(s.indices, s.values)]
    s = lambda_series(rotation_action(math.sqrt(2) - 1), 0.0, cfg.n_abelian)
    rows += [("Z", n, v) for n, v in zip(s.indices, s.values)]
    R = make_torus([[math.sqrt(2), math.sqrt(3)], [math.sqrt(5), math.sqrt(7)]])
    s = lambda_series(TorusAction(R), (0.0, 0.0), min(cfg.n_abelian, 60))
    rows += [("Z2", n, v) for n, v in zip(s.indices, s.values)]
    write_rows(cfg.out, ["group", "n", "lambda"], rows)


if __name__ == "__main__":
    main(parse_config(Config))
