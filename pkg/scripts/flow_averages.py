"""Symmetric time averages of the suspension flows at growing T."""
from dataclasses import dataclass

from leafavg.flows import FlowPoint, base_cosine, component_sign, suspension_preset, \
    time_average_series

from _common import parse_config, write_rows


@dataclass
class Config:
    """Time averages for the rotation, Keane and reducible presets."""
    x: float = 0.1
    y: float = 0.2
    Tmax_exp: int = 4
    out: str = ""


def main(cfg: Config):
    Ts = [10.0 ** e for e in range(1, cfg.Tmax_exp + 1)]
    rows = []
    for preset, psi in [("rotation", base_cosine()), ("keane", base_cosine()),
                        ("reducible", component_sign())]:
        s = suspension_preset(preset)
        ser = time_average_series(s, psi, FlowPoint(cfg.x, cfg.y), Ts)
        rows += [(preset, T, v, e) for T, v, e in zip(ser.indices, ser.values, ser.errors)]
    write_rows(cfg.out, ["preset", "T", "average", "error"], rows)


if __name__ == "__main__":
    main(parse_config(Config))
