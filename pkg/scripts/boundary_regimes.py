"""Small-boundary limits versus the large-boundary oscillation certificate."""
import json
import math
from dataclasses import dataclass

from leafavg.actions1d import rotation_action
from leafavg.averages import cosine
from leafavg.group_core import FreeGroupAction, Word
from leafavg.suspension import (PlugSpec, large_boundary_certificate, plug_preset,
                                sandwich_bounds, small_boundary_limits)

from _common import parse_config


@dataclass
class Config:
    """Cylinder plug over an irrational rotation, thin plug over the free orbit."""
    alpha: float = math.sqrt(2) - 1
    N_small: int = 1000
    N_free: int = 12
    r: float = 1000.0


def main(cfg: Config):
    act = rotation_action(cfg.alpha)
    cyl = PlugSpec(R=1.0, D=1.0, m0=0.5, m1=0.5, volX=1.0)
    b = sandwich_bounds(act, 0.0, cosine(), cyl, cfg.r)
    rep = small_boundary_limits(act, 0.0, cosine(), cyl, cfg.N_small)
    cert = large_boundary_certificate(FreeGroupAction(2), Word(()), plug_preset("f2-thin"),
                                      cfg.N_free)
    ctrl = large_boundary_certificate(act, 0.0, plug_preset("f2-thin"), 40)
    print(json.dumps({
        "small_boundary": {"sandwich": [b.lower, b.upper], "limsup": rep.limsupEstimate,
                           "liminf": rep.liminfEstimate, "gap": rep.gap},
        "large_boundary": {"limsupLower": cert.limsupLower, "upper": cert.upper,
                           "gap": cert.gap},
        "cyclic_control_gap": ctrl.gap,
    }, indent=2, sort_keys=True))


if __name__ == "__main__":
    main(parse_config(Config))
