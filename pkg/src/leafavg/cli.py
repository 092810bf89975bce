"""Command-line front end: one experiment per invocation, JSON or CSV on stdout,
optional artifacts plus manifest.json under --out.

Exit status: 0 on success (hypothesis violations are reported with a flag),
2 on schema or input errors, 3 when a resource cap is hit.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import averages, flows, group_core, suspension
from .actions1d import _num, action_from_config, make_torus
from .group_core import ResourceCapError, Word

EXIT_SCHEMA, EXIT_CAP = 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- helpers

def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Word):
        return str(o)
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default)


def _parse_json(text, what):
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except (TypeError, json.JSONDecodeError) as e:
        raise ConfigError(f"{what}: invalid JSON ({e})") from None


def _action(args):
    cfg = _parse_json(args.action, "--action")
    try:
        return action_from_config(cfg)
    except (KeyError, TypeError) as e:
        raise ConfigError(f"--action: missing or bad field {e}") from None


def _point(action, text):
    if isinstance(action, group_core.FreeGroupAction):
        return Word.parse(text or "")
    if text is None or text == "":
        return Fraction(0) if action.exact else 0.0
    v = _parse_json(text, "--y") if text.strip().startswith("[") else text
    if isinstance(v, list):
        return tuple(_num(x) for x in v)
    v = _num(v if isinstance(v, str) else v)
    return v if action.exact else float(v)


def _observable(args, action=None):
    if args.observable is None:
        free = isinstance(action, group_core.FreeGroupAction)
        return averages.constant(1.0) if free else averages.cosine(1)
    cfg = _parse_json(args.observable, "--observable")
    try:
        return averages.observable_from_config(cfg)
    except (KeyError, TypeError) as e:
        raise ConfigError(f"--observable: missing or bad field {e}") from None


def _plug(args):
    if getattr(args, "plug", None):
        cfg = _parse_json(args.plug, "--plug")
        try:
            return suspension.PlugSpec(**cfg)
        except TypeError as e:
            raise ConfigError(f"--plug: {e}") from None
    return suspension.plug_preset(args.preset)


class Output:
    """Collects stdout text and artifacts; writes the manifest when --out is set."""

    def __init__(self, out_dir):
        self.dir = Path(out_dir) if out_dir else None
        self.entries = []

    def emit(self, text: str):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")

    def artifact(self, name: str, text: str, meta: dict):
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        (self.dir / name).write_text(text)
        self.entries.append({"file": name, **meta})

    def finish(self, command: str, argv: list):
        if self.dir is None:
            return
        man = {"command": command, "argv": argv, "artifacts": self.entries}
        (self.dir / "manifest.json").write_text(_dump(man) + "\n")


def _result(out: Output, payload: dict, meta: dict):
    text = _dump(payload)
    out.emit(text)
    out.artifact("result.json", text + "\n", meta)


# ---------------------------------------------------------------- group commands

def cmd_ball(args, out):
    ball = group_core.enumerate_ball(args.k, args.n, args.cap)
    out.emit(str(len(ball)))
    out.artifact("ball.csv", group_core.ball_to_csv(ball), {"exact": True})
    out.artifact("result.json", _dump({"k": args.k, "n": args.n, "size": len(ball)}) + "\n",
                 {"exact": True})


def cmd_orbit(args, out):
    act = _action(args)
    y = _point(act, args.y)
    ob = group_core.orbit_ball(act, y, args.n, args.tol, args.cap)
    _result(out, {"sizes": [int(s) for s in ob.sizes], "tol": args.tol, "exact": act.exact},
            {"exact": act.exact, "tol": args.tol})
    out.artifact("orbit.csv", group_core.orbit_to_csv(ob, act), {"tol": args.tol})


def cmd_lambda(args, out):
    act = _action(args)
    s = group_core.lambda_series(act, _point(act, args.y), args.N, args.tol, args.cap)
    _result(out, s.to_dict(), {"exact": True, "tol": args.tol})
    out.artifact("lambda.csv", s.to_csv(), {"exact": True})


def cmd_folner(args, out):
    act = _action(args)
    y = _point(act, args.y)
    a = Word.parse(args.a)
    d = group_core.folner_defect(act, y, a, args.n, args.tol, args.cap)
    b = group_core.folner_bound(act, y, a, args.n, args.tol)
    _result(out, {"defect": d, "bound": b, "a": str(a), "n": args.n},
            {"tol": args.tol})


def cmd_ball_average(args, out):
    act = _action(args)
    phi = _observable(args, act)
    radii = [int(r) for r in args.radii.split(",")]
    s = averages.ball_average_series(act, phi, _point(act, args.y), radii, args.tol,
                                     classes=args.classes)
    _result(out, s.to_dict(), {"tol": args.tol, "error": "floating point summation"})
    out.artifact("ball_average.csv", s.to_csv(), {"tol": args.tol})


# ---------------------------------------------------------------- suspension commands

def cmd_sandwich(args, out):
    act = _action(args)
    b = suspension.sandwich_bounds(act, _point(act, args.y), _observable(args, act), _plug(args),
                                   args.r, args.tol, args.cap)
    _result(out, {"lower": b.lower, "upper": b.upper, "n": b.n, "inner_size": b.inner_size,
                  "outer_size": b.outer_size}, {"tol": args.tol})


def cmd_small_limits(args, out):
    act = _action(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", suspension.HypothesisWarning)
        rep = suspension.small_boundary_limits(act, _point(act, args.y), _observable(args, act),
                                               _plug(args), args.N, args.tol, args.cap,
                                               lambda_max=args.lambda_max)
    payload = {"limsupEstimate": rep.limsupEstimate, "liminfEstimate": rep.liminfEstimate,
               "gap": rep.gap, "lambdaEstimate": rep.lambdaEstimate,
               "hypothesis_warning": bool(rep.hypothesisWarning),
               "warnings": [str(w.message) for w in caught]}
    _result(out, payload, {"tol": args.tol, "window": rep.series.window_descriptor()})
    out.artifact("series.csv", rep.series.to_csv(), {"tol": args.tol})


def cmd_certificate(args, out):
    act = _action(args)
    cert = suspension.large_boundary_certificate(act, _point(act, args.y), _plug(args), args.N,
                                                 args.tol, args.cap)
    d = cert.to_dict()
    out.emit(_dump(d))
    out.artifact("certificate.json", _dump(d) + "\n", {"exact": True})


def cmd_product_check(args, out):
    from .geometry.sigma import assemble_sigma, sigma_product_check
    s = assemble_sigma(args.L, args.depth, args.h, args.delta)
    R1 = args.R1 if args.R1 is not None else 0.5 * s.delta_star
    try:
        rep, _ = sigma_product_check(s, R1)
    except suspension.HypothesisError as e:
        _result(out, {"hypothesis_violated": True, "message": str(e), "R1": R1}, {})
        return
    payload = {"R1": rep.R1, "bitwise_equal": rep.bitwise_equal, "limsup": rep.limsup,
               "liminf": rep.liminf, "gap": rep.gap, "radii": rep.base.indices,
               "values": rep.base.values, "average_bounds": rep.average_bounds,
               "hypothesis_violated": False}
    _result(out, payload, {"exact": "bitwise comparison", "mesh_h": args.h})


# ---------------------------------------------------------------- geometry commands

def _sigma_point(s, text):
    try:
        k, l, x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"point {text!r} must be 'k,l,x,y'") from None
    return s.vertex_at(int(k), int(l), x, y)


def cmd_sigma(args, out):
    from .geometry import sigma as sg
    s = sg.assemble_sigma(args.L, args.depth, args.h, args.delta)
    info = {"L": args.L, "depth": args.depth, "h": args.h, "vertices": s.mesh.n,
            "edges": int(s.mesh.u.size), "copies": len(s.copies), "delta_eff": s.delta_eff,
            "delta_star": s.delta_star, "vol_pants": s.vol_pants}
    if args.series:
        res = sg.oscillation_series(s)
        a, c = res.to_csv()
        out.emit("# radii 2kL\n" + a + "# radii 2kL-2Delta*\n" + c)
        meta = {"error": "graph-distance bound per radius", "threshold": res.threshold}
        out.artifact("series_2kL.csv", a, meta)
        out.artifact("series_2kL_minus_2delta.csv", c, meta)
        out.artifact("result.json", _dump({**info, "cancelling_integrals": res.integrals_cancelling,
                                           "symmetric_support": res.symmetric_support,
                                           "threshold": res.threshold}) + "\n", meta)
        return
    if args.distance:
        p, q = (_sigma_point(s, t) for t in args.distance)
        d, err = sg.geodesic_distance(s.mesh, p, q)
        info.update(distance=d, error_bound=err,
                    height_difference=abs(float(s.height[p] - s.height[q])))
    if args.ball:
        p = _sigma_point(s, args.ball)
        b = sg.metric_ball(s, p, args.r)
        phi = sg.make_phi(s)
        info.update(ball_vertices=int(b.vertices.size), ball_volume=b.volume,
                    phi_integral=sg.ball_integral(s, phi, b.vertices))
    _result(out, info, {"mesh_h": args.h})


def cmd_corner_plug(args, out):
    from .geometry.corner import build_corner_plug
    c = build_corner_plug(args.alpha, args.h)
    bd = c.boundary_distances()
    payload = {"alpha": c.alpha, "h": args.h, "lambda": c.lam, "arc_radius": c.arc_radius,
               "corners": c.corners, "expected": c.expected_distance,
               "distances": {f"{a}-{b}": {"min": lo, "max": hi} for (a, b), (lo, hi) in bd.items()},
               "dc_distance": c.meta["dc_distance"], "vertices": c.mesh.n}
    _result(out, payload, {"tol": "2% at h=0.02", "mesh_h": args.h})


def cmd_plug_tree(args, out):
    from .geometry.plugtree import plug_tree_distances
    r = plug_tree_distances(args.n, args.k, args.r0)
    _result(out, {"n": r.n, "k": r.k, "r0": r.r0, "distances": r.distances,
                  "tree_hops": r.tree_hops}, {"exact": True})


# ---------------------------------------------------------------- flow commands

def _flow_point(args, space):
    x = _num(args.x) if isinstance(args.x, str) else args.x
    return flows.FlowPoint(x if space.base.exact else float(x), float(args.y))


def cmd_flow(args, out):
    s = flows.suspension_preset(args.preset)
    z = _flow_point(args, s)
    if args.dt:
        csv_text = flows.trajectory_csv(s, z, args.t, args.dt)
        out.emit(csv_text)
        out.artifact("trajectory.csv", csv_text, {"error": "floating point"})
        return
    p = flows.flow(s, z, args.t)
    _result(out, {"x": float(p.x), "y": float(p.y), "t": args.t}, {"error": "floating point"})


def _flow_observable(name):
    if name == "component_sign":
        return flows.component_sign()
    if name.startswith("cos"):
        return flows.base_cosine(int(name[3:] or 1))
    raise ConfigError(f"unknown flow observable {name!r}")


def cmd_time_average(args, out):
    s = flows.suspension_preset(args.preset)
    psi = _flow_observable(args.observable)
    Ts = [float(t) for t in args.T.split(",")]
    ser = flows.time_average_series(s, psi, _flow_point(args, s), Ts)
    _result(out, ser.to_dict(), {"error": "per-sample quadrature error"})
    out.artifact("time_average.csv", ser.to_csv(), {})


def cmd_rotation_average(args, out):
    rows = _parse_json(args.alpha, "--alpha")
    R = make_torus([[_num(v) for v in row] for row in rows])
    m = [int(v) for v in args.m.split(",")]
    x = np.array([float(v) for v in args.x.split(",")])
    phi = averages.torus_character(m)
    res = []
    for r in (float(v) for v in args.r.split(",")):
        val, err = averages.rotation_ball_average(R, phi, x, r)
        exact = averages.character_ball_average(R, m, x, r)
        res.append({"r": r, "quadrature": val, "error": err, "closed_form": exact,
                    "difference": abs(val - exact)})
    _result(out, {"results": res}, {"tol": "quadrature error per radius"})


# ---------------------------------------------------------------- parser

def _add_action(p, default='{"type": "free", "k": 2}'):
    p.add_argument("--action", default=default, help="action config as JSON")
    p.add_argument("--y", default=None, help="base point (word, number or JSON list)")
    p.add_argument("--tol", type=float, default=group_core.DEFAULT_TOL)
    p.add_argument("--cap", type=int, default=group_core.DEFAULT_CAP)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leafavg", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file whose keys set the subcommand options")
    ap.add_argument("--out", help="directory for artifacts and manifest.json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="size of the word ball G_n in F_k")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--cap", type=int, default=group_core.DEFAULT_CAP)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("orbit", help="orbit ball sizes |G_n(y)|")
    _add_action(p)
    p.add_argument("--n", type=int, default=5)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("lambda", help="boundary ratios lambda_n")
    _add_action(p)
    p.add_argument("--N", type=int, default=10)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("folner", help="Folner defect of G_n(y) under a word")
    _add_action(p)
    p.add_argument("--a", default="a1")
    p.add_argument("--n", type=int, default=5)
    p.set_defaults(func=cmd_folner)

    obs = None  # constant on words, cos(2 pi y) on the circle
    p = sub.add_parser("ball-average", help="ball averages beta_n phi(y)")
    _add_action(p)
    p.add_argument("--observable", default=obs)
    p.add_argument("--radii", default="1,2,3,4")
    p.add_argument("--classes", action="store_true")
    p.set_defaults(func=cmd_ball_average)

    for name, func in (("sandwich", cmd_sandwich), ("small-limits", cmd_small_limits),
                       ("certificate", cmd_certificate)):
        p = sub.add_parser(name)
        _add_action(p)
        p.add_argument("--preset", default="f2-thin" if name == "certificate" else "cylinder")
        p.add_argument("--plug", help="PlugSpec fields as JSON")
        if name != "certificate":
            p.add_argument("--observable", default=obs)
        if name == "sandwich":
            p.add_argument("--r", type=float, default=100.0)
        else:
            p.add_argument("--N", type=int, default=12)
        if name == "small-limits":
            p.add_argument("--lambda-max", dest="lambda_max", type=float, default=0.05)
        p.set_defaults(func=func)

    def sigma_opts(p):
        p.add_argument("--L", type=float, default=25.0)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--h", type=float, default=0.05)
        p.add_argument("--delta", type=float, default=0.1)

    p = sub.add_parser("sigma", help="build Sigma; distances, balls or the Phi series")
    sigma_opts(p)
    p.add_argument("--series", action="store_true")
    p.add_argument("--distance", nargs=2, metavar="K,L,X,Y")
    p.add_argument("--ball", metavar="K,L,X,Y")
    p.add_argument("--r", type=float, default=10.0)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("product-check", help="Sigma series extended by a factor of diameter R1")
    sigma_opts(p)
    p.add_argument("--R1", type=float, default=None)
    p.set_defaults(func=cmd_product_check)

    p = sub.add_parser("corner-plug", help="boundary distances of the corner plug")
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--h", type=float, default=0.02)
    p.set_defaults(func=cmd_corner_plug)

    p = sub.add_parser("plug-tree", help="distances between the outer boundaries of X")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--r0", type=float, default=1.0)
    p.set_defaults(func=cmd_plug_tree)

    p = sub.add_parser("flow", help="suspension flow f^t(x, y), or a trajectory CSV with --dt")
    p.add_argument("--preset", default="rotation")
    p.add_argument("--x", default="0.1")
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("time-average", help="symmetric time averages over [-T, T]")
    p.add_argument("--preset", default="rotation")
    p.add_argument("--observable", default="cos1")
    p.add_argument("--x", default="0.1")
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--T", default="10,100,1000")
    p.set_defaults(func=cmd_time_average)

    p = sub.add_parser("rotation-average", help="torus rotation ball averages of a character")
    p.add_argument("--alpha", default='[["sqrt(2)", "sqrt(3)"]]')
    p.add_argument("--m", default="1,0")
    p.add_argument("--x", default="0,0")
    p.add_argument("--r", default="100,1000")
    p.set_defaults(func=cmd_rotation_average)
    return ap


def _apply_config(ap, args, path):
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"--config: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("--config must hold a JSON object")
    for key, val in cfg.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest) or dest in ("func", "command", "config"):
            raise ConfigError(f"--config: unknown option {key!r} for {args.command}")
        if isinstance(val, (dict, list)) and dest in ("action", "observable", "plug", "alpha"):
            val = json.dumps(val)
        setattr(args, dest, val)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Output(args.out)
    try:
        if args.config:
            _apply_config(ap, args, args.config)
        args.func(args, out)
    except (ResourceCapError, MemoryError) as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    out.finish(args.command, argv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
