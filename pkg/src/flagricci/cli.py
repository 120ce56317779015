"""Command-line front end.

Commands: field, flow, portrait, equilibria, realize, orbit, collapse,
verify. Every option can also come from a declarative key=value config file
(--config); command-line switches win. Numbers in output files carry 17
significant digits so they round-trip to the exact float. Output files are
written atomically (temp file + rename) and runs are deterministic for a
fixed config and seed; no environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import verify as verify_mod
from .collapse import NonRealizableError, collapse_run
from .fields import (
    cone_form,
    cone_form_grad,
    projected_field,
    reduced_field,
    ricci_field,
)
from .flags import parse_flag
from .flow import classify_limit, find_equilibria, integrate
from .orbits import build_model, sample_orbit
from .realize import coeffs_to_psd, disk_membership, realizing_frame


def fmt(v: float) -> str:
    return "%.17g" % float(v)


def fmt_vec(v) -> str:
    return "(" + ", ".join(fmt(x) for x in np.asarray(v).ravel()) + ")"


def parse_point(text: str, dim: int = 3) -> np.ndarray:
    """Comma-separated coordinates; fractions like 1/2 are parsed exactly."""
    parts = [tok.strip() for tok in text.split(",")]
    if len(parts) != dim:
        raise ValueError("expected %d comma-separated values, got %r" % (dim, text))
    try:
        return np.array([float(Fraction(tok)) for tok in parts])
    except (ValueError, ZeroDivisionError):
        raise ValueError("bad coordinate in %r" % text) from None


def atomic_write(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_config(path: str) -> dict[str, str]:
    """Read a key = value config file; '#' starts a comment."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key = value" % (path, lineno))
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _flag_blocks(spec):
    if spec.family != "A":
        raise SystemExit(
            "error: orbit models are built for family A only (got %s)" % spec.label
        )
    return spec.params


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise SystemExit("error: missing required option --%s" % name.replace("_", "-"))


def cmd_field(args) -> int:
    spec = parse_flag(args.flag)
    x = parse_point(args.point)
    lines = [
        "flag = %s" % spec.label,
        "x = %s" % fmt_vec(x),
        "R = %s" % fmt_vec(ricci_field(spec, x)),
        "X = %s" % fmt_vec(projected_field(spec, x)),
        "F = %s" % fmt(cone_form(x)),
        "grad_F = %s" % fmt_vec(cone_form_grad(x)),
    ]
    print("\n".join(lines))
    return 0


def _trajectory_csv(traj) -> str:
    rows = ["t,x1,x2,x3,F,sum_residual"]
    for i in range(len(traj.times)):
        s = traj.states[i]
        rows.append(
            ",".join(
                [
                    fmt(traj.times[i]),
                    fmt(s[0]),
                    fmt(s[1]),
                    fmt(s[2]),
                    fmt(traj.f_values[i]),
                    fmt(traj.sum_residuals[i]),
                ]
            )
        )
    return "\n".join(rows) + "\n"


def cmd_flow(args) -> int:
    spec = parse_flag(args.flag)
    x0 = parse_point(args.point)
    traj = integrate(spec, x0, t_max=args.t_max, rtol=args.rtol, atol=args.atol)
    csv = _trajectory_csv(traj)
    if args.out:
        atomic_write(args.out, csv)
        print(
            "wrote %s (%d states, status %s)" % (args.out, len(traj.times), traj.status)
        )
    else:
        sys.stdout.write(csv)
    return 0


def cmd_portrait(args) -> int:
    spec = parse_flag(args.flag)
    n = args.grid
    if n < 1:
        raise SystemExit("error: grid must be at least 1")
    eqs = find_equilibria(spec, grid_n=max(args.eq_grid, 10))
    rows = ["u,v,Yu,Yv,in_domain,end_u,end_v,limit"]
    ticks = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.0])
    for u in ticks:
        for v in ticks:
            inside = u + v <= 1.0 + 1e-12
            if not inside:
                rows.append(
                    ",".join([fmt(u), fmt(v), "nan", "nan", "0", "nan", "nan", ""])
                )
                continue
            y = reduced_field(spec, (u, v))
            traj = integrate(
                spec,
                np.array([u, v, max(0.0, 1.0 - u - v)]),
                t_max=args.t_max,
                rtol=args.rtol,
                atol=args.atol,
            )
            eq = classify_limit(traj, eqs)
            label = "undecided" if eq is None else "eq(%s)" % ";".join(
                fmt(c) for c in eq.point
            )
            end = traj.final_state
            rows.append(
                ",".join(
                    [
                        fmt(u),
                        fmt(v),
                        fmt(y[0]),
                        fmt(y[1]),
                        "1",
                        fmt(end[0]),
                        fmt(end[1]),
                        label,
                    ]
                )
            )
    content = "\n".join(rows) + "\n"
    if args.out:
        atomic_write(args.out, content)
        print("wrote %s (%d rows)" % (args.out, n * n))
    else:
        sys.stdout.write(content)
    return 0


def cmd_equilibria(args) -> int:
    spec = parse_flag(args.flag)
    eqs = find_equilibria(spec, grid_n=args.grid, newton_tol=args.newton_tol)
    payload = json.dumps([e.as_dict() for e in eqs], indent=2)
    if args.out:
        atomic_write(args.out, payload + "\n")
        print("wrote %s (%d equilibria)" % (args.out, len(eqs)))
    else:
        print(payload)
    return 0


def cmd_realize(args) -> int:
    x = parse_point(args.point)
    membership = disk_membership(x)
    if membership == "outside" or np.min(x) < -1e-12:
        print(
            "error: point %s is outside the realizable region (F = %s)"
            % (fmt_vec(x), fmt(cone_form(x))),
            file=sys.stderr,
        )
        return 1
    frame = realizing_frame(np.clip(x, 0.0, None))
    payload = {
        "x": [float(v) for v in x],
        "F": float(cone_form(x)),
        "membership": membership,
        "mu_inverse": [[float(v) for v in row] for row in coeffs_to_psd(x)],
        "tau": [[float(v) for v in row] for row in frame],
        "H1_omega_coords": [float(v) for v in frame[:, 0]],
        "H2_omega_coords": [float(v) for v in frame[:, 1]],
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        atomic_write(args.out, text + "\n")
        print("wrote %s" % args.out)
    else:
        print(text)
    return 0


def cmd_orbit(args) -> int:
    spec = parse_flag(args.flag)
    model = build_model(*_flag_blocks(spec))
    if args.point is not None:
        x = parse_point(args.point)
        frame = realizing_frame(np.clip(x, 0.0, None))
        h1 = model.torus_element(frame[:, 0])
        h2 = model.torus_element(frame[:, 1])
    else:
        _require(args, "h1", "h2")
        h1 = model.torus_element(parse_point(args.h1, dim=2))
        h2 = model.torus_element(parse_point(args.h2, dim=2))
    cloud = sample_orbit(model, h1, h2, args.count, args.seed)
    text = json.dumps(cloud.as_dict())
    if args.out:
        atomic_write(args.out, text + "\n")
        print("wrote %s (%d points in su(%d)^2)" % (args.out, cloud.count, cloud.n_ambient))
    else:
        print(text)
    return 0


def cmd_collapse(args) -> int:
    spec = parse_flag(args.flag)
    model = build_model(*_flag_blocks(spec))
    x0 = parse_point(args.point)
    times = [float(Fraction(tok.strip())) for tok in args.times.split(",")]
    try:
        run = collapse_run(
            spec,
            model,
            x0,
            times,
            count=args.count,
            seed=args.seed,
            rtol=args.rtol,
            atol=args.atol,
        )
    except NonRealizableError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    rows = ["t,x1,x2,x3,hausdorff"]
    for i in range(len(run.times)):
        s = run.states[i]
        rows.append(
            ",".join(
                [fmt(run.times[i]), fmt(s[0]), fmt(s[1]), fmt(s[2]), fmt(run.distances[i])]
            )
        )
    content = "\n".join(rows) + "\n"
    if args.out:
        atomic_write(args.out, content)
        print(
            "wrote %s (limit %s, resolution %s)"
            % (args.out, fmt_vec(run.x_limit), fmt(run.resolution))
        )
    else:
        sys.stdout.write(content)
    return 0


def cmd_verify(args) -> int:
    results = verify_mod.run_all(fast=args.fast)
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print("[%s] %-*s  %s" % (status, width, r.name, r.detail))
        ok = ok and r.passed
    return 0 if ok else 1


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="flagricci",
        description="Ricci-flow lab for three-summand flag manifolds",
    )
    parser.add_argument("--config", help="key = value config file with option defaults")
    sub = parser.add_subparsers(dest="command", required=True)
    sub_map = {}

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=fn)
        sub_map[name] = p
        return p

    common_flag = dict(help="family string: A:m,n,p | D:ell | E")

    p = add("field", cmd_field, "evaluate the field and cone data at a point")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--point", help="x1,x2,x3 (fractions allowed)")

    p = add("flow", cmd_flow, "integrate the projected flow, write trajectory CSV")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--point", help="start point x1,x2,x3")
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--out")

    p = add("portrait", cmd_portrait, "grid of reduced-field vectors and endpoints")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--eq-grid", type=int, default=20)
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--out")

    p = add("equilibria", cmd_equilibria, "find equilibria, write JSON")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--grid", type=int, default=30)
    p.add_argument("--newton-tol", type=float, default=1e-12)
    p.add_argument("--out")

    p = add("realize", cmd_realize, "realize metric coefficients by a torus frame")
    p.add_argument("--point", help="x1,x2,x3 on the realizable disk")
    p.add_argument("--out")

    p = add("orbit", cmd_orbit, "sample an adjoint-orbit cloud, write JSON")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--point", help="realize this point and use its frame")
    p.add_argument("--h1", help="omega coordinates c1,c2 of the first torus direction")
    p.add_argument("--h2", help="omega coordinates of the second torus direction")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("collapse", cmd_collapse, "orbit-cloud distances along a collapsing flow")
    p.add_argument("--flag", **common_flag)
    p.add_argument("--point", help="start point on the realizable disk")
    p.add_argument("--times", help="comma-separated sample times")
    p.add_argument("--count", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--out")

    p = add("verify", cmd_verify, "run the full invariant suite")
    p.add_argument("--fast", action="store_true", help="smaller sample counts")

    return parser, sub_map


_REQUIRED = {
    "field": ("flag", "point"),
    "flow": ("flag", "point"),
    "portrait": ("flag",),
    "equilibria": ("flag",),
    "realize": ("point",),
    "orbit": ("flag",),
    "collapse": ("flag", "point", "times"),
    "verify": (),
}


def _coerce(action: argparse.Action, raw: str):
    if isinstance(action, argparse._StoreTrueAction):
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError("bad boolean %r for --%s" % (raw, action.dest))
        return low in ("true", "1", "yes")
    return action.type(raw) if action.type else raw


def main(argv=None) -> int:
    parser, sub_map = build_parser()
    args, _ = parser.parse_known_args(argv)
    try:
        if args.config:
            defaults = load_config(args.config)
            for action in sub_map[args.command]._actions:
                if action.dest in defaults:
                    action.default = _coerce(action, defaults.pop(action.dest))
            if defaults:
                raise ValueError(
                    "unknown config keys for %s: %s"
                    % (args.command, ", ".join(sorted(defaults)))
                )
        args = parser.parse_args(argv)
        _require(args, *_REQUIRED[args.command])
        return args.func(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
