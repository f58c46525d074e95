"""Command-line interface: ``teichspec {length,metric,experiment}``.

Exit codes: 0 success, 2 configuration error, 3 a checked inequality failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import hyptrig as H
from . import words as W
from .exceptions import NotInThickPart, TeichspecError
from .geometry import HypStructure, ThickPartSpec, in_thick_part, lengths
from .spectrum import K_ratio, co_monotone, convergence_study, d_bar, d_double, d_L, d_weak, delta_L
from .surface import (
    ArcClass,
    CurveClass,
    SurfaceType,
    boundary_classes,
    canonical_connector,
    default_pants_decomposition,
    pants_arc_classes,
    slope_class,
    validate,
)

EXIT_OK, EXIT_CONFIG, EXIT_ASSERT = 0, 2, 3
THREADS_ENV = "TEICHSPEC_THREADS"
NUMERIC_FLOOR = 1e-7  # holonomy round-off allowed on top of slack


class ConfigError(Exception):
    pass


class CheckFailed(Exception):
    pass


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def write_csv(rows, header, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer")


def pmap(fn, items):
    """Order-preserving map, threaded when the environment asks for it."""
    n = threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


# -- config ---------------------------------------------------------------


def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {path}: {exc}")


def surface_type(cfg, default=None):
    s = cfg.get("surface", default)
    if s is None:
        raise ConfigError("missing [surface] table")
    try:
        st = SurfaceType(int(s.get("genus", 0)), int(s.get("punctures", 0)), int(s.get("boundary", 0)))
        return validate(st)
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"bad [surface]: {exc}")


def structure(cfg, key, st):
    t = cfg.get(key)
    if t is None:
        raise ConfigError(f"missing [{key}] table")
    pd = default_pants_decomposition(st)
    try:
        n = pd.n_curves
        return HypStructure(
            pd,
            t.get("curve_lengths", []),
            t.get("twists", [0.0] * n),
            t.get("boundary_lengths", []),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [{key}]: {exc}")


def bound_of(args, section, default):
    b = args.bound if args.bound is not None else section.get("bound", default)
    if not isinstance(b, int) or b < 1:
        raise ConfigError(f"bound must be a positive integer, got {b!r}")
    return b


def seed_of(args, section, default=0):
    return args.seed if args.seed is not None else int(section.get("seed", default))


_RE_PAIR = re.compile(r"^(\d+)\s*-\s*(\d+)$")


def parse_class(st, text):
    """Curve or arc class from a symbolic name (1-based indices)."""
    text = text.strip()
    head, _, rest = text.partition(" ")
    rest = rest.strip()
    pres = default_pants_decomposition(st).presentation
    try:
        if head == "boundary":
            return boundary_classes(st)[int(rest) - 1]
        if head == "slope":
            p, q = (int(x) for x in rest.split("/"))
            if st.family != "one-holed torus":
                raise ConfigError("slopes name curves on the one-holed torus only")
            return slope_class(p, q)
        if head == "word":
            return CurveClass.of(W.parse(rest, pres.rank), ("word",), "")
        if head in ("seam", "self-arc"):
            arcs = {str(a): a for a in pants_arc_classes(st)} if st.family == "pants" else {}
            if text not in arcs:
                raise ConfigError(f"{text!r}: seams and self-arcs name arcs of a pants")
            return arcs[text]
        if head == "arc":
            ends, _, conn = rest.partition(" ")
            m = _RE_PAIR.match(ends)
            if not m:
                raise ConfigError(f"arc endpoints must look like 'i-j', got {ends!r}")
            i, j = sorted((int(m.group(1)) - 1, int(m.group(2)) - 1))
            if not (0 <= i <= j < st.boundary):
                raise ConfigError(f"{text!r}: no such boundary")
            hs = pres.boundary_words
            w = canonical_connector(W.parse(conn, pres.rank), hs[i], hs[j], i == j)
            return ArcClass(i, j, w)
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"cannot parse class {text!r}: {exc}")
    raise ConfigError(f"unknown class name {text!r}")


# -- commands -------------------------------------------------------------


def cmd_length(args, cfg):
    st = surface_type(cfg)
    X = structure(cfg, "X", st)
    names = cfg.get("length", {}).get("classes")
    if not names:
        names = [f"boundary {k + 1}" for k in range(st.boundary)]
    cls = [parse_class(st, n) for n in names]
    ls = lengths(X, cls)
    for name, c, v in zip(names, cls, ls):
        if not np.isfinite(v):
            raise ConfigError(f"{name!r} is not an essential class on this surface")
    write_csv([(n, str(c), v) for n, c, v in zip(names, cls, ls)], ["class", "canonical", "length"], args.out)
    return EXIT_OK


METRICS = {"d": d_weak, "dbar": d_bar, "dL": d_L, "deltaL": delta_L, "K": K_ratio}


def cmd_metric(args, cfg):
    st = surface_type(cfg)
    X, Y = structure(cfg, "X", st), structure(cfg, "Y", st)
    sec = cfg.get("metric", {})
    names = sec.get("name", "dL")
    names = [names] if isinstance(names, str) else list(names)
    bound = bound_of(args, sec, 6)
    rows = []
    for name in names:
        if name not in METRICS:
            raise ConfigError(f"unknown metric {name!r}; choose from {sorted(METRICS)}")
        est = METRICS[name](X, Y, bound)
        rows.append((name, est.value, str(est.witness), est.exact, "" if est.slack is None else est.slack, bound))
    write_csv(rows, ["metric", "value", "witness", "exact", "slack", "bound"], args.out)
    return EXIT_OK


# -- experiments ----------------------------------------------------------


def _fit_slope(ts, ys):
    return float(np.polyfit(np.asarray(ts, float), np.log(np.asarray(ys, float)), 1)[0])


def exp_pants_example(args, cfg, sec):
    ts = [float(t) for t in sec.get("t", [1, 2, 4, 8, 16])]
    bound = bound_of(args, sec, 4)
    base = HypStructure.pants(1.0, 1.0, 1.0)
    seams = [H.regular_seam(t) for t in ts]
    fit_grid = np.linspace(8.0, 24.0, 17)
    fitted = _fit_slope(fit_grid, [H.regular_seam(t) for t in fit_grid])
    fitted_full = _fit_slope(fit_grid, [H.regular_seam(t, "full") for t in fit_grid])
    rows = []
    for t, seam in zip(ts, seams):
        Xt = HypStructure.pants(t, t, t)
        dl = d_L(base, Xt, bound).value
        dd = delta_L(base, Xt, bound).value
        rows.append((t, dl, dd, seam, fitted, H.seam_decay_exponent("half"), fitted_full, H.seam_decay_exponent("full")))
        if abs(dl - math.log(t)) > 1e-9:
            raise CheckFailed(f"d_L != log t at t={t}: {rows[-1]}")
    if abs(fitted - H.seam_decay_exponent("half")) > 0.02:
        raise CheckFailed(f"seam decay slope {fitted} differs from -1/4")
    header = ["t", "d_L", "delta_L", "seam_length", "seam_decay_fit", "seam_decay_exact", "seam_decay_fit_full", "seam_decay_exact_full"]
    return header, rows


def torus_grid(sec):
    n = int(sec.get("grid", 5))
    ls = np.linspace(*sec.get("length_range", [0.8, 2.6]), n)
    ts = np.linspace(*sec.get("twist_range", [-1.0, 1.0]), n)
    bs = np.linspace(*sec.get("boundary_range", [0.6, 2.8]), n)
    return [HypStructure.one_holed_torus(l, t, b) for l, t, b in itertools.product(ls, ts, bs)]


def torus_pairs(sec, seed):
    grid = torus_grid(sec)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(grid))
    return [(grid[k], grid[perm[k]]) for k in range(len(grid)) if perm[k] != k]


def thick_spec(sec):
    return ThickPartSpec(float(sec.get("epsilon", 0.3)), float(sec.get("epsilon0", 3.0)))


def _coords(X):
    return (X.curve_lengths[0], X.twists[0], X.boundary_lengths[0])


def exp_thick_comparison(args, cfg, sec):
    bound = bound_of(args, sec, 6)
    seed = seed_of(args, sec)
    spec = thick_spec(sec)
    pairs = [p for p in torus_pairs(sec, seed) if in_thick_part(p[0], spec, bound) and in_thick_part(p[1], spec, bound)]

    def row(pair):
        X, Y = pair
        out = []
        for b in (bound, bound + 2):
            dl, dd = d_L(X, Y, b).value, delta_L(X, Y, b).value
            out += [dl, dd]
        f, g = d_weak(X, Y, bound).value, d_weak(Y, X, bound).value
        return _coords(X) + _coords(Y) + (out[0], out[1], f, g, out[1] - out[0], out[3] - out[2])

    rows = pmap(row, pairs)
    header = ["l_X", "tau_X", "L_X", "l_Y", "tau_Y", "L_Y", "d_L", "delta_L", "d", "dbar", "gap", f"gap_bound_{bound + 2}"]
    for r in rows:
        if min(r[7] - r[6], r[7] - r[8], r[7] - r[9]) < -1e-12:
            raise CheckFailed(f"negative gap: {r}")
    g1 = max(r[10] for r in rows)
    g2 = max(r[11] for r in rows)
    if g1 > 0 and abs(g2 - g1) / g1 >= 0.1:
        raise CheckFailed(f"max gap moved by {abs(g2 - g1) / g1:.3%} between bounds")
    return header, rows


def exp_arcs_only(args, cfg, sec):
    bound = bound_of(args, sec, 8)
    seed = seed_of(args, sec)
    spec = thick_spec(sec)
    pairs = [p for p in torus_pairs(sec, seed) if in_thick_part(p[0], spec, bound) and in_thick_part(p[1], spec, bound)]

    def row(pair):
        X, Y = pair
        e, half = d_weak(X, Y, bound), d_weak(X, Y, bound // 2)
        slack_b = abs(e.b_only_value - half.b_only_value)
        slack = max(e.slack, slack_b)
        return _coords(X) + _coords(Y) + (e.value, e.b_only_value, e.slack, slack_b, abs(e.value - e.b_only_value), slack)

    rows = pmap(row, pairs)
    for r in rows:
        if r[10] > r[11] + 1e-12:
            raise CheckFailed(f"arcs-only value outside slack: {r}")
    header = ["l_X", "tau_X", "L_X", "l_Y", "tau_Y", "L_Y", "d", "d_arcs_only", "slack", "slack_arcs_only", "gap", "slack_max"]
    return header, rows


def exp_doubling(args, cfg, sec):
    bound = bound_of(args, sec, 4)
    seed = seed_of(args, sec)
    n = int(sec.get("pairs", 10))
    rng = np.random.default_rng(seed)
    lo, hi = sec.get("low", [0.8, -1.0, 0.8]), sec.get("high", [2.6, 1.0, 2.6])
    pairs = [
        (HypStructure.one_holed_torus(*rng.uniform(lo, hi)), HypStructure.one_holed_torus(*rng.uniform(lo, hi)))
        for _ in range(n)
    ]

    def row(pair):
        X, Y = pair
        d_s = d_weak(X, Y, 2 * bound).value
        lo_, hi_ = d_double(X, Y, bound).value, d_double(X, Y, 2 * bound).value
        return _coords(X) + _coords(Y) + (d_s, lo_, hi_, abs(d_s - hi_), abs(hi_ - lo_))

    rows = pmap(row, pairs)
    for r in rows:
        if r[9] > r[10] + NUMERIC_FLOOR:
            raise CheckFailed(f"d on the surface and on its double differ beyond slack: {r}")
    header = ["l_X", "tau_X", "L_X", "l_Y", "tau_Y", "L_Y", "d_S", f"d_Sd_{bound}", f"d_Sd_{2 * bound}", "gap", "slack"]
    return header, rows


def exp_convergence(args, cfg, sec):
    bound = bound_of(args, sec, 6)
    l0 = float(sec.get("l0", 3.0))
    tau = float(sec.get("twist", 0.0))
    L = float(sec.get("boundary", 1.0))
    kind = sec.get("path", "approach")
    ns = [int(n) for n in sec.get("n", [1, 2, 5, 10, 20, 50, 100])]
    base = HypStructure.one_holed_torus(l0, tau, L)
    if kind == "approach":
        path = lambda n: HypStructure.one_holed_torus(l0 + 1.0 / n, tau, L)
    elif kind == "shrink":
        path = lambda n: HypStructure.one_holed_torus(1.0 / n, tau, L)
    else:
        raise ConfigError(f"unknown path {kind!r}; use 'approach' or 'shrink'")
    rows = convergence_study(path, base, ns, bound)
    tol, thr = float(sec.get("tol", 1e-2)), float(sec.get("threshold", 2.0))
    ok, envelope, msg = co_monotone(rows, tol, thr)
    if not ok:
        raise CheckFailed(msg)
    out = [(r.n, path(r.n).curve_lengths[0]) + r.values + (r.slack, envelope) for r in rows]
    last = rows[-1]
    if kind == "approach" and last.n >= 100 and max(last.values) >= tol:
        raise CheckFailed(f"estimators still above {tol} at n={last.n}: {out[-1]}")
    if kind == "shrink" and last.n >= 50 and min(last.values) <= thr:
        raise CheckFailed(f"estimators not above {thr} at n={last.n}: {out[-1]}")
    header = ["n", "l_n", "d", "dbar", "d_L", "delta_L", "slack", "envelope"]
    return header, out


EXPERIMENTS = {
    "pants-example": exp_pants_example,
    "thick-comparison": exp_thick_comparison,
    "doubling": exp_doubling,
    "arcs-only": exp_arcs_only,
    "convergence": exp_convergence,
}


def cmd_experiment(args, cfg):
    sec = dict(cfg.get("experiment", {}))
    name = args.name or sec.get("name")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    header, rows = EXPERIMENTS[name](args, cfg, sec)
    write_csv(rows, header, args.out)
    return EXIT_OK


# -- entry point ----------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="teichspec", description="Length-spectrum metrics on Teichmueller spaces of surfaces with boundary.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("length", "lengths of named classes"), ("metric", "metric estimates between X and Y"), ("experiment", "run a named experiment")):
        s = sub.add_parser(name, help=help_)
        if name == "experiment":
            s.add_argument("name", nargs="?", help=", ".join(EXPERIMENTS))
        s.add_argument("--config", metavar="PATH", help="TOML configuration file")
        s.add_argument("--bound", type=int, metavar="N", help="enumeration bound")
        s.add_argument("--seed", type=int, metavar="N", help="random seed")
        s.add_argument("--out", metavar="PATH", help="CSV output (default stdout)")
    return p


COMMANDS = {"length": cmd_length, "metric": cmd_metric, "experiment": cmd_experiment}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except NotInThickPart as exc:
        print(f"check failed: {exc} (witness {exc.witness})", file=sys.stderr)
        return EXIT_ASSERT
    except (ConfigError, TeichspecError, ValueError, KeyError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
