"""Command-line front end.

    diracbound [--config FILE] [--seed S] [--output PATH] [--format F] <group> <action> [flags]

Effective parameters are built-in defaults, then config-file values, then
flags.  The config file is YAML or JSON holding a flat mapping with dotted
keys: global keys ``seed``, ``output``, ``format`` and per-action keys
``<group>.<action>.<flag>`` (``<group>.<flag>`` also applies to every
action of the group), with flag names written with underscores, e.g.

    seed: 7
    lab.eigen.M: 512
    lab.v: "gaussian:amp=1.5"

Every artifact starts with a header giving the tool version, the effective
configuration and the seed.  Exit status: 0 success, 1 verification failure,
2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np
import yaml

from . import __version__, atlas, clifford, lab, norms, regions, rigidity
from .matrixcore import MatrixError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PROFILE_HELP = (
    "scalar profile: gaussian:amp=A,width=W[,center=C][,phase=T] (L1 mass A), "
    "step:r0=R,amp=A[,phase=T], delta:amp=A[,center=C], file:path.csv (columns x,value)"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- value parsing --------------------------------------------------------------


def complex_arg(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def range_arg(text) -> tuple[float, float, int]:
    """'lo:hi:count' with count >= 1."""
    try:
        lo, hi, cnt = str(text).split(":")
        out = float(lo), float(hi), int(cnt)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count, got {text!r}") from None
    if out[2] < 1:
        raise argparse.ArgumentTypeError("count must be >= 1")
    return out


def float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def exponent_arg(text) -> str:
    return str(text)


def _sign_arg(text) -> str:
    if str(text) not in ("+", "-", "+1", "-1", "1"):
        raise argparse.ArgumentTypeError("sign must be + or -")
    return str(text)


def _matrix(obj) -> np.ndarray:
    def entry(e):
        if isinstance(e, (list, tuple)) and len(e) == 2:
            return complex(float(e[0]), float(e[1]))
        return complex_arg(e)

    return np.array([[entry(e) for e in row] for row in obj], dtype=complex)


# -- parameter registry -----------------------------------------------------------

# (group, action) -> {dest: default}
DEFAULTS: dict[tuple[str, str], dict] = {}


def _add(p, key, flag, *aliases, default=None, **kw):
    dest = flag.lstrip("-").replace("-", "_")
    DEFAULTS.setdefault(key, {})[dest] = default
    if "help" in kw and default not in (None, False):
        kw["help"] += f" (default {default})"
    p.add_argument(flag, *aliases, dest=dest, default=argparse.SUPPRESS, **kw)


def _theorem_flags(p, key):
    _add(p, key, "--theorem", required=False, default="T2.1", help="region tag: " + ", ".join(regions.THEOREMS))
    _add(p, key, "--m", type=float, default=1.0, help="mass m >= 0")
    _add(p, key, "--norm", type=float, default=None, help="norm value of the potential")
    _add(p, key, "--n", type=int, default=1, help="spatial dimension")
    _add(p, key, "--gamma", type=float, default=None, help="exponent gamma (T2.2, T2.8)")
    _add(p, key, "--constant", type=float, default=None, help="constant C0 or D")


def _lab_pot_flags(p, key):
    _add(p, key, "--class", type=str, default="ii", help="RA class i|ii|iii|iv")
    _add(p, key, "--dim", type=int, default=1, help="dimension n of the potential (fiber size 2^ceil(n/2))")
    _add(p, key, "--sign", type=_sign_arg, default="+", help="example family sign")
    _add(p, key, "--m", type=float, default=1.0, help="mass")
    _add(p, key, "--v", type=str, default="gaussian:amp=1.0", help=PROFILE_HELP)
    _add(p, key, "--M", type=int, default=512, help="grid points (power of two)")
    _add(p, key, "--L", type=float, default=40.0, help="box length")


def build_parser() -> argparse.ArgumentParser:
    DEFAULTS.clear()
    top = _Parser(prog="diracbound", description="Eigenvalue-enclosure toolkit for rigid Dirac potentials.")
    top.add_argument("--version", action="version", version=f"diracbound {__version__}")
    top.add_argument("--config", default=None, help="YAML or JSON file with dotted keys")
    top.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="64-bit seed (default 0)")
    top.add_argument("--output", default=argparse.SUPPRESS, help="write to this file instead of stdout")
    top.add_argument("--format", choices=("json", "csv", "svg"), default=argparse.SUPPRESS,
                     help="output format where an action supports several")
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def action(group_parsers, group, name, help_):
        p = group_parsers.add_parser(name, help=help_, description=help_)
        p.set_defaults(action=name)
        DEFAULTS.setdefault((group, name), {})
        return p, (group, name)

    # clifford
    g = groups.add_parser("clifford", help="Dirac matrices")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "clifford", "gen", "emit the matrices alpha_1..alpha_{n+1} (and betas)")
    _add(p, k, "--n", type=int, default=3, help="dimension")
    p, k = action(acts, "clifford", "check", "residuals of the algebraic identities")
    _add(p, k, "--n", type=int, default=3, help="dimension")
    _add(p, k, "--tol", type=float, default=1e-13, help="pass threshold")

    # rigidity
    g = groups.add_parser("rigidity", help="rigid potentials")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "rigidity", "examples", "explicit example potentials with verification")
    _add(p, k, "--n", "--dim", type=int, default=3, help="dimension")
    _add(p, k, "--class", type=str, default=None, help="restrict to one class")
    _add(p, k, "--sign", type=_sign_arg, default="+", help="family sign")
    p, k = action(acts, "rigidity", "verify", "classify a pair (A, B) read from a JSON/YAML file")
    _add(p, k, "--n", type=int, default=None, help="dimension")
    _add(p, k, "--pair", type=str, default=None, help="file with keys A and B (rows of numbers, 'a+bj' strings or [re, im])")
    _add(p, k, "--expect", type=str, default=None, help="required class; mismatch exits 1")
    p, k = action(acts, "rigidity", "probe", "randomized non-existence probe")
    _add(p, k, "--class", type=str, default="iv", help="class")
    _add(p, k, "--n", type=int, default=2, help="dimension")
    _add(p, k, "--trials", type=int, default=1000, help="number of trials")

    # norms
    g = groups.add_parser("norms", help="radial norms")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "norms", "eval", "evaluate norms of a radial profile")
    _add(p, k, "--profile", type=str, default=None, help="CSV file with header r,value")
    _add(p, k, "--radii", type=float_list, default=None, help="comma list of radii")
    _add(p, k, "--values", type=float_list, default=None, help="comma list of values")
    _add(p, k, "--rule", choices=("constant", "linear"), default="constant", help="interpolation rule")
    _add(p, k, "--n", type=int, default=1, help="dimension")
    _add(p, k, "--which", choices=("lp", "lorentz", "mt", "all"), default="all", help="norm")
    _add(p, k, "--p", type=float, default=2.0, help="exponent p")
    _add(p, k, "--q", type=float, default=1.0, help="Lorentz exponent q")

    # regions
    g = groups.add_parser("regions", help="enclosure regions")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "regions", "member", "test points against a region")
    _theorem_flags(p, k)
    _add(p, k, "--z", type=complex_arg, action="append", default=None, help="point, repeatable (e.g. 0.5+2j)")
    p, k = action(acts, "regions", "boundary", "sample the region boundary")
    _theorem_flags(p, k)
    _add(p, k, "--samples", type=int, default=720, help="sampling resolution")
    _add(p, k, "--extent", type=float, default=None, help="half-width of the traced window")
    _add(p, k, "--out", choices=("csv", "json", "svg"), default=None, help="output format")
    p, k = action(acts, "regions", "disks", "centres and radius of the disk regions")
    _theorem_flags(p, k)

    # atlas
    g = groups.add_parser("atlas", help="exponent-pair atlas")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "atlas", "classify", "classify an exponent point")
    _add(p, k, "--n", type=int, default=3, help="dimension >= 2")
    _add(p, k, "--x", type=Fraction, default=None, help="1/p as a fraction")
    _add(p, k, "--y", type=Fraction, default=None, help="1/q as a fraction")
    _add(p, k, "--p", type=exponent_arg, default=None, help="p (or 'inf')")
    _add(p, k, "--q", type=exponent_arg, default=None, help="q (or 'inf')")
    p, k = action(acts, "atlas", "svg", "draw the exponent atlas")
    _add(p, k, "--n", type=int, default=3, help="dimension >= 2")
    _add(p, k, "--size", type=int, default=480, help="pixel size")

    # lab
    g = groups.add_parser("lab", help="1-D periodic grid experiments")
    acts = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p, k = action(acts, "lab", "kernel-check", "explicit 1-D resolvent kernel vs its bound")
    _add(p, k, "--z", type=complex_arg, action="append", default=None, help="point off [0, inf), repeatable")
    _add(p, k, "--samples", type=int, default=200, help="sampled distances")
    p, k = action(acts, "lab", "bs-sweep", "Birman-Schwinger norms over a rectangle")
    _lab_pot_flags(p, k)
    _add(p, k, "--re", type=range_arg, default=(-3.0, 3.0, 13), help="lo:hi:count for Re z")
    _add(p, k, "--im", type=range_arg, default=(0.5, 3.0, 6), help="lo:hi:count for Im z")
    _add(p, k, "--workers", type=int, default=1, help="threads")
    p, k = action(acts, "lab", "eigen", "perturbed spectrum and enclosure check")
    _lab_pot_flags(p, k)
    _add(p, k, "--theorem", type=str, default="T2.1", help="region to check survivors against ('none' to skip)")
    _add(p, k, "--norm", type=float, default=None, help="norm value (default: grid L1 norm of v)")
    _add(p, k, "--constant", type=float, default=None, help="region constant")
    _add(p, k, "--tol-ess", type=float, default=None, help="artifact distance tolerance (default 2|v|_1|V|/L)")
    _add(p, k, "--tol-im", type=float, default=None, help="artifact imaginary-part tolerance")
    _add(p, k, "--enclosure-tol", type=float, default=0.05, help="relative slack in lhs <= rhs(1+tol)")
    return top


# -- config ------------------------------------------------------------------------


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)  # JSON is a subset of YAML
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except yaml.YAMLError as exc:
        raise UsageError(f"malformed config: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise UsageError("config must be a flat mapping with dotted keys")
    return {str(k): v for k, v in data.items()}


def effective_config(ns: argparse.Namespace, file_cfg: dict) -> dict:
    key = (ns.group, ns.action)
    known = DEFAULTS[key]
    cfg = {"seed": 0, "output": None, "format": None, **known}
    scoped = {}
    for k, v in file_cfg.items():
        parts = k.split(".")
        if len(parts) == 1:
            if parts[0] not in ("seed", "output", "format"):
                raise UsageError(f"unknown config key {k!r}")
            cfg[parts[0]] = v
        elif parts[0] == ns.group and len(parts) == 2:
            if parts[1] in known:
                scoped.setdefault(parts[1], v)
        elif parts[:2] == [ns.group, ns.action] and len(parts) == 3:
            if parts[2] not in known:
                raise UsageError(f"unknown config key {k!r}")
            scoped[parts[2]] = v
    cfg.update(scoped)
    for k, v in vars(ns).items():
        if k not in ("group", "action", "config"):
            cfg[k] = v
    seed = int(cfg["seed"])
    if not 0 <= seed < 2 ** 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    cfg["seed"] = seed
    return cfg


def _coerce(cfg: dict, name: str, conv):
    v = cfg.get(name)
    if v is None:
        return None
    try:
        return conv(v)
    except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad value for {name}: {v!r} ({exc})") from None


# -- emission ------------------------------------------------------------------------


def _plain(v):
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real!r}{v.imag:+}j"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def header_info(cfg: dict, group: str, action: str) -> dict:
    conf = {k: _plain(v) for k, v in sorted(cfg.items()) if k not in ("seed", "output")}
    return {"tool": f"diracbound {__version__}", "command": f"{group} {action}", "seed": cfg["seed"], "config": conf}


def header_lines(info: dict) -> list[str]:
    return [
        f"tool: {info['tool']}",
        f"command: {info['command']}",
        f"seed: {info['seed']}",
        "config: " + json.dumps(info["config"], sort_keys=True),
    ]


def emit_json(info: dict, body: dict) -> str:
    return json.dumps({"header": info, **_plain(body)}, indent=2, sort_keys=True) + "\n"


def emit_csv(info: dict, columns: list[str], rows) -> str:
    buf = io.StringIO()
    for line in header_lines(info):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def svg_polylines(components: dict, title: str, header: str, size: int = 480, marks=()) -> str:
    pts = [p for seg in components.values() for p in seg] + list(marks)
    if pts:
        xs = [p.real for p in pts] + [0.0]
        ys = [p.imag for p in pts] + [0.0]
        half = max(max(map(abs, xs)), max(map(abs, ys)), 1e-9) * 1.1
    else:
        half = 1.0
    margin = 30
    span = size - 2 * margin

    def tx(z):
        return margin + (z.real + half) / (2 * half) * span, margin + (half - z.imag) / (2 * half) * span

    out = ['<?xml version="1.0" encoding="UTF-8"?>', f"<!--\n{header}\n-->"]
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
               f'viewBox="0 0 {size} {size}">')
    ax0, ay0 = tx(complex(-half, 0))
    ax1, _ = tx(complex(half, 0))
    bx0, by0 = tx(complex(0, half))
    _, by1 = tx(complex(0, -half))
    out.append(f'<line x1="{ax0:.3f}" y1="{ay0:.3f}" x2="{ax1:.3f}" y2="{ay0:.3f}" stroke="#888"/>')
    out.append(f'<line x1="{bx0:.3f}" y1="{by0:.3f}" x2="{bx0:.3f}" y2="{by1:.3f}" stroke="#888"/>')
    out.append(f'<text x="{ax1 - 20:.3f}" y="{ay0 - 4:.3f}" font-size="11">Re</text>')
    out.append(f'<text x="{bx0 + 4:.3f}" y="{by0 + 12:.3f}" font-size="11">Im</text>')
    out.append(f'<text x="{margin}" y="{margin - 10}" font-size="13">{title}</text>')
    for c in sorted(components):
        seg = components[c]
        coords = " ".join("{:.3f},{:.3f}".format(*tx(z)) for z in seg)
        out.append(f'<polyline fill="none" stroke="#1f4e9a" stroke-width="1.5" points="{coords}"/>')
    for z in marks:
        x, y = tx(z)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- handlers -----------------------------------------------------------------------------


def _spec(cfg: dict) -> regions.EnclosureSpec:
    if cfg.get("norm") is None:
        raise UsageError("--norm is required")
    return regions.EnclosureSpec(
        str(cfg["theorem"]),
        float(cfg["m"]),
        float(cfg["norm"]),
        n=int(cfg["n"]),
        gamma=_coerce(cfg, "gamma", float),
        constant=_coerce(cfg, "constant", float),
    )


def h_clifford_gen(cfg):
    rep = clifford.dirac_matrices(int(cfg["n"]))
    return "json", clifford.rep_to_json(rep), True


def h_clifford_check(cfg):
    n = int(cfg["n"])
    rep = clifford.dirac_matrices(n)
    res = clifford.check_rep(rep)
    tol = float(cfg["tol"])
    worst = max(v for k, v in res.items() if k not in ("n", "N"))
    rec = [clifford.recursion_check(n, m) for m in range(2, n + 1) if (n - m) % 2 == 0]
    ok = worst < tol and all(r["ok"] for r in rec)
    return "json", {"residuals": res, "recursion": rec, "tol": tol, "ok": ok}, ok


def h_rigidity_examples(cfg):
    n = int(cfg["n"])
    classes = [cfg["class"]] if cfg.get("class") else list(rigidity.CLASSES)
    rep = clifford.dirac_matrices(n)
    out, ok = [], True
    for c in classes:
        if not rigidity.admissible(c, n):
            out.append({"class": c, "admissible": False})
            continue
        pot = rigidity.example(c, n, cfg["sign"])
        rpt = rigidity.verify(pot.A, pot.B, rep)
        ok &= rpt.ra_class == pot.ra_class
        out.append({
            "class": c,
            "admissible": True,
            "A": pot.A,
            "B": pot.B,
            "V": pot.V,
            "scale": pot.scale,
            "report": rpt.as_dict(),
        })
    return "json", {"n": n, "examples": out}, ok


def h_rigidity_verify(cfg):
    if not cfg.get("pair"):
        raise UsageError("--pair FILE is required")
    try:
        with open(cfg["pair"], encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        A, B = _matrix(data["A"]), _matrix(data["B"])
    except (OSError, KeyError, TypeError, ValueError, yaml.YAMLError) as exc:
        raise UsageError(f"cannot read pair: {exc}") from None
    n = cfg.get("n")
    if n is None:
        n = int(data.get("n", 0)) if isinstance(data, dict) else 0
        if not n:
            raise UsageError("--n is required (or an 'n' key in the pair file)")
    rpt = rigidity.verify(A, B, clifford.dirac_matrices(int(n)))
    want = cfg.get("expect")
    ok = rpt.ra_class != "none" if want is None else rpt.ra_class == str(want).lower()
    return "json", rpt.as_dict(), ok


def h_rigidity_probe(cfg):
    rpt = rigidity.nonexistence_probe(cfg["class"], int(cfg["n"]), int(cfg["trials"]), seed=cfg["seed"])
    body = rpt.as_dict()
    return "json", body, rpt.counterexamples == 0


def h_norms_eval(cfg):
    n, rule = int(cfg["n"]), cfg["rule"]
    if cfg.get("profile"):
        prof = norms.load_profile_csv(cfg["profile"], n=n, rule=rule)
    elif cfg.get("radii") is not None and cfg.get("values") is not None:
        prof = norms.RadialProfile(tuple(float_list(cfg["radii"])), tuple(float_list(cfg["values"])), n, rule)
    else:
        raise UsageError("give --profile or both --radii and --values")
    which = cfg["which"]
    p, q = float(cfg["p"]), float(cfg["q"])
    out = {"n": n, "rule": rule}
    if which in ("lp", "all"):
        out["lp"] = {"p": p, "value": norms.radial_lp_norm(prof, p)}
    if which in ("lorentz", "all"):
        out["lorentz"] = {"p": p, "q": q, "value": norms.lorentz_radial_norm(prof, p, q)}
    if which in ("mt", "all"):
        out["mt"] = {"value": norms.mt_norm(prof)}
    return "json", out, True


def h_regions_member(cfg):
    spec = _spec(cfg)
    zs = [complex_arg(z) for z in (cfg.get("z") or [])]
    if not zs:
        raise UsageError("give at least one --z")
    rows = []
    for z in zs:
        try:
            lhs, rhs = (float(s) for s in regions.sides(spec, z))
            rows.append({"z": z, "member": regions.member(spec, z), "lhs": lhs, "rhs": rhs})
        except regions.SingularPointError as exc:
            rows.append({"z": z, "member": None, "error": str(exc)})
    return "json", {"theorem": spec.theorem, "published_constant": spec.published_constant,
                    "constant": spec.constant, "points": rows}, True


def h_regions_boundary(cfg):
    spec = _spec(cfg)
    b = regions.boundary(spec, int(cfg["samples"]), _coerce(cfg, "extent", float))
    fmt = cfg.get("out") or cfg.get("format") or "csv"
    if fmt == "csv":
        return "csv", (["component", "re", "im"], list(b.rows())), True
    if fmt == "json":
        return "json", {"theorem": spec.theorem, "components": b.ncomponents, "diagnostic": b.diagnostic,
                        "points": [list(r) for r in b.rows()]}, True
    comps = {}
    for c, z in zip(b.components, b.points):
        comps.setdefault(int(c), []).append(complex(z))
    title = f"{spec.theorem} boundary, m={spec.m:g}, norm={spec.norm_value:g}"
    return "svg", (comps, title, [complex(spec.m), complex(-spec.m)]), True


def h_regions_disks(cfg):
    d = regions.disks(_spec(cfg))
    return "json", {"c_plus": d.c_plus, "c_minus": d.c_minus, "radius": d.radius,
                    "equivalence_residual": d.equivalence_residual}, True


def _atlas_point(cfg) -> atlas.ExponentPoint:
    n = int(cfg["n"])
    if cfg.get("x") is not None and cfg.get("y") is not None:
        return atlas.ExponentPoint(Fraction(str(cfg["x"])), Fraction(str(cfg["y"])), n)
    if cfg.get("p") is not None and cfg.get("q") is not None:
        return atlas.ExponentPoint.from_pq(str(cfg["p"]), str(cfg["q"]), n)
    raise UsageError("give --x/--y or --p/--q")


def h_atlas_classify(cfg):
    return "json", atlas.classify(_atlas_point(cfg)).as_dict(), True


def h_atlas_svg(cfg):
    return "svg-raw", (int(cfg["n"]), int(cfg["size"])), True


def h_lab_kernel_check(cfg):
    zs = [complex_arg(z) for z in (cfg.get("z") or [])] or [complex(-1, 1), complex(2, 0.5), complex(0, 3)]
    rows, ok = [], True
    for z in zs:
        r = lab.schrodinger_kernel_bound_check(z, int(cfg["samples"]))
        good = abs(r.diagonal_ratio - 1) < 1e-12 and r.ratio <= 1 + 1e-12
        ok &= good
        rows.append({"z": z, "bound": r.bound, "sup": r.sup, "ratio": r.ratio,
                     "diagonal_ratio": r.diagonal_ratio, "ok": good})
    return "json", {"points": rows, "ok": ok}, ok


def _lab_setup(cfg):
    grid = lab.GridModel(float(cfg["L"]), int(cfg["M"]))
    pot = rigidity.example(cfg["class"], int(cfg["dim"]), cfg["sign"])
    v = lab.sample_profile(str(cfg["v"]), grid)
    return grid, pot, v


def h_lab_bs_sweep(cfg):
    grid, pot, v = _lab_setup(cfg)
    re_lo, re_hi, re_n = range_arg(":".join(map(str, cfg["re"])) if isinstance(cfg["re"], (list, tuple)) else cfg["re"])
    im_lo, im_hi, im_n = range_arg(":".join(map(str, cfg["im"])) if isinstance(cfg["im"], (list, tuple)) else cfg["im"])
    zs = [complex(x, y) for y in np.linspace(im_lo, im_hi, im_n) for x in np.linspace(re_lo, re_hi, re_n)]
    rows = lab.bs_norm_sweep(grid, pot, v, float(cfg["m"]), zs, workers=int(cfg["workers"]))
    table = [(r.z.real, r.z.imag, r.bs_norm, r.kappa_bound, r.status) for r in rows]
    return "csv", (["re_z", "im_z", "bs_norm", "kappa_bound", "status"], table), True


def h_lab_eigen(cfg):
    grid, pot, v = _lab_setup(cfg)
    m = float(cfg["m"])
    spec = None
    theorem = str(cfg.get("theorem") or "none")
    if theorem.lower() != "none":
        norm = _coerce(cfg, "norm", float)
        if norm is None:
            norm = lab.l1_norm(v, grid)
        spec = regions.EnclosureSpec(theorem, m, norm, n=1, constant=_coerce(cfg, "constant", float))
    rpt = lab.perturbed_spectrum(
        grid, pot, v, m, spec,
        tol_ess=_coerce(cfg, "tol_ess", float),
        tol_im=_coerce(cfg, "tol_im", float),
        enclosure_tol=float(cfg["enclosure_tol"]),
    )
    body = rpt.as_dict()
    body["l1_norm"] = lab.l1_norm(v, grid)
    return "json", body, not rpt.violations


HANDLERS = {
    ("clifford", "gen"): h_clifford_gen,
    ("clifford", "check"): h_clifford_check,
    ("rigidity", "examples"): h_rigidity_examples,
    ("rigidity", "verify"): h_rigidity_verify,
    ("rigidity", "probe"): h_rigidity_probe,
    ("norms", "eval"): h_norms_eval,
    ("regions", "member"): h_regions_member,
    ("regions", "boundary"): h_regions_boundary,
    ("regions", "disks"): h_regions_disks,
    ("atlas", "classify"): h_atlas_classify,
    ("atlas", "svg"): h_atlas_svg,
    ("lab", "kernel-check"): h_lab_kernel_check,
    ("lab", "bs-sweep"): h_lab_bs_sweep,
    ("lab", "eigen"): h_lab_eigen,
}

DOMAIN_ERRORS = (
    clifford.CliffordError,
    rigidity.RigidityError,
    norms.NormError,
    regions.RegionError,
    atlas.AtlasError,
    lab.LabError,
    MatrixError,
)


def render(kind: str, payload, info: dict) -> str:
    if kind == "json":
        return emit_json(info, payload)
    if kind == "csv":
        cols, rows = payload
        return emit_csv(info, cols, rows)
    text = "\n".join(header_lines(info)).replace("--", "- -")
    if kind == "svg":
        comps, title, marks = payload
        return svg_polylines(comps, title, text, marks=marks)
    n, size = payload
    return atlas.atlas_svg(n, size, header=text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = effective_config(ns, load_config(ns.config))
        kind, payload, ok = HANDLERS[(ns.group, ns.action)](cfg)
        text = render(kind, payload, header_info(cfg, ns.group, ns.action))
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=stderr)
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if cfg.get("output"):
        with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
