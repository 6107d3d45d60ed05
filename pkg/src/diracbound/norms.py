"""Norms of scalar potentials: Lebesgue, Lorentz (radial), Mizohata–Takeuchi."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

SUBDIVISION = 2 ** 12


class NormError(ValueError):
    pass


@dataclass(frozen=True)
class RadialProfile:
    """Radial function f(|x|) given by samples (r_i, v_i).

    Piecewise-constant rule: f = v_i on (r_{i-1}, r_i] with r_0 = 0.
    Piecewise-linear rule: linear between samples, f = v_1 on (0, r_1].
    Zero beyond the last radius in both cases.
    """

    radii: tuple
    values: tuple
    n: int = 1
    rule: str = "constant"

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size == 0:
            raise NormError("radii and values must be equal-length non-empty sequences")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise NormError("radii must be positive and strictly increasing")
        if not (np.all(np.isfinite(v)) and np.all(v >= 0)):
            raise NormError("values must be finite and nonnegative")
        if self.n < 1:
            raise NormError("dimension must be >= 1")
        if self.rule not in ("constant", "linear"):
            raise NormError(f"unknown interpolation rule {self.rule!r}")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))
        object.__setattr__(self, "values", tuple(float(x) for x in v))

    def scaled(self, c: float) -> "RadialProfile":
        return RadialProfile(self.radii, tuple(c * x for x in self.values), self.n, self.rule)

    def steps(self, pieces: int = SUBDIVISION) -> tuple[np.ndarray, np.ndarray]:
        """(edges, heights) of an equivalent piecewise-constant profile."""
        r = np.asarray(self.radii)
        v = np.asarray(self.values)
        if self.rule == "constant":
            return np.r_[0.0, r], v
        edges = np.r_[0.0, np.linspace(r[0], r[-1], pieces + 1)] if r.size > 1 else np.r_[0.0, r]
        mids = 0.5 * (edges[1:] + edges[:-1])
        heights = np.interp(mids, r, v)  # constant v_1 on (0, r_1]
        return edges, heights


def load_profile_csv(path: str, n: int = 1, rule: str = "constant") -> RadialProfile:
    """Read a CSV with columns r, value (header row required; '#' lines skipped)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(line for line in fh if not line.lstrip().startswith("#"))]
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["r", "value"]:
        raise NormError(f"{path}: expected header 'r,value'")
    data = [(float(a), float(b)) for a, b, *_ in rows[1:] if a.strip()]
    return RadialProfile(tuple(d[0] for d in data), tuple(d[1] for d in data), n, rule)


def lp_norm(values, x=None, p: float = 2.0, h: float | None = None) -> float:
    """Trapezoid approximation of (∫|f|^p)^{1/p} on a 1-D grid; max for p = ∞."""
    if not p >= 1:
        raise NormError(f"p must be in [1, inf], got {p}")
    f = np.abs(np.asarray(values))
    if f.size == 0:
        return 0.0
    if np.isinf(p):
        return float(f.max())
    if x is None:
        if h is None:
            raise NormError("give sample points x or a spacing h")
        integral = np.trapezoid(f ** p, dx=h)
    else:
        integral = np.trapezoid(f ** p, x=np.asarray(x, dtype=float))
    return float(integral ** (1.0 / p))


def _shell_measures(edges: np.ndarray, n: int) -> np.ndarray:
    # μ = r^{n-1} dr
    return (edges[1:] ** n - edges[:-1] ** n) / n


def radial_lp_norm(f: RadialProfile, p: float) -> float:
    """‖f‖ in L^p(r^{n-1} dr); sup for p = ∞."""
    edges, heights = f.steps()
    if np.isinf(p):
        return float(heights.max(initial=0.0))
    return float(np.sum(heights ** p * _shell_measures(edges, f.n)) ** (1.0 / p))


def lorentz_radial_norm(f: RadialProfile, p: float, q: float) -> float:
    """(p ∫_0^∞ t^{q-1} μ{f ≥ t}^{q/p} dt)^{1/q} with μ = r^{n-1} dr.

    The distribution function is a step function of t with jumps at the
    distinct profile values, so the t-integral is summed exactly.
    """
    if not (1 <= p < np.inf and 1 <= q < np.inf):
        raise NormError("need 1 <= p, q < inf")
    edges, heights = f.steps()
    mu = _shell_measures(edges, f.n)
    levels = np.unique(heights[heights > 0])
    if levels.size == 0:
        return 0.0
    dist = np.array([mu[heights >= t].sum() for t in levels])
    lower = np.r_[0.0, levels[:-1]]
    total = p * np.sum(dist ** (q / p) * (levels ** q - lower ** q) / q)
    return float(total ** (1.0 / q))


def _mt_integral(edges: np.ndarray, heights: np.ndarray, R: float) -> float:
    # ∫_R^∞ r (r² − R²)^{-1/2} w dr, exact on each constant piece
    a, b = edges[:-1], edges[1:]
    live = b > R
    lo = np.maximum(a[live], R)
    return float(np.sum(heights[live] * (np.sqrt(b[live] ** 2 - R * R) - np.sqrt(lo * lo - R * R))))


def mt_norm(w: RadialProfile, refine: int = 64) -> float:
    """sup_{R>0} ∫_R^∞ r (r² − R²)^{-1/2} w(r) dr.

    Candidates: R → 0⁺, every sample radius, a uniform refinement of each
    interval, then a bounded scalar maximization around the best candidate.
    """
    edges, heights = w.steps()
    if not np.any(heights):
        return 0.0
    cand = [0.0]
    for a, b in zip(edges[:-1], edges[1:]):
        cand.extend(np.linspace(a, b, refine + 1)[1:].tolist())
    cand = np.asarray(cand)
    vals = np.array([_mt_integral(edges, heights, R) for R in cand])
    best = int(np.argmax(vals))
    result = float(vals[best])
    lo = cand[max(best - 1, 0)]
    hi = cand[min(best + 1, cand.size - 1)]
    if hi > lo:
        opt = minimize_scalar(
            lambda R: -_mt_integral(edges, heights, R), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-14 * max(hi, 1.0)},
        )
        result = max(result, float(-opt.fun))
    return result
