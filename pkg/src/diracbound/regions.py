"""Eigenvalue enclosure regions: ϰ/κ factors, membership, disks, boundaries.

Notation: w = z² − m² (so |k|² = |w|), ``norm`` is the potential norm the
theorem uses, ``constant`` is D (Cassini/dist bounds) or C₀ (the others).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

THEOREMS = ("T2.1", "T2.2", "T2.3", "T2.5", "T2.6", "T2.7", "T2.8", "T2.9", "DFS")
DISK_THEOREMS = ("T2.7", "T2.9", "DFS")
CASSINI_THEOREMS = ("T2.1", "T2.2")
INF = math.inf
MEMBER_SLACK = 1e-12
EQUALITY_TOL = 1e-9


class RegionError(ValueError):
    pass


class SingularPointError(RegionError):
    pass


def sgn(x: float) -> int:
    return (x > 0) - (x < 0)


def dist_to_halfline(w):
    """dist(w, [0, ∞)): |Im w| if Re w ≥ 0, else |w|."""
    w = np.asarray(w, dtype=complex)
    out = np.where(w.real >= 0, np.abs(w.imag), np.abs(w))
    return float(out) if out.ndim == 0 else out


def _cls(ra_class) -> str:
    c = str(ra_class).lower()
    if c not in ("i", "ii", "iii", "iv"):
        raise RegionError(f"unknown RA class {ra_class!r}")
    return c


def varkappa(ra_class, m: float, z: complex) -> float:
    """Bound ϰ(z) for |A(mα_{n+1} + z)B*| by RA class."""
    c = _cls(ra_class)
    if m < 0:
        raise RegionError("mass must be nonnegative")
    z = complex(z)
    if c == "iv" or (c == "ii" and m == 0):
        return 0.0
    if c == "ii":
        return float(m)
    if c == "iii" or m == 0:
        return abs(z)
    if z == m or z == -m:
        raise SingularPointError(f"varkappa for RA(i) is singular at z = ±m = {z}")
    k = abs(z * z - m * m) ** 0.5
    return k * abs((z + m) / (z - m)) ** (sgn(z.real) / 2)


def kappa(form: str, ra_class, m: float, n: int, r: float, z: complex) -> float:
    """κ(z) in power form ϰ|w|^{-1+n/(2r)} or dist form
    ϰ|w|^{-1/(2r)} dist(w, [0,∞))^{-1+(n+1)/(2r)}; r may be ∞."""
    z = complex(z)
    w = z * z - m * m
    inv_r = 0.0 if math.isinf(r) else 1.0 / r
    vk = varkappa(ra_class, m, z)
    if form == "power":
        e = -1.0 + n * inv_r / 2
        if w == 0 and e < 0:
            raise SingularPointError("kappa (power form) is singular at z² = m²")
        return vk * abs(w) ** e if vk else 0.0
    if form == "dist":
        d = dist_to_halfline(w)
        if d == 0:
            raise SingularPointError("kappa (dist form) is singular for z² − m² in [0, ∞)")
        return vk * abs(w) ** (-inv_r / 2) * d ** (-1.0 + (n + 1) * inv_r / 2) if vk else 0.0
    raise RegionError(f"unknown kappa form {form!r}")


def _default_constant(theorem: str, n: int) -> tuple[float, bool]:
    """(value, True if a published value exists)."""
    if theorem == "T2.1":
        return 0.5, True
    if theorem in ("T2.5", "T2.7") and n == 1:
        return 2.0, True
    return 1.0, False


@dataclass(frozen=True)
class EnclosureSpec:
    theorem: str
    m: float
    norm_value: float
    n: int = 1
    gamma: float | None = None
    constant: float | None = None
    published_constant: bool = field(default=False, compare=False)

    def __post_init__(self):
        t = self.theorem.strip().upper()
        if t not in THEOREMS:
            raise RegionError(f"unknown theorem tag {self.theorem!r}; expected one of {THEOREMS}")
        object.__setattr__(self, "theorem", t)
        if self.constant is None:
            c, published = _default_constant(t, self.n)
            object.__setattr__(self, "constant", c)
            object.__setattr__(self, "published_constant", published)
        _check_admissible(self)

    def with_norm(self, norm_value: float) -> "EnclosureSpec":
        return EnclosureSpec(self.theorem, self.m, norm_value, self.n, self.gamma, self.constant)

    @property
    def exponent(self) -> float:
        """γ + n/2, the power on the norm (1 for γ = ∞ and for the L¹/L^{n,1} bounds)."""
        if self.theorem == "T2.1":
            return 1.0
        if self.gamma is None or math.isinf(self.gamma):
            return 1.0
        return self.gamma + self.n / 2

    @property
    def nu(self) -> float:
        if self.theorem == "T2.9":
            return (2 * self.constant / self.norm_value - 1) ** 2
        if self.theorem == "DFS":
            return ((self.n + 1) * self.constant / self.norm_value - self.n) ** 2
        if self.theorem == "T2.7":
            return (self.constant / self.norm_value) ** 2
        raise RegionError(f"{self.theorem} has no disk parameter")


def _check_admissible(s: EnclosureSpec) -> None:
    t, n, g = s.theorem, s.n, s.gamma
    if s.m < 0 or s.norm_value < 0 or not s.constant > 0:
        raise RegionError("need m >= 0, norm_value >= 0, constant > 0")
    if n < 1:
        raise RegionError("dimension must be >= 1")
    allowed = {
        "T2.1": n == 1,
        "T2.2": n not in (1, 2, 4),
        "T2.3": n not in (1, 2, 4),
        "T2.5": n not in (2, 4),
        "T2.6": n not in (1, 2, 4),
        "T2.7": True,
        "T2.8": n >= 2,
        "T2.9": n >= 2,
        "DFS": True,
    }[t]
    if not allowed:
        raise RegionError(f"{t} does not cover dimension n={n}")
    if t == "T2.2" and (g is None or not 0 <= g <= n / 2):
        raise RegionError("T2.2 needs 0 <= gamma <= n/2")
    if t == "T2.3" and (g is None or not g > 0.5):
        raise RegionError("T2.3 needs gamma > 1/2 (gamma = inf allowed)")
    if t in ("T2.6", "T2.8"):
        if g is None or not g >= n / 2:
            raise RegionError(f"{t} needs gamma >= n/2")
        if g == n / 2 and not s.norm_value ** s.exponent < s.constant:
            raise RegionError(f"{t} at gamma = n/2 needs norm^(gamma+n/2) < C0 (smallness assumption violated)")
    if t in ("T2.5", "T2.7", "T2.9") and not s.norm_value < s.constant:
        raise RegionError(f"{t} needs norm < C0 (smallness assumption violated)")
    if t == "DFS" and s.norm_value > 0 and not s.nu > 1:
        raise RegionError("DFS needs nu > 1 (smallness assumption violated)")


def _ratio(z, m):
    # |z+m| / |z−m| with inf at z = m
    z = np.asarray(z, dtype=complex)
    num, den = np.abs(z + m), np.abs(z - m)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den == 0, np.inf, num / np.where(den == 0, 1, den))


def sides(spec: EnclosureSpec, z):
    """(lhs, rhs) arrays; the region is {lhs <= rhs}.  Singular points give
    lhs = inf (outside) unless the closure convention says otherwise."""
    z = np.asarray(z, dtype=complex)
    m, nv, c, n, g = spec.m, spec.norm_value, spec.constant, spec.n, spec.gamma
    w = z * z - m * m
    aw = np.abs(w)
    d = dist_to_halfline(w)
    az = np.abs(z)
    s = np.sign(z.real)
    t = spec.theorem
    ones = np.ones_like(aw)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if t == "T2.1":
            return np.sqrt(aw), c * nv * ones
        if t == "T2.2":
            if g == 0:
                # smallness test only: empty region iff norm < D
                return (np.inf if nv < c else 0.0) * ones, ones
            return aw ** g, c * nv ** spec.exponent * ones
        if t == "T2.3":
            if math.isinf(g):
                return d, c * nv * ones
            return np.sqrt(aw) * d ** (g - 0.5), c * nv ** spec.exponent * ones
        if t == "T2.5":
            if m == 0:
                return np.inf * ones, ones
            lhs = np.where(az == 0, np.inf, np.sqrt(aw) / np.where(az == 0, 1, az))
            return lhs, nv / c * ones
        if t == "T2.6":
            if math.isinf(g):
                lhs = d / az
            else:
                lhs = np.sqrt(aw) * az ** (-g - n / 2) * d ** (g - 0.5)
            if m > 0:
                lhs = np.where(az == 0, np.inf, lhs)
            else:
                lhs = np.where(az == 0, 0.0, lhs)
            return lhs, nv ** spec.exponent / c * ones
        if t == "T2.8":
            if math.isinf(g):
                lhs = np.abs(z - m) ** ((s - 1) / 2) * np.abs(z + m) ** (-(s + 1) / 2) * d
            else:
                e = spec.exponent
                lhs = aw ** ((1 - e) / 2) * _ratio(z, m) ** (-e * s / 2) * d ** (g - 0.5)
            lhs = np.where(aw == 0, np.nan, lhs)
            return lhs, nv ** spec.exponent / c * ones
        # disk theorems: region is {ν <= |(z+m)/(z−m)|^{sgn Re z}}
        if m == 0 or nv == 0:
            return np.inf * ones, ones
        q = _ratio(z, m) ** s
        return spec.nu * ones, q


def member(spec: EnclosureSpec, z: complex, slack: float = MEMBER_SLACK) -> bool:
    """Does z satisfy the theorem's enclosure inequality (closed region)?

    ``slack`` is a relative allowance so that computed boundary points test
    as members despite rounding.
    """
    z = complex(z)
    if spec.theorem == "T2.8" and spec.m > 0 and (z == spec.m or z == -spec.m):
        raise SingularPointError("T2.8 inequality is singular at z = ±m")
    if spec.theorem == "T2.8" and spec.m == 0 and z == 0:
        raise SingularPointError("T2.8 inequality is singular at z = 0 for m = 0")
    lhs, rhs = sides(spec, z)
    lhs, rhs = float(lhs), float(rhs)
    if math.isnan(lhs) or math.isnan(rhs):
        raise SingularPointError(f"{spec.theorem} inequality undefined at z = {z}")
    return lhs <= rhs * (1 + slack)


def member_grid(spec: EnclosureSpec, Z, slack: float = MEMBER_SLACK) -> np.ndarray:
    lhs, rhs = sides(spec, Z)
    with np.errstate(invalid="ignore"):
        return np.where(np.isnan(lhs), False, lhs <= rhs * (1 + slack))


@dataclass(frozen=True)
class Disks:
    c_plus: complex
    c_minus: complex
    radius: float
    equivalence_residual: float


def disks(spec: EnclosureSpec) -> Disks:
    """Centers and radius of the two closed disks of T2.7, T2.9 or DFS."""
    if spec.theorem not in DISK_THEOREMS:
        raise RegionError(f"{spec.theorem} is not a disk theorem")
    m = spec.m
    if m <= 0:
        raise RegionError("disks need m > 0 (massless case has no eigenvalues)")
    if spec.norm_value <= 0:
        raise RegionError("disks need a positive norm")
    if spec.theorem == "T2.7":
        c0, v = spec.constant, spec.norm_value
        if not v < c0:
            raise RegionError("smallness assumption violated: need norm < C0")
        den = c0 ** 4 - v ** 4
        centre = m * (c0 ** 4 + v ** 4) / den
        radius = m * 2 * c0 ** 2 * v ** 2 / den
    else:
        nu = spec.nu
        if not nu > 1:
            raise RegionError(f"smallness assumption violated: nu = {nu} <= 1")
        centre = m * (nu * nu + 1) / (nu * nu - 1)
        radius = m * 2 * nu / (nu * nu - 1)
    # equality C₀/|v| = |(z+m)/(z−m)|^{1/2} (resp. ν = |(z+m)/(z−m)|) on the right circle
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    pts = centre + radius * np.exp(1j * th)
    lhs, rhs = sides(spec, pts)
    resid = float(np.max(np.abs(lhs - rhs) / rhs))
    if resid > EQUALITY_TOL:
        raise RegionError(f"disk/inequality equivalence failed: residual {resid:.3e}")
    return Disks(complex(centre), complex(-centre), float(radius), resid)


# -- boundary sampling --------------------------------------------------------


@dataclass
class Boundary:
    points: np.ndarray  # complex
    components: np.ndarray  # int, one per point
    diagnostic: str = ""

    @property
    def ncomponents(self) -> int:
        return int(np.unique(self.components).size)

    def rows(self):
        for c, p in zip(self.components, self.points):
            yield int(c), float(p.real), float(p.imag)


def _cassini(spec: EnclosureSpec, samples: int) -> Boundary:
    lhs0, rhs = sides(spec, 0j)
    g = 0.5 if spec.theorem == "T2.1" else spec.gamma
    t = float(rhs) ** (1.0 / g)  # |z² − m²| = t
    m2 = spec.m ** 2
    if m2 == 0:
        th = np.linspace(0, 2 * np.pi, samples, endpoint=False)
        pts = np.sqrt(t) * np.exp(1j * th)
        return Boundary(pts, np.zeros(samples, int), "circle |z|^2 = t")
    half = max(samples // 2, 8)
    if abs(t - m2) <= 1e-12 * m2:
        # lemniscate: lobes meet at the origin
        phi = np.linspace(-np.pi, np.pi, half)
        lobe = np.sqrt(m2 + m2 * np.exp(1j * phi))
        lobe[0] = lobe[-1] = 0.0
        pts = np.concatenate([lobe, -lobe[1:-1]])
        return Boundary(pts, np.zeros(pts.size, int), "single component self-touching at the origin")
    if t < m2:
        phi = np.linspace(-np.pi, np.pi, half, endpoint=False)
        lobe = np.sqrt(m2 + t * np.exp(1j * phi))
        pts = np.concatenate([lobe, -lobe])
        comp = np.r_[np.zeros(half, int), np.ones(half, int)]
        return Boundary(pts, comp, "two components around ±m")
    phi = np.linspace(-np.pi, np.pi, half + 1)
    right = np.sqrt(m2 + t * np.exp(1j * phi))
    y = np.sqrt(t - m2)  # exact imaginary-axis crossings
    right[0], right[-1] = -1j * y, 1j * y
    pts = np.concatenate([right, -right[1:-1]])
    return Boundary(pts, np.zeros(pts.size, int), "single component")


def _disk_boundary(spec: EnclosureSpec, samples: int) -> Boundary:
    if spec.m == 0 or spec.norm_value == 0:
        return Boundary(np.zeros(0, complex), np.zeros(0, int), "empty region: no eigenvalues")
    d = disks(spec)
    half = max(samples // 2, 8)
    th = np.linspace(0, 2 * np.pi, half, endpoint=False)
    circ = d.radius * np.exp(1j * th)
    pts = np.concatenate([d.c_plus + circ, d.c_minus - circ])
    return Boundary(pts, np.r_[np.zeros(half, int), np.ones(half, int)], "two closed disks")


def _log_gap(spec: EnclosureSpec, Z) -> np.ndarray:
    lhs, rhs = sides(spec, Z)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.log(lhs) - np.log(rhs)
    g = np.where(np.isnan(g), 60.0, g)
    return np.clip(g, -60.0, 60.0)


def _bisect(spec: EnclosureSpec, a: complex, b: complex, iters: int = 80) -> complex:
    ga = float(_log_gap(spec, a))
    for _ in range(iters):
        mid = 0.5 * (a + b)
        gm = float(_log_gap(spec, mid))
        if (gm <= 0) == (ga <= 0):
            a, ga = mid, gm
        else:
            b = mid
        if a == b:
            break
    return 0.5 * (a + b)


def default_extent(spec: EnclosureSpec) -> float:
    scale = max(spec.m, 1.0)
    if spec.theorem == "T2.5" and spec.m > 0:
        eps = spec.norm_value / spec.constant
        scale = spec.m / math.sqrt(max(1 - eps * eps, 1e-6))
    return 2.5 * scale


def _traced(spec: EnclosureSpec, samples: int, extent: float | None) -> Boundary:
    from skimage.measure import find_contours

    X = default_extent(spec) if extent is None else float(extent)
    res = max(64, samples // 2) | 1  # odd count keeps nodes off ±m generically
    xs = np.linspace(-X, X, res) * (1 + 1e-7)
    ys = np.linspace(-X, X, res) * (1 - 1e-7)
    Z = xs[None, :] + 1j * ys[:, None]
    G = _log_gap(spec, Z)
    pts, comp = [], []
    cid = 0
    for contour in find_contours(G, 0.0):
        run = []
        for r, c in contour:
            if abs(r - round(r)) < 1e-9:
                i = int(round(r))
                j0 = min(int(math.floor(c)), res - 2)
                a, b = Z[i, j0], Z[i, j0 + 1]
            else:
                j = int(round(c))
                i0 = min(int(math.floor(r)), res - 2)
                a, b = Z[i0, j], Z[i0 + 1, j]
            zb = _bisect(spec, a, b)
            lhs, rhs = (float(v) for v in sides(spec, zb))
            if np.isfinite(lhs) and rhs > 0 and abs(lhs - rhs) <= EQUALITY_TOL * rhs:
                run.append(zb)
            elif run:
                pts.extend(run)
                comp.extend([cid] * len(run))
                cid += 1
                run = []
        if run:
            pts.extend(run)
            comp.extend([cid] * len(run))
            cid += 1
    diag = f"traced on [-{X:g}, {X:g}]^2 with a {res}x{res} grid"
    return Boundary(np.asarray(pts, complex), np.asarray(comp, int), diag)


def boundary(spec: EnclosureSpec, samples: int = 720, extent: float | None = None) -> Boundary:
    """Points where the enclosure inequality holds with equality.

    Cassini curves (T2.1/T2.2) use w = z² − m² = t·e^{iφ}; disk theorems use
    the circles; other regions are traced with marching squares and each
    vertex bisected onto the zero set along its grid edge (points where the
    sign change is a jump discontinuity are discarded).
    """
    if samples < 16:
        raise RegionError("need at least 16 samples")
    t = spec.theorem
    empty = Boundary(np.zeros(0, complex), np.zeros(0, int))
    if t == "T2.2" and spec.gamma == 0:
        empty.diagnostic = "gamma = 0: no eigenvalues if the smallness test holds, no enclosure otherwise"
        return empty
    _, rhs = sides(spec, 1j)
    if t not in DISK_THEOREMS and float(rhs) == 0:
        empty.diagnostic = "empty region: right-hand side is zero"
        return empty
    if t in CASSINI_THEOREMS:
        return _cassini(spec, samples)
    if t in DISK_THEOREMS:
        return _disk_boundary(spec, samples)
    if t == "T2.5" and spec.m == 0:
        empty.diagnostic = "empty region: massless case has no eigenvalues"
        return empty
    return _traced(spec, samples, extent)
