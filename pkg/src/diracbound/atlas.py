"""Exponent geometry for uniform resolvent estimates, in exact rationals.

Points are (x, y) = (1/p, 1/q) in the unit square.  Regions:

* T_n  uniform estimates (γ = 0),
* P    radial estimates off the uniform range,
* S    range of the γ(n, p, q) estimate, S = {0 <= x − y <= 2/n} minus S0,
* R̃    the two triangles where the γ estimate is not known to be sharp.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Fr


class AtlasError(ValueError):
    pass


@dataclass(frozen=True)
class ExponentPoint:
    x: Fr
    y: Fr
    n: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fr(self.x))
        object.__setattr__(self, "y", Fr(self.y))
        if self.n < 2:
            raise AtlasError("exponent geometry needs n >= 2")
        if not (0 <= self.x <= 1 and 0 <= self.y <= 1):
            raise AtlasError(f"({self.x}, {self.y}) lies outside the unit square")

    @classmethod
    def from_pq(cls, p, q, n: int) -> "ExponentPoint":
        return cls(_recip(p), _recip(q), n)

    def dual(self) -> "ExponentPoint":
        return ExponentPoint(1 - self.y, 1 - self.x, self.n)

    @property
    def gap(self) -> Fr:
        return self.x - self.y

    def __str__(self):
        return f"({self.x}, {self.y})"


def _recip(p) -> Fr:
    if isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return Fr(0)
    v = Fr(p)
    if v <= 0:
        raise AtlasError(f"exponent must be positive, got {p}")
    return 1 / v


def endpoints(n: int) -> dict[str, ExponentPoint]:
    """Every named endpoint defined in dimension n."""
    if n < 2:
        raise AtlasError("endpoints need n >= 2")

    def P(x, y):
        return ExponentPoint(Fr(x), Fr(y), n)

    pts = {
        "B": P(Fr(n + 1, 2 * n), Fr((n - 1) ** 2, 2 * n * (n + 1))),
        "B'": P(Fr(n * n + 4 * n - 1, 2 * n * (n + 1)), Fr(n - 1, 2 * n)),
        "A0": P(Fr(n + 2, 2 * n), Fr(n - 2, 2 * n)),
        "B0": P(Fr(n + 3, 2 * (n + 1)), Fr(n - 1, 2 * (n + 1))),
        "C": P(Fr(n + 1, 2 * n), Fr(n - 1, 2 * n)),
        "E": P(Fr(n - 1, 2 * n), Fr(n - 1, 2 * n)),
        "E'": P(Fr(n + 1, 2 * n), Fr(n + 1, 2 * n)),
        "E0": P(Fr(1, 2), Fr(1, 2)),
    }
    if n == 2:
        pts["D"] = P(Fr(3, 4), 0)
        pts["D'"] = P(1, Fr(1, 4))
        return pts
    pts["A"] = P(Fr(n + 1, 2 * n), Fr(n - 3, 2 * n))
    pts["A'"] = P(Fr(n + 3, 2 * n), Fr(n - 1, 2 * n))
    pts["F"] = P(Fr(2, n), 0)
    pts["F'"] = P(1, Fr(n - 2, n))
    if n % 2:
        ps = Fr(3 * (n - 1), 2 * (3 * n + 1))
        den = 2 * (n * n + 4 * n - 1)
        po, qo = Fr((n + 5) * (n - 1), den), Fr((n + 3) * (n - 1), den)
    else:
        ps = Fr(3 * n - 2, 2 * (3 * n + 2))
        den = 2 * (n * n + 3 * n - 2)
        po, qo = Fr(n * n + 3 * n - 6, den), Fr((n - 1) * (n + 2), den)
    pts["P*"] = P(ps, ps)
    pts["P*'"] = P(1 - ps, 1 - ps)
    pts["Po"] = P(po, qo)
    pts["Po'"] = P(1 - qo, 1 - po)
    return pts


def gamma_exponent(pt: ExponentPoint) -> Fr:
    """max{0, 1 − (n+1)/2·(x−y), (n+1)/2 − n·x, n·y − (n−1)/2}."""
    n = pt.n
    return max(
        Fr(0),
        1 - Fr(n + 1, 2) * pt.gap,
        Fr(n + 1, 2) - n * pt.x,
        n * pt.y - Fr(n - 1, 2),
    )


def z_power(pt: ExponentPoint) -> Fr:
    """Exponent of |z| in the resolvent bound: −1 + (n/2)(x − y)."""
    return -1 + Fr(pt.n, 2) * pt.gap


# -- exact geometry ------------------------------------------------------------


def _cross(o, a, b) -> Fr:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def on_segment(pt, a, b, include_a: bool = True, include_b: bool = True) -> bool:
    if _cross(a, b, pt) != 0:
        return False
    if not (min(a.x, b.x) <= pt.x <= max(a.x, b.x) and min(a.y, b.y) <= pt.y <= max(a.y, b.y)):
        return False
    if (pt.x, pt.y) == (a.x, a.y):
        return include_a
    if (pt.x, pt.y) == (b.x, b.y):
        return include_b
    return True


def in_triangle(pt, a, b, c) -> bool:
    """Closed triangle membership by orientation signs."""
    d1, d2, d3 = _cross(a, b, pt), _cross(b, c, pt), _cross(c, a, pt)
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def _same(pt, q) -> bool:
    return pt.x == q.x and pt.y == q.y


def in_T(pt: ExponentPoint) -> bool:
    n, x, y, g = pt.n, pt.x, pt.y, pt.gap
    if n == 2:
        return Fr(2, 3) <= g < 1 and Fr(3, 4) < x <= 1 and 0 <= y < Fr(1, 4)
    return Fr(2, n + 1) <= g <= Fr(2, n) and x > Fr(n + 1, 2 * n) and y < Fr(n - 1, 2 * n)


def in_P(pt: ExponentPoint) -> bool:
    n, g = pt.n, pt.gap
    return Fr(1, n) < g < Fr(2, n + 1) and pt.x > Fr(n + 1, 2 * n) and pt.y < Fr(n - 1, 2 * n)


def in_S0(pt: ExponentPoint) -> bool:
    e = endpoints(pt.n)
    diag = on_segment(pt, e["E"], e["E0"], True, False) or on_segment(pt, e["E0"], e["E'"], False, True)
    if pt.n == 2:
        return (
            on_segment(pt, e["B"], e["D"])
            or on_segment(pt, e["B'"], e["D'"])
            or diag
            or _same(pt, e["A0"])
        )
    return (
        on_segment(pt, e["A"], e["B"])
        or on_segment(pt, e["A'"], e["B'"])
        or diag
        or _same(pt, e["F"])
        or _same(pt, e["F'"])
    )


def in_S(pt: ExponentPoint) -> bool:
    return 0 <= pt.gap <= Fr(2, pt.n) and not in_S0(pt)


def in_R(pt: ExponentPoint) -> bool:
    """R̃ = R ∪ R' (empty for n = 2); each triangle minus the vertex E0."""
    if pt.n == 2:
        return False
    e = endpoints(pt.n)
    if _same(pt, e["E0"]):
        return False
    return in_triangle(pt, e["P*"], e["Po"], e["E0"]) or in_triangle(pt, e["P*'"], e["Po'"], e["E0"])


@dataclass
class ClassificationReport:
    point: ExponentPoint
    in_T: bool
    in_P: bool
    in_S: bool
    in_S0: bool
    in_R: bool
    endpoints: list = field(default_factory=list)
    estimates: list = field(default_factory=list)
    z_power: Fr = Fr(0)
    gamma: Fr = Fr(0)
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.point.n,
            "x": str(self.point.x),
            "y": str(self.point.y),
            "in_T": self.in_T,
            "in_P": self.in_P,
            "in_S": self.in_S,
            "in_S0": self.in_S0,
            "in_R": self.in_R,
            "endpoints": list(self.endpoints),
            "estimates": list(self.estimates),
            "z_power": str(self.z_power),
            "gamma": str(self.gamma),
            "notes": list(self.notes),
        }


def classify(pt: ExponentPoint) -> ClassificationReport:
    n = pt.n
    e = endpoints(n)
    hits = sorted(name for name, q in e.items() if _same(pt, q))
    rep = ClassificationReport(
        point=pt,
        in_T=in_T(pt),
        in_P=in_P(pt),
        in_S=in_S(pt),
        in_S0=in_S0(pt),
        in_R=in_R(pt),
        endpoints=hits,
        z_power=z_power(pt),
        gamma=gamma_exponent(pt),
    )
    if rep.in_T:
        rep.estimates.append("uniform")
    weak = {"B", "B'"} | ({"A", "A'"} if n >= 3 else set())
    if weak & set(hits):
        rep.estimates.append("restricted-weak-type")
    if rep.in_S:
        rep.estimates.append("gamma-lower-bound")
        if not rep.in_R:
            rep.estimates.append("gamma-upper-bound")
    if rep.in_P:
        rep.estimates.append("radial-on-P")
    if on_segment(pt, e["C"], e["B0"], False, False):
        rep.estimates.append("radial-angular-C-B0")
    if _same(pt, e["C"]):
        rep.estimates.append("radial-angular-at-C")
    if _same(pt, e["E0"]):
        rep.notes.append("E0 lies in S; the triangles of R̃ exclude E0")
    if n >= 3 and ({"F", "F'"} & set(hits)):
        rep.notes.append("excluded from S (isolated point of S0)")
    return rep


# -- rendering -----------------------------------------------------------------


def region_polygons(n: int) -> dict[str, list[ExponentPoint]]:
    """Closed polygons (vertex lists) outlining each region for drawing."""
    e = endpoints(n)

    def P(x, y):
        return ExponentPoint(Fr(x), Fr(y), n)

    stripe = [P(0, 0), P(Fr(2, n), 0), P(1, 1 - Fr(2, n)), P(1, 1)]
    if n == 2:
        T = [e["B"], e["D"], e["A0"], e["D'"], e["B'"]]
        return {"S": stripe, "T": T, "P": [e["C"], e["B"], e["B'"]]}
    return {
        "S": stripe,
        "T": [e["B"], e["A"], e["A'"], e["B'"]],
        "P": [e["C"], e["B"], e["B'"]],
        "R": [e["P*"], e["Po"], e["E0"]],
        "R'": [e["P*'"], e["Po'"], e["E0"]],
    }


def atlas_svg(n: int, size: int = 480, header: str = "") -> str:
    margin = 40
    span = size - 2 * margin

    def xy(pt):
        return margin + float(pt.x) * span, margin + (1 - float(pt.y)) * span

    colors = {"S": "#dde8f5", "T": "#8fc98f", "P": "#f2c46d", "R": "#e08a8a", "R'": "#e08a8a"}
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if header:
        out.append(f"<!--\n{header}\n-->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" fill="none" stroke="black"/>'
    )
    for name, poly in region_polygons(n).items():
        pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in map(xy, poly))
        out.append(f'<polygon points="{pts}" fill="{colors[name]}" stroke="#444" stroke-width="0.8" fill-opacity="0.8"><title>{name}</title></polygon>')
    for name, pt in sorted(endpoints(n).items()):
        a, b = xy(pt)
        out.append(f'<circle cx="{a:.3f}" cy="{b:.3f}" r="2.5" fill="black"/>')
        out.append(f'<text x="{a + 4:.3f}" y="{b - 4:.3f}" font-size="11" font-family="sans-serif">{name}</text>')
    out.append(f'<text x="{margin + span / 2}" y="{size - 10}" font-size="12" text-anchor="middle">1/p</text>')
    out.append(f'<text x="12" y="{margin + span / 2}" font-size="12" text-anchor="middle">1/q</text>')
    out.append(f'<text x="{margin}" y="24" font-size="13">exponent atlas, n = {n}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
