"""Acceptance suite: eight end-to-end criteria, one PASS/FAIL line each.

Run alone with `python3 -m pytest tests/test_acceptance.py -v` (lines appear in
the terminal summary) or `python3 tests/test_acceptance.py`.
"""
import math
import random
import time
from fractions import Fraction as Fr

import numpy as np

from diracbound import atlas, clifford, lab, norms, regions, rigidity
from diracbound.clifford import dirac_matrices
from test_atlas import reference_endpoints

RESULTS: list[str] = []


class Criterion:
    def __init__(self, number, title, limit=None):
        self.number, self.title, self.limit = number, title, limit
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.limit is not None and elapsed > self.limit:
            self.failures.append(f"runtime {elapsed:.1f}s > {self.limit}s")
        status = "FAIL" if self.failures else "PASS"
        detail = "; ".join(self.failures[:3] or self.notes)
        line = f"{status} [{self.number}] {self.title} ({elapsed:.2f}s)" + (f": {detail}" if detail else "")
        RESULTS.append(line)
        print(line)
        assert not self.failures, line
        return True  # the assertion above carries the failure


def test_1_clifford_suite():
    with Criterion(1, "Clifford suite n=1..10", limit=10) as c:
        worst = {}
        for n in range(1, 11):
            r = clifford.check_rep(dirac_matrices(n))
            c.check(r["anticommutator"] < 1e-14, f"anticommutator n={n}")
            c.check(r["explicit_vs_recursive"] == 0.0, f"explicit form n={n}")
            for key in ("alpha_tilde", "alpha_tilde_square", "alpha_tilde_adjoint", "alpha_tilde_commute"):
                c.check(r[key] < 1e-13, f"{key} n={n}")
                worst[key] = max(worst.get(key, 0.0), r[key])
        pairs = [(n, m) for n in range(2, 9) for m in range(2, n + 1) if (n - m) % 2 == 0]
        for n, m in pairs:
            c.check(clifford.recursion_check(n, m)["ok"], f"recursion ({n},{m})")
        c.notes.append(f"{len(pairs)} recursion pairs, max alpha-tilde residual {max(worst.values()):.1e}")


def test_2_rigidity_suite():
    with Criterion(2, "Rigidity suite", limit=60) as c:
        cases = ([("i", n) for n in range(1, 7)] + [("ii", n) for n in (1, 3, 5, 6, 8)]
                 + [("iii", n) for n in (1, 3, 5, 6)] + [("iv", n) for n in (3, 4, 5, 6)])
        rng = np.random.default_rng(2024)
        for cls, n in cases:
            pot = rigidity.example(cls, n)
            rpt = rigidity.verify(pot.A, pot.B, dirac_matrices(n))
            c.check(rpt.ra_class == cls and rpt.spatial_residual < 1e-13, f"example RA({cls}) n={n}")
            if n + 2 <= 8:
                big = dirac_matrices(n + 2)
                for _ in range(20):
                    M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                    A, B = rigidity.lift(pot.A, pot.B, M)
                    c.check(rigidity.verify(A, B, big).ra_class == cls, f"lift RA({cls}) n={n}")
        found = 0
        for cls, n in (("iv", 1), ("iv", 2), ("ii", 2), ("iii", 2), ("ii", 4), ("iii", 4)):
            rpt = rigidity.nonexistence_probe(cls, n, trials=1000, seed=0)
            found += rpt.counterexamples
            c.check(rpt.counterexamples == 0, f"probe RA({cls}) n={n}")
        c.notes.append(f"{len(cases)} examples, 6x1000 probe trials, {found} counterexamples")


def test_3_norms_suite():
    with Criterion(3, "Norms suite") as c:
        chi = norms.RadialProfile((1.0,), (1.0,), n=2)
        lor = norms.lorentz_radial_norm(chi, 2, 1)
        mt = norms.mt_norm(chi)
        c.check(abs(lor - math.sqrt(2)) < 1e-10, f"Lorentz chi = {lor}")
        c.check(abs(mt - 1) < 1e-10, f"MT chi = {mt}")
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(50):
            k = int(rng.integers(1, 8))
            radii = np.cumsum(rng.uniform(0.1, 2.0, k))
            prof = norms.RadialProfile(tuple(radii), tuple(rng.uniform(0, 3, k)), n=int(rng.integers(1, 5)))
            p = float(rng.uniform(1, 6))
            a, b = norms.lorentz_radial_norm(prof, p, p), norms.radial_lp_norm(prof, p)
            worst = max(worst, abs(a - b) / max(b, 1e-300))
        c.check(worst < 1e-12, f"L^(p,p) vs L^p deviation {worst:.1e}")
        c.notes.append(f"Lorentz {lor:.12f}, MT {mt:.12f}, L^(p,p) deviation {worst:.1e}")


def test_4_regions_suite():
    with Criterion(4, "Regions suite") as c:
        for norm in (0.5, 1.0, 1.9, 2.0, 2.1, 3.5):
            spec = regions.EnclosureSpec("T2.1", 1.0, norm)
            b = regions.boundary(spec, 400)
            target = (norm / 2) ** 2
            dev = np.max(np.abs(np.abs(b.points ** 2 - 1) - target)) / target
            c.check(dev < 1e-9, f"Cassini residual {dev:.1e} at norm {norm}")
            expected = 2 if norm < 2 else 1
            c.check(b.ncomponents == expected, f"{b.ncomponents} components at norm {norm}")
        d = regions.disks(regions.EnclosureSpec("T2.7", 1.0, math.sqrt(2), n=1, constant=2.0))
        c.check(abs(d.c_plus - 5 / 3) < 1e-12 and abs(d.c_minus + 5 / 3) < 1e-12, "T2.7 centres")
        c.check(abs(d.radius - 4 / 3) < 1e-12, "T2.7 radius")
        specs = [regions.EnclosureSpec("T2.7", 1.0, math.sqrt(2), n=1, constant=2.0),
                 regions.EnclosureSpec("T2.9", 1.0, 0.5, n=2),
                 regions.EnclosureSpec("DFS", 1.0, 0.5, n=1)]
        xs = np.linspace(-4, 4, 200)
        Z = xs[None, :] + 1j * xs[:, None]
        for spec in specs:
            dk = regions.disks(spec)
            c.check(dk.equivalence_residual < 1e-9, f"{spec.theorem} circle equivalence")
            inside = (np.abs(Z - dk.c_plus) <= dk.radius) | (np.abs(Z - dk.c_minus) <= dk.radius)
            on_edge = np.minimum(np.abs(np.abs(Z - dk.c_plus) - dk.radius), np.abs(np.abs(Z - dk.c_minus) - dk.radius)) < 1e-9
            agree = (regions.member_grid(spec, Z) == inside) | on_edge
            c.check(bool(agree.all()), f"{spec.theorem} grid consistency {agree.mean():.4f}")
        c.notes.append("Cassini residual < 1e-9, 2->1 components at norm 2m, disks (±5/3, 4/3)")


def _in_T_transcribed(n, x, y):
    g = x - y
    if n == 2:
        return Fr(2, 3) <= g < 1 and Fr(3, 4) < x <= 1 and 0 <= y < Fr(1, 4)
    return Fr(2, n + 1) <= g <= Fr(2, n) and x > Fr(n + 1, 2 * n) and y < Fr(n - 1, 2 * n)


def _endpoint_table(n):
    h = lambda a, b: Fr(a, b)  # noqa: E731
    if n == 2:
        return {"B": (h(3, 4), h(1, 12)), "B'": (h(11, 12), h(1, 4)), "B0": (h(5, 6), h(1, 6)), "A0": (h(1, 1), h(0, 1)),
                "C": (h(3, 4), h(1, 4)), "D": (h(3, 4), h(0, 1)), "D'": (h(1, 1), h(1, 4)), "E": (h(1, 4), h(1, 4)),
                "E'": (h(3, 4), h(3, 4)), "E0": (h(1, 2), h(1, 2))}
    if n == 3:
        return {"A": (h(2, 3), h(0, 1)), "A'": (h(1, 1), h(1, 3)), "B": (h(2, 3), h(1, 6)), "B'": (h(5, 6), h(1, 3)),
                "A0": (h(5, 6), h(1, 6)), "B0": (h(3, 4), h(1, 4)), "C": (h(2, 3), h(1, 3)), "E": (h(1, 3), h(1, 3)),
                "E'": (h(2, 3), h(2, 3)), "E0": (h(1, 2), h(1, 2)), "F": (h(2, 3), h(0, 1)), "F'": (h(1, 1), h(1, 3)),
                "P*": (h(3, 10), h(3, 10)), "P*'": (h(7, 10), h(7, 10)), "Po": (h(8, 20), h(6, 20)),
                "Po'": (h(14, 20), h(12, 20))}
    return None


def test_5_atlas_suite():
    with Criterion(5, "Atlas suite (exact rationals)") as c:
        rnd = random.Random(5)
        for n in range(2, 7):
            base = 2 * n * (n + 1)
            den = base * -(-120 // base)
            pts = [atlas.ExponentPoint(Fr(i, den), Fr(j, den), n) for i in range(den + 1) for j in range(den + 1)]
            pts = [p for p in pts if _in_T_transcribed(n, p.x, p.y)]
            sample = pts[:: max(1, len(pts) // 50)][:50]
            c.check(len(sample) == 50, f"T_{n} sample size {len(sample)}")
            c.check(all(atlas.gamma_exponent(p) == 0 and atlas.in_T(p) for p in sample), f"gamma on T_{n}")
            c.check(atlas.gamma_exponent(atlas.endpoints(n)["E0"]) == 1, f"gamma(E0) n={n}")
            for _ in range(500):
                d = rnd.randint(1, 120)
                p = atlas.ExponentPoint(Fr(rnd.randint(0, d), d), Fr(rnd.randint(0, d), d), n)
                a, b = atlas.classify(p), atlas.classify(p.dual())
                c.check(a.in_S == b.in_S and a.gamma == b.gamma, f"duality at {p.x},{p.y} n={n}")
        for n in (2, 3, 4, 5):
            got = {k: (v.x, v.y) for k, v in atlas.endpoints(n).items()}
            table = _endpoint_table(n)
            c.check(got == reference_endpoints(n), f"endpoint table n={n}")
            if table is not None:  # literal values, cross-checking the general formulas
                c.check(got == table, f"literal endpoint table n={n}")
        c.notes.append("gamma=0 on 5x50 T_n points, gamma(E0)=1, 2500 duality checks, endpoint tables n=2..5")


def test_6_lab_exact_identities():
    with Criterion(6, "Lab exact identities", limit=120) as c:
        rng = np.random.default_rng(6)
        zs = [complex(rng.uniform(-4, 4), rng.choice([-1, 1]) * rng.uniform(0.1, 4)) for _ in range(20)]
        for z in zs:
            r = lab.schrodinger_kernel_bound_check(z)
            c.check(abs(r.diagonal_ratio - 1) < 1e-12, f"kernel ratio at {z}")
        g = lab.GridModel(40, 64)
        dev = 0.0
        for n in (1, 3):
            rep = dirac_matrices(n)
            D = lab.free_dirac(g, rep, 1.0).dense()
            for z in zs[:5]:
                oracle = np.linalg.inv(D - z * np.eye(D.shape[0]))
                dev = max(dev, float(np.max(np.abs(lab.free_dirac_resolvent(g, rep, 1.0, z).dense() - oracle))))
        c.check(dev < 1e-9, f"Fourier vs dense {dev:.1e}")
        v = lab.sample_profile("gaussian:amp=1.2,width=1.5,phase=0.3", g)
        rigid = [("i", 1), ("i", 2), ("ii", 1), ("ii", 3), ("iii", 1), ("iii", 3), ("iv", 3), ("iv", 4)]
        worst = 0.0
        for cls, n in rigid:
            pot = rigidity.example(cls, n)
            for z in zs:
                res = lab.birman_schwinger(g, pot, v, 1.0, z)
                if res.norm > 1e-10:  # relative residual is meaningless for an identically zero K
                    worst = max(worst, res.factor_relative)
                c.check(res.factorization_ok, f"factorization RA({cls}) n={n} z={z}")
        for pot, m in ((rigidity.example("iv", 3), 1.0), (rigidity.example("ii", 1), 0.0)):
            kmax = max(lab.birman_schwinger(g, pot, v, m, z).norm for z in zs)
            c.check(kmax < 1e-12, f"vanishing kernel RA({pot.ra_class}) m={m}: {kmax:.1e}")
        c.notes.append(f"dense deviation {dev:.1e}, factorization relative residual {worst:.1e}")


def test_7_lab_enclosure():
    with Criterion(7, "Lab enclosure (RA(ii), n=1, m=1)", limit=300) as c:
        pot = rigidity.example("ii", 1)
        parts = []
        for amp in (0.5, 1.0, 1.5):
            found = {}
            for M in (256, 512, 1024):
                g = lab.GridModel(40, M)
                v = lab.sample_profile(f"gaussian:amp={amp}", g)
                spec = regions.EnclosureSpec("T2.1", 1.0, lab.l1_norm(v, g))
                rpt = lab.perturbed_spectrum(g, pot, v, 1.0, spec, enclosure_tol=0.05)
                found[M] = rpt.survivors
                for z in rpt.survivors:
                    c.check(abs(z * z - 1) ** 0.5 <= 0.5 * lab.l1_norm(v, g) * 1.05, f"enclosure amp={amp} M={M} z={z}")
                c.check(not rpt.violations, f"violations amp={amp} M={M}")
            drift = lab.match_drift(found[1024], found[512]) if found[1024].size else 0.0
            c.check(found[512].size == found[1024].size and drift < 0.01, f"drift amp={amp}: {drift:.2e}")
            parts.append(f"|v|={amp}: {found[512].size} survivors, drift {drift:.1e}")
        c.notes.append(", ".join(parts))


def test_8_bs_scaling():
    with Criterion(8, "BS scaling on the imaginary axis (RA(ii), m=1)") as c:
        g = lab.GridModel(40, 4096)
        v = lab.sample_profile("delta:amp=1", g)
        ys = np.geomspace(5, 50, 12)
        rows = lab.bs_norm_sweep(g, rigidity.example("ii", 1), v, 1.0, 1j * ys)
        slope = lab.loglog_slope(np.abs((1j * ys) ** 2 - 1), [r.bs_norm for r in rows])
        c.check(abs(slope + 0.5) <= 0.05, f"slope {slope:.3f}")
        c.notes.append(f"fitted slope {slope:.3f}")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
