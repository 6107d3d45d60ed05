import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diracbound import lab, regions, rigidity
from diracbound.clifford import dirac_matrices
from diracbound.matrixcore import spectral_norm

RIGID = [("i", 1), ("i", 2), ("ii", 1), ("ii", 3), ("iii", 1), ("iii", 5), ("iv", 3), ("iv", 4), ("ii", 6)]


def z_samples(seed, count=20):
    rng = np.random.default_rng(seed)
    return [complex(rng.uniform(-4, 4), rng.choice([-1, 1]) * rng.uniform(0.2, 4)) for _ in range(count)]


# -- grid ----------------------------------------------------------------------------------


def test_grid_basics():
    g = lab.GridModel(40, 64)
    assert g.h == pytest.approx(40 / 64)
    assert g.x[0] == -20 and g.x.size == 64
    xi = np.sort(g.xi)
    assert xi[0] == pytest.approx(-math.pi / g.h)  # Nyquist, unpaired
    assert np.allclose(xi[1:], -xi[1:][::-1])


@pytest.mark.parametrize("M", [8, 100, 0])
def test_grid_rejects_bad_sizes(M):
    with pytest.raises(lab.LabError):
        lab.GridModel(10, M)


# -- explicit kernel ---------------------------------------------------------------------------


def test_kernel_examples():
    r = lab.schrodinger_kernel_bound_check(4j)
    assert r.bound == pytest.approx(0.25) and r.sup == pytest.approx(0.25) and r.ratio == pytest.approx(1)
    r = lab.schrodinger_kernel_bound_check(-1)
    assert r.sup == pytest.approx(0.5) and r.bound == pytest.approx(0.5)
    assert lab.schrodinger_kernel_bound_check(100j).diagonal_ratio == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("z", z_samples(0))
def test_kernel_ratio_is_one_on_the_diagonal(z):
    r = lab.schrodinger_kernel_bound_check(z)
    assert abs(r.diagonal_ratio - 1) < 1e-12
    assert r.ratio <= 1 + 1e-12


@pytest.mark.parametrize("z", [0, 2.5, 1e-3])
def test_kernel_rejects_spectrum(z):
    with pytest.raises(lab.LabError):
        lab.schrodinger_kernel_bound_check(z)


# -- free resolvent -------------------------------------------------------------------------------


def test_symbol_at_zero_frequency():
    g = lab.GridModel(10, 32)
    R = lab.free_dirac_resolvent(g, dirac_matrices(1), 0.0, 1j)
    assert np.allclose(R.symbol[0], 1j * np.eye(2))


def test_symbol_symmetry():
    g = lab.GridModel(10, 32)
    R = lab.free_dirac_resolvent(g, dirac_matrices(1), 1.0, 0.3 + 1j)
    for k in range(1, 16):
        assert spectral_norm(R.symbol[k]) == pytest.approx(spectral_norm(R.symbol[-k]), rel=1e-12)


@pytest.mark.parametrize("n", [1, 3, 4])
@pytest.mark.parametrize("m,z", [(1.0, 2j), (0.0, 1 + 1j), (2.0, -0.5 - 0.7j)])
def test_resolvent_against_dense_inverse(n, m, z):
    g = lab.GridModel(40, 64)
    rep = dirac_matrices(n)
    D = lab.free_dirac(g, rep, m).dense()
    oracle = np.linalg.solve(D - z * np.eye(D.shape[0]), np.eye(D.shape[0]))
    R = lab.free_dirac_resolvent(g, rep, m, z)
    assert np.max(np.abs(R.dense() - oracle)) < 1e-9


def test_dense_free_operator_is_hermitian_circulant():
    g = lab.GridModel(20, 32)
    D = lab.free_dirac(g, dirac_matrices(1), 1.0).dense()
    assert np.allclose(D, D.conj().T, atol=1e-13)


@given(st.integers(0, 2 ** 32 - 1))
def test_matvec_matches_dense(seed):
    rng = np.random.default_rng(seed)
    g = lab.GridModel(30, 32)
    R = lab.free_dirac_resolvent(g, dirac_matrices(3), 1.0, complex(rng.uniform(-2, 2), rng.uniform(0.3, 2)))
    u = rng.normal(size=g.M * 4) + 1j * rng.normal(size=g.M * 4)
    assert np.max(np.abs(R.matvec(u) - R.dense() @ u)) < 1e-10 * max(1, np.abs(u).max())


def test_resonance_guard():
    g = lab.GridModel(2 * math.pi, 16)  # ξ = integers
    with pytest.raises(lab.ResonanceError):
        lab.free_dirac_resolvent(g, dirac_matrices(1), 0.0, 3.0)


# -- Birman-Schwinger -----------------------------------------------------------------------------


def _gauss(g, amp=1.0, width=1.0):
    return lab.sample_profile(f"gaussian:amp={amp},width={width}", g)


@pytest.mark.parametrize("cls,n", RIGID)
def test_factorized_identity(cls, n):
    g = lab.GridModel(40, 64)
    pot = rigidity.example(cls, n)
    v = lab.sample_profile("gaussian:amp=1.3,phase=0.4", g)
    for z in z_samples(hash((cls, n)) % 1000):
        res = lab.birman_schwinger(g, pot, v, 1.0, z)
        assert res.factor_relative < 1e-9 or res.factor_residual < 1e-12
        assert res.factorization_ok


def test_bs_matches_dense_assembly():
    # independent assembly: diag(a)⊗A · dense inverse · diag(b̄)⊗B*
    g = lab.GridModel(40, 64)
    pot = rigidity.example("ii", 3)
    rep = dirac_matrices(3)
    v = lab.sample_profile("gaussian:amp=1.1,width=2,phase=1.0", g)
    z = 0.4 + 1.3j
    D = lab.free_dirac(g, rep, 1.5).dense()
    Rd = np.linalg.inv(D - z * np.eye(D.shape[0]))
    a = np.sqrt(np.abs(v))
    bbar = v / np.abs(v) * a
    left = np.kron(np.diag(a), pot.A)
    right = np.kron(np.diag(bbar), pot.B.conj().T)
    K = left @ Rd @ right
    res = lab.birman_schwinger(g, pot, v, 1.5, z)
    assert res.support.size == g.M
    assert np.max(np.abs(res.K.matrix - K)) < 1e-10
    assert res.norm == pytest.approx(spectral_norm(K), rel=1e-10)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ra_iv_kernel_vanishes(n):
    g = lab.GridModel(40, 64)
    pot = rigidity.example("iv", n)
    for z in z_samples(n):
        assert lab.birman_schwinger(g, pot, _gauss(g), 0.8, z).norm < 1e-12


@pytest.mark.parametrize("n", [1, 3, 6])
def test_massless_ra_ii_kernel_vanishes(n):
    g = lab.GridModel(40, 64)
    pot = rigidity.example("ii", n)
    for z in z_samples(10 + n):
        assert lab.birman_schwinger(g, pot, _gauss(g), 0.0, z).norm < 1e-12


def test_bs_bound_massive_ra_ii():
    g = lab.GridModel(40, 512)
    pot = rigidity.example("ii", 1)
    v = _gauss(g)
    m, z = 2.0, 3j
    res = lab.birman_schwinger(g, pot, v, m, z, support_tol=1e-14)
    vk = regions.varkappa("ii", m, z)
    bound = vk / 2 * abs(z * z - m * m) ** -0.5 * lab.l1_norm(v, g)
    assert res.norm <= bound * 1.05


def test_bs_rejects_non_rigid():
    g = lab.GridModel(40, 64)
    pot = rigidity.general_potential(np.eye(2), 1)
    with pytest.raises(lab.LabError, match="not rigid"):
        lab.birman_schwinger(g, pot, _gauss(g), 1.0, 1j)


def test_bs_support_restriction_keeps_norm():
    g = lab.GridModel(40, 128)
    pot = rigidity.example("i", 1)
    v = lab.sample_profile("step:r0=3,amp=0.7", g)
    full = lab.birman_schwinger(g, pot, v, 1.0, 0.5 + 1j)
    assert full.support.size == np.count_nonzero(v)
    v2 = _gauss(g)
    a = lab.birman_schwinger(g, pot, v2, 1.0, 0.5 + 1j)
    b = lab.birman_schwinger(g, pot, v2, 1.0, 0.5 + 1j, support_tol=1e-14)
    assert b.support.size < a.support.size
    assert b.norm == pytest.approx(a.norm, rel=1e-10)


# -- sweeps ------------------------------------------------------------------------------------


def test_sweep_scaling_law_point_potential():
    g = lab.GridModel(40, 4096)
    pot = rigidity.example("ii", 1)
    v = lab.sample_profile("delta:amp=1", g)
    ys = np.geomspace(5, 50, 12)
    rows = lab.bs_norm_sweep(g, pot, v, 1.0, 1j * ys)
    slope = lab.loglog_slope(np.abs((1j * ys) ** 2 - 1), [r.bs_norm for r in rows])
    assert abs(slope + 0.5) < 0.05


def test_sweep_kappa_dominance():
    g = lab.GridModel(40, 512)
    pot = rigidity.example("ii", 1)
    v = _gauss(g)
    zs = [complex(x, y) for x in np.linspace(-3, 3, 7) for y in (0.3, 1.0, 3.0)]
    rows = lab.bs_norm_sweep(g, pot, v, 1.0, zs)
    ratios = [r.bs_norm / r.kappa_bound for r in rows]
    C = max(ratios)
    assert all(r.bs_norm <= C * r.kappa_bound * (1 + 1e-12) for r in rows)
    assert C <= 0.5 * 1.05  # the sharp 1-D constant 1/2


def test_sweep_far_point_is_small():
    g = lab.GridModel(40, 512)
    rows = lab.bs_norm_sweep(g, rigidity.example("ii", 1), _gauss(g), 1.0, [100j])
    assert rows[0].bs_norm < 0.05


def test_sweep_marks_resonances():
    g = lab.GridModel(2 * math.pi, 16)
    v = lab.sample_profile("gaussian:amp=1,width=0.3", g)
    rows = lab.bs_norm_sweep(g, rigidity.example("ii", 1), v, 0.0, [3.0, 1j])
    assert rows[0].status.startswith("resonance") and math.isnan(rows[0].bs_norm)
    assert rows[1].status == "ok"


def test_sweep_threads_match_serial():
    g = lab.GridModel(40, 128)
    pot, v = rigidity.example("i", 1), _gauss(g)
    zs = z_samples(3, 6)
    a = lab.bs_norm_sweep(g, pot, v, 1.0, zs)
    b = lab.bs_norm_sweep(g, pot, v, 1.0, zs, workers=3)
    assert [r.bs_norm for r in a] == [r.bs_norm for r in b]


# -- spectrum ------------------------------------------------------------------------------------


def test_free_operator_has_no_survivors():
    g = lab.GridModel(40, 128)
    r = lab.perturbed_spectrum(g, rigidity.example("ii", 1), np.zeros(g.M), 1.0)
    assert r.survivors.size == 0
    assert r.dist_free.max() < 1e-10


def test_ra_iv_spectrum_is_free():
    g = lab.GridModel(40, 128)
    r = lab.perturbed_spectrum(g, rigidity.example("iv", 4), _gauss(g, 2.0), 1.0)
    assert r.survivors.size == 0
    assert r.dist_free.max() < 1e-6


def test_enclosure_at_moderate_grid():
    g = lab.GridModel(40, 256)
    v = _gauss(g, 1.5)
    spec = regions.EnclosureSpec("T2.1", 1.0, lab.l1_norm(v, g))
    r = lab.perturbed_spectrum(g, rigidity.example("ii", 1), v, 1.0, spec)
    assert r.survivors.size == 2 and not r.violations
    for z in r.survivors:
        assert abs(z * z - 1) ** 0.5 <= 0.75 * 1.05


def test_enclosure_monotone_under_scaling():
    g = lab.GridModel(40, 256)
    v = _gauss(g, 1.5)
    spec = regions.EnclosureSpec("T2.1", 1.0, lab.l1_norm(v, g))
    r = lab.perturbed_spectrum(g, rigidity.example("ii", 1), v, 1.0, spec)
    enclosed = [z for z in r.survivors if regions.member(spec, z)]
    for s in (1.2, 2.0, 5.0):
        bigger = spec.with_norm(s * spec.norm_value)
        assert all(regions.member(bigger, z) for z in enclosed)


def test_small_potential_shift_is_linear():
    g = lab.GridModel(40, 128)
    pot = rigidity.example("ii", 1)
    shifts = [lab.perturbed_spectrum(g, pot, _gauss(g, a), 1.0).dist_free.max() for a in (1e-2, 1e-3, 1e-4)]
    assert shifts[0] > shifts[1] > shifts[2]
    for big, small in zip(shifts, shifts[1:]):
        assert 5 < big / small < 20


def test_filter_reports_everything():
    g = lab.GridModel(40, 128)
    r = lab.perturbed_spectrum(g, rigidity.example("ii", 1), _gauss(g, 1.5), 1.0)
    d = r.as_dict()
    assert len(d["eigenvalues"]) == g.M * 2
    assert {e["tag"] for e in d["eigenvalues"]} <= {"artifact", "survivor"}
    assert d["survivors"] == r.survivors.size


def test_violations_are_reported():
    g = lab.GridModel(40, 256)
    v = _gauss(g, 1.5)
    tight = regions.EnclosureSpec("T2.1", 1.0, 0.5 * lab.l1_norm(v, g))
    r = lab.perturbed_spectrum(g, rigidity.example("ii", 1), v, 1.0, tight)
    assert len(r.violations) == 2 and all(x["ratio"] > 1 for x in r.violations)


def test_spectrum_budget_and_decay():
    g = lab.GridModel(40, 4096)
    with pytest.raises(lab.LabError, match="budget"):
        lab.perturbed_spectrum(g, rigidity.example("ii", 3), np.zeros(g.M), 1.0)
    g = lab.GridModel(40, 64)
    with pytest.raises(lab.LabError, match="decay"):
        lab.perturbed_spectrum(g, rigidity.example("ii", 1), lab.sample_profile("step:r0=30,amp=1", g), 1.0)


def test_match_drift():
    assert lab.match_drift([1 + 1j], [1 + 1j]) == 0
    assert lab.match_drift([2.0], [2.02, 5]) == pytest.approx(0.01)
    assert lab.match_drift([], [1]) == 0 and lab.match_drift([1], []) == math.inf


# -- profiles -----------------------------------------------------------------------------------


def test_profiles():
    g = lab.GridModel(40, 1024)
    assert lab.l1_norm(lab.sample_profile("gaussian:amp=1.5", g), g) == pytest.approx(1.5, rel=1e-10)
    assert lab.l1_norm(lab.sample_profile("gaussian:amp=2,width=3,center=1", g), g) == pytest.approx(2, rel=1e-10)
    step = lab.sample_profile("step:r0=2,amp=0.5", g)
    assert set(np.unique(step.real)) == {0, 0.5}
    d = lab.sample_profile("delta:amp=3", g)
    assert np.count_nonzero(d) == 1 and lab.l1_norm(d, g) == pytest.approx(3)
    ph = lab.sample_profile("gaussian:amp=1,phase=1.5707963267948966", g)
    assert np.allclose(ph.real, 0, atol=1e-12)


def test_profile_file(tmp_path):
    p = tmp_path / "v.csv"
    p.write_text("x,value\n-1,0\n0,1+1j\n1,0\n")
    g = lab.GridModel(8, 16)
    v = lab.sample_profile(f"file:{p}", g)
    assert v[np.argmin(np.abs(g.x))] == pytest.approx(1 + 1j)
    assert v[0] == 0


@pytest.mark.parametrize("text", ["bogus:amp=1", "gaussian:width=1", "gaussian:amp", "step:r0=1,amp=1,extra=2"])
def test_profile_grammar_errors(text):
    with pytest.raises(lab.LabError):
        lab.sample_profile(text, lab.GridModel(8, 16))
