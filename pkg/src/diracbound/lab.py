"""Desk-scale numerics on a 1-D periodic Fourier grid.

Operators act on ℂ^N-valued grid functions, stored grid-major: index
j·N + a for grid point j and fiber component a.  The free Dirac operator
is α₁(−i∂ₓ) + m α_{n+1}, using only the first and the mass matrix of a
DiracRep ("1-D lattice, n-fiber" experiments).
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clifford import DiracRep, dirac_matrices
from .matrixcore import dagger, eigenvalues, spectral_norm
from .regions import EnclosureSpec, SingularPointError, kappa, sides
from .rigidity import RigidPotential, verify

RESONANCE_GUARD = 1e-8
RIGIDITY_TOL = 1e-10
DENSE_BUDGET = 8192
BOUNDARY_DECAY = 1e-10


class LabError(ValueError):
    pass


class ResonanceError(LabError):
    pass


@dataclass(frozen=True)
class GridModel:
    L: float
    M: int

    def __post_init__(self):
        if not self.L > 0:
            raise LabError("grid length must be positive")
        if self.M < 16 or self.M & (self.M - 1):
            raise LabError(f"M must be a power of two >= 16, got {self.M}")

    @property
    def h(self) -> float:
        return self.L / self.M

    @property
    def x(self) -> np.ndarray:
        return -self.L / 2 + self.h * np.arange(self.M)

    @property
    def xi(self) -> np.ndarray:
        """Frequencies 2πj/L in FFT order (j = 0..M/2−1, −M/2..−1)."""
        return 2 * np.pi * np.fft.fftfreq(self.M, d=self.h)


@dataclass
class DiscreteOperator:
    """Either a Fourier multiplier (symbol of shape (M, N, N)) or a dense
    matrix of shape (M·N, M·N), or both."""

    grid: GridModel
    N: int
    symbol: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def dense(self) -> np.ndarray:
        if self.matrix is None:
            self.matrix = circulant(self.symbol)
        return self.matrix

    def matvec(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        if self.symbol is None:
            return self.matrix @ u
        U = np.fft.fft(u.reshape(self.grid.M, self.N), axis=0)
        V = np.einsum("kab,kb->ka", self.symbol, U)
        return np.fft.ifft(V, axis=0).reshape(-1)


def circulant(symbol: np.ndarray, rows=None, cols=None) -> np.ndarray:
    """Dense matrix F* diag(symbol) F, optionally restricted to grid rows/cols.

    Entry (j, l) is the (N×N) block ifft(symbol)[(j − l) mod M].
    """
    M, N, _ = symbol.shape
    col = np.fft.ifft(symbol, axis=0)
    r = np.arange(M) if rows is None else np.asarray(rows)
    c = np.arange(M) if cols is None else np.asarray(cols)
    blocks = col[(r[:, None] - c[None, :]) % M]  # (R, C, N, N)
    return blocks.transpose(0, 2, 1, 3).reshape(r.size * N, c.size * N)


def _fiber_matrices(rep: DiracRep) -> tuple[np.ndarray, np.ndarray]:
    return rep.alpha(1), rep.mass_matrix


def free_dirac(grid: GridModel, rep: DiracRep, m: float) -> DiscreteOperator:
    a1, mass = _fiber_matrices(rep)
    sym = grid.xi[:, None, None] * a1[None] + m * mass[None]
    return DiscreteOperator(grid, rep.N, symbol=sym)


def _guard(grid: GridModel, m: float, z: complex) -> None:
    gap = np.min(np.abs(z * z - m * m - grid.xi ** 2))
    if gap <= RESONANCE_GUARD:
        raise ResonanceError(f"z = {z} resonates with a grid frequency (|z²−m²−ξ²| = {gap:.2e})")


def free_dirac_resolvent(grid: GridModel, rep: DiracRep, m: float, z: complex) -> DiscreteOperator:
    """(𝒟_m − z)^{-1} with symbol (α₁ξ + mα_{n+1} + z)/(ξ² + m² − z²)."""
    z = complex(z)
    _guard(grid, m, z)
    a1, mass = _fiber_matrices(rep)
    xi = grid.xi
    num = xi[:, None, None] * a1[None] + m * mass[None] + z * np.eye(rep.N)[None]
    return DiscreteOperator(grid, rep.N, symbol=num / (xi ** 2 + m * m - z * z)[:, None, None])


def schrodinger_resolvent_column(grid: GridModel, k2: complex) -> np.ndarray:
    """First column of R₀(k²) = (−∂² − k²)^{-1} as a grid matrix."""
    return np.fft.ifft(1.0 / (grid.xi ** 2 - k2))


# -- explicit 1-D kernel --------------------------------------------------------


@dataclass
class KernelReport:
    z: complex
    bound: float
    sup: float
    ratio: float
    diagonal_ratio: float


def schrodinger_kernel_bound_check(z: complex, samples: int = 200, reach: float = 10.0) -> KernelReport:
    """Compare sup |i/(2√z) e^{i√z|x−y|}| over sampled |x − y| with ½|z|^{−1/2}."""
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise LabError("z must lie off [0, ∞)")
    root = np.sqrt(z)
    if root.imag < 0:
        root = -root
    d = np.linspace(0.0, reach, samples)
    kern = np.abs(1j / (2 * root) * np.exp(1j * root * d))
    bound = 0.5 * abs(z) ** -0.5
    return KernelReport(z, bound, float(kern.max()), float(kern.max() / bound), float(kern[0] / bound))


# -- potentials on the grid -----------------------------------------------------


def sample_profile(text: str, grid: GridModel) -> np.ndarray:
    """Sample a scalar profile given by the mini-grammar.

    gaussian:amp=A,width=W[,center=C][,phase=T]  A e^{iT} e^{-((x−C)/W)²}/(W√π)  (‖v‖₁ = A)
    step:r0=R,amp=A[,phase=T]                    A e^{iT} on |x| ≤ R
    delta:amp=A[,center=C][,phase=T]             mass A at the grid point nearest C
    file:path.csv                                columns x,value (value may be re+imj)
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    x = grid.x
    if kind == "file":
        xs, vals = [], []
        with open(rest.strip(), newline="", encoding="utf-8") as fh:
            rows = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
            header = next(rows)
            if [c.strip().lower() for c in header[:2]] != ["x", "value"]:
                raise LabError("profile CSV needs header 'x,value'")
            for row in rows:
                if row and row[0].strip():
                    xs.append(float(row[0]))
                    vals.append(complex(row[1].replace(" ", "")))
        vals = np.asarray(vals)
        re_ = np.interp(x, xs, vals.real, left=0.0, right=0.0)
        im_ = np.interp(x, xs, vals.imag, left=0.0, right=0.0)
        return re_ + 1j * im_
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise LabError(f"malformed profile parameter {item!r}")
        params[key.strip().lower()] = float(val)
    phase = np.exp(1j * params.pop("phase", 0.0))
    try:
        if kind == "gaussian":
            A, W = params.pop("amp"), params.pop("width", 1.0)
            c = params.pop("center", 0.0)
            v = A * np.exp(-(((x - c) / W) ** 2)) / (W * math.sqrt(math.pi))
        elif kind == "step":
            R, A = params.pop("r0"), params.pop("amp")
            v = np.where(np.abs(x) <= R, A, 0.0)
        elif kind == "delta":
            A, c = params.pop("amp"), params.pop("center", 0.0)
            v = np.zeros(grid.M)
            v[int(np.argmin(np.abs(x - c)))] = A / grid.h
        else:
            raise LabError(f"unknown profile kind {kind!r}")
    except KeyError as exc:
        raise LabError(f"profile {kind!r} is missing parameter {exc.args[0]!r}") from None
    if params:
        raise LabError(f"unused profile parameters {sorted(params)}")
    return (v * phase).astype(complex)


def l1_norm(v, grid: GridModel) -> float:
    """Periodic-grid L¹ norm (rectangle rule: spectrally accurate for smooth v)."""
    return float(np.sum(np.abs(v)) * grid.h)


def _check_decay(v: np.ndarray) -> None:
    if max(abs(v[0]), abs(v[-1])) >= BOUNDARY_DECAY:
        raise LabError(f"profile must decay below {BOUNDARY_DECAY:g} at the box edge (|v| = {max(abs(v[0]), abs(v[-1])):.2e})")


def _check_rigid(pot: RigidPotential) -> DiracRep:
    rep = dirac_matrices(pot.n)
    rpt = verify(pot.A, pot.B, rep)
    if rpt.spatial_residual > RIGIDITY_TOL:
        raise LabError(
            f"potential is not rigid (max |A α_k B*| = {rpt.spatial_residual:.2e}); "
            "the factorized Birman–Schwinger form needs A α_k B* = 0"
        )
    return rep


# -- Birman–Schwinger -----------------------------------------------------------


@dataclass
class BSResult:
    z: complex
    K: DiscreteOperator
    norm: float
    support: np.ndarray
    factor_residual: float  # |K − factorized|, spectral
    factor_relative: float  # factor_residual / |K| (inf if |K| = 0)

    @property
    def factorization_ok(self) -> bool:
        return self.factor_relative < 1e-9 or self.factor_residual < 1e-12


def birman_schwinger(
    grid: GridModel,
    pot: RigidPotential,
    v,
    m: float,
    z: complex,
    support_tol: float = 0.0,
) -> BSResult:
    """K_z = diag(a)A (𝒟_m − z)^{-1} B* diag(b̄), a = |v|^{1/2}, b̄ = sgn(v)|v|^{1/2}.

    Rows/columns where v vanishes (or falls below ``support_tol``·max|v|)
    are dropped; with the default they are exactly zero.  The result is
    compared with [mAα_{n+1}B* + zAB*] ⊗ [a R₀(z² − m²) b̄].
    """
    z = complex(z)
    rep = _check_rigid(pot)
    v = np.asarray(v, dtype=complex)
    if v.shape != (grid.M,):
        raise LabError(f"profile must have {grid.M} samples")
    R = free_dirac_resolvent(grid, rep, m, z)
    av = np.abs(v)
    vmax = av.max(initial=0.0)
    S = np.flatnonzero(av > support_tol * vmax) if vmax > 0 else np.zeros(0, int)
    N = rep.N
    if S.size == 0:
        empty = np.zeros((0, 0), complex)
        return BSResult(z, DiscreteOperator(grid, N, matrix=empty), 0.0, S, 0.0, 0.0)
    a = np.sqrt(av[S])
    with np.errstate(invalid="ignore", divide="ignore"):
        sgn = np.where(av[S] > 0, v[S] / np.where(av[S] > 0, av[S], 1), 0)
    bbar = sgn * a
    A, Bs = pot.A, dagger(pot.B)
    col = np.fft.ifft(R.symbol, axis=0)
    blocks = col[(S[:, None] - S[None, :]) % grid.M]  # (s, s, N, N)
    K4 = np.einsum("ab,ijbc,cd->ijad", A, blocks, Bs) * (a[:, None] * bbar[None, :])[:, :, None, None]
    K = K4.transpose(0, 2, 1, 3).reshape(S.size * N, S.size * N)
    Q = m * A @ rep.mass_matrix @ Bs + z * A @ Bs
    g = schrodinger_resolvent_column(grid, z * z - m * m)
    G = g[(S[:, None] - S[None, :]) % grid.M] * (a[:, None] * bbar[None, :])
    F = np.kron(G, Q)
    norm = spectral_norm(K)
    resid = spectral_norm(K - F)
    rel = resid / norm if norm > 0 else (0.0 if resid == 0 else math.inf)
    return BSResult(z, DiscreteOperator(grid, N, matrix=K), norm, S, resid, rel)


@dataclass
class SweepRow:
    z: complex
    bs_norm: float
    kappa_bound: float
    status: str = "ok"


def bs_norm_sweep(
    grid: GridModel,
    pot: RigidPotential,
    v,
    m: float,
    zs,
    support_tol: float = 1e-14,
    workers: int = 1,
) -> list[SweepRow]:
    """‖K_z‖ for each z with the companion column κ(z)·‖v‖₁ (1-D, r = 1)."""
    v = np.asarray(v, dtype=complex)
    vnorm = l1_norm(v, grid)

    def one(z):
        z = complex(z)
        try:
            res = birman_schwinger(grid, pot, v, m, z, support_tol=support_tol)
        except ResonanceError as exc:
            return SweepRow(z, math.nan, math.nan, f"resonance: {exc}")
        try:
            kb = kappa("power", pot.ra_class, m, 1, 1.0, z) * vnorm
        except SingularPointError:
            kb = math.inf
        return SweepRow(z, res.norm, kb)

    zs = list(zs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(one, zs))
    return [one(z) for z in zs]


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


# -- perturbed spectrum --------------------------------------------------------


@dataclass
class EigenReport:
    eigenvalues: np.ndarray
    artifact: np.ndarray  # bool per eigenvalue
    dist_free: np.ndarray
    tol_ess: float
    tol_im: float
    spec: EnclosureSpec | None
    ratio: np.ndarray  # lhs/rhs of the enclosure inequality (nan if unchecked)
    enclosure_tol: float
    violations: list = field(default_factory=list)

    @property
    def survivors(self) -> np.ndarray:
        return self.eigenvalues[~self.artifact]

    def as_dict(self) -> dict:
        rows = []
        for i, z in enumerate(self.eigenvalues):
            rows.append(
                {
                    "re": float(z.real),
                    "im": float(z.imag),
                    "tag": "artifact" if self.artifact[i] else "survivor",
                    "dist_free": float(self.dist_free[i]),
                    "ratio": None if math.isnan(self.ratio[i]) else float(self.ratio[i]),
                }
            )
        return {
            "tol_ess": self.tol_ess,
            "tol_im": self.tol_im,
            "enclosure_tol": self.enclosure_tol,
            "theorem": None if self.spec is None else self.spec.theorem,
            "survivors": int((~self.artifact).sum()),
            "violations": self.violations,
            "eigenvalues": rows,
        }


def default_filter_tolerance(v, grid: GridModel, pot: RigidPotential) -> float:
    """First-order size 2‖v‖₁‖V‖/L of the shift of a plane-wave box mode."""
    return 2 * l1_norm(v, grid) * spectral_norm(pot.V) / grid.L


def perturbed_hamiltonian(grid: GridModel, pot: RigidPotential, v, m: float) -> np.ndarray:
    rep = dirac_matrices(pot.n)
    D = free_dirac(grid, rep, m).dense()
    return D + np.kron(np.diag(np.asarray(v, dtype=complex)), pot.V)


def perturbed_spectrum(
    grid: GridModel,
    pot: RigidPotential,
    v,
    m: float,
    spec: EnclosureSpec | None = None,
    tol_ess: float | None = None,
    tol_im: float | None = None,
    enclosure_tol: float = 0.0,
) -> EigenReport:
    """Eigenvalues of 𝒟_m + v·B*A, artifact filter, and enclosure check.

    An eigenvalue is tagged an essential-spectrum artifact when it lies
    within tol_ess of {±√(ξ² + m²)} and has |Im| < tol_im.  Survivors are
    checked against ``spec`` allowing lhs <= rhs·(1 + enclosure_tol).
    """
    rep = dirac_matrices(pot.n)
    if grid.M * rep.N > DENSE_BUDGET:
        raise LabError(f"M·N = {grid.M * rep.N} exceeds the dense budget {DENSE_BUDGET}")
    v = np.asarray(v, dtype=complex)
    _check_decay(v)
    H = perturbed_hamiltonian(grid, pot, v, m)
    ev = eigenvalues(H)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    free = np.sqrt(grid.xi ** 2 + m * m)
    free = np.unique(np.r_[free, -free])
    dist = np.min(np.abs(ev[:, None] - free[None, :]), axis=1)
    pert = default_filter_tolerance(v, grid, pot)
    t_ess = max(pert, 1e-8 * max(1.0, m)) if tol_ess is None else tol_ess
    t_im = max(pert, 1e-6) if tol_im is None else tol_im
    artifact = (dist < t_ess) & (np.abs(ev.imag) < t_im)
    ratio = np.full(ev.size, np.nan)
    violations = []
    if spec is not None:
        for i in np.flatnonzero(~artifact):
            lhs, rhs = (float(s) for s in sides(spec, ev[i]))
            ratio[i] = lhs / rhs if rhs > 0 else math.inf
            if not ratio[i] <= 1 + enclosure_tol:
                violations.append(
                    {"re": float(ev[i].real), "im": float(ev[i].imag), "ratio": float(ratio[i])}
                )
    return EigenReport(ev, artifact, dist, t_ess, t_im, spec, ratio, enclosure_tol, violations)


def match_drift(fine, coarse) -> float:
    """max over z in ``fine`` of min |z − w|/|z| over w in ``coarse``."""
    fine, coarse = np.asarray(fine), np.asarray(coarse)
    if fine.size == 0:
        return 0.0
    if coarse.size == 0:
        return math.inf
    d = np.min(np.abs(fine[:, None] - coarse[None, :]), axis=1) / np.abs(fine)
    return float(d.max())
