"""Rigid potentials: brick matrices, example families, verification, probes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import PAULI, SIGMA0, SIGMA1, SIGMA2, SIGMA3, DiracRep, dirac_matrices
from .matrixcore import as_matrix, dagger, identity, kron, nullspace, spectral_norm

ZERO_TOL = 1e-10
# products between ZERO_TOL and ZERO_TOL * AMBIGUITY_FACTOR are neither
# clearly zero nor clearly nonzero; classification then returns "none"
AMBIGUITY_FACTOR = 1e3
CLASSES = ("i", "ii", "iii", "iv")
PROBE_CASES = {("iv", 1), ("iv", 2), ("ii", 2), ("ii", 4), ("iii", 2), ("iii", 4)}


class RigidityError(ValueError):
    pass


def _sign(sign) -> int:
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", -1, "minus", "−"):
        return -1
    raise RigidityError(f"sign must be '+' or '-', got {sign!r}")


def _cls(ra_class) -> str:
    c = str(ra_class).lower().strip()
    if c.startswith("ra(") and c.endswith(")"):
        c = c[3:-1]
    if c not in CLASSES:
        raise RigidityError(f"unknown RA class {ra_class!r}")
    return c


@dataclass(frozen=True)
class BrickPair:
    k: int
    sign: int
    rho: np.ndarray
    tau: np.ndarray


def brick(k: int, sign="+") -> BrickPair:
    """2×2 pair (ρ^k_±, τ^k_±) with ρ σ1 τ* = ρ σ_k τ* = 0 (σ0 = I)."""
    s = _sign(sign)
    if k == 0:
        a = (SIGMA2 + 1j * SIGMA3) / 2
        b = (SIGMA0 + SIGMA1) / 2
        rho, tau = (a, b) if s > 0 else (b, a)
    elif k == 2:
        rho = tau = (SIGMA1 - s * 1j * SIGMA2) / 2
    elif k == 3:
        rho = tau = (SIGMA0 + s * SIGMA2) / 2
    else:
        raise RigidityError(f"brick tag must be 0, 2 or 3, got {k!r}")
    return BrickPair(k=k, sign=s, rho=rho.copy(), tau=tau.copy())


@dataclass(frozen=True)
class RigidPotential:
    n: int
    ra_class: str
    A: np.ndarray
    B: np.ndarray
    V: np.ndarray
    sign: int = 1
    scale: float = 1.0  # factor removed by normalization, to be folded into v

    @property
    def N(self) -> int:
        return self.A.shape[0]


@dataclass
class RAReport:
    n: int
    spatial_residual: float
    mass_product: float  # |A α_{n+1} B*|
    plain_product: float  # |A B*|
    v_norm: float  # |B* A|
    mass_zero: bool
    plain_zero: bool
    v_nonzero: bool
    ra_class: str
    norm_dev_A: float
    norm_dev_B: float
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _zero_state(q: float, scale: float) -> str:
    if q <= ZERO_TOL * scale:
        return "zero"
    if q >= ZERO_TOL * AMBIGUITY_FACTOR * scale:
        return "nonzero"
    return "ambiguous"


def verify(A, B, rep: DiracRep) -> RAReport:
    """Residuals and inferred RA class of the pair (A, B).

    Zero tests are relative to |A||B| (absolute 1e-10 for normalized pairs).
    """
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != (rep.N, rep.N) or B.shape != (rep.N, rep.N):
        raise RigidityError(f"A, B must be {rep.N}x{rep.N}, got {A.shape} and {B.shape}")
    Bs = dagger(B)
    na, nb = spectral_norm(A), spectral_norm(B)
    scale = max(na * nb, np.finfo(float).tiny)
    spatial = max(spectral_norm(A @ rep.alpha(k) @ Bs) for k in range(1, rep.n + 1))
    mass = spectral_norm(A @ rep.mass_matrix @ Bs)
    plain = spectral_norm(A @ Bs)
    vn = spectral_norm(Bs @ A)
    st_mass, st_plain, st_v = (_zero_state(q, scale) for q in (mass, plain, vn))
    notes = []
    cls = "none"
    if spatial > ZERO_TOL * scale:
        notes.append("A alpha_k B* != 0 for some spatial k")
    elif st_v != "nonzero":
        notes.append("V = B*A vanishes" if st_v == "zero" else "|V| is within the ambiguity band")
    elif "ambiguous" in (st_mass, st_plain):
        notes.append("a product lies in the ambiguity band; refusing to classify")
    else:
        cls = {
            ("nonzero", "nonzero"): "i",
            ("nonzero", "zero"): "ii",
            ("zero", "nonzero"): "iii",
            ("zero", "zero"): "iv",
        }[(st_mass, st_plain)]
    return RAReport(
        n=rep.n,
        spatial_residual=spatial,
        mass_product=mass,
        plain_product=plain,
        v_norm=vn,
        mass_zero=st_mass == "zero",
        plain_zero=st_plain == "zero",
        v_nonzero=st_v == "nonzero",
        ra_class=cls,
        norm_dev_A=abs(na - 1.0),
        norm_dev_B=abs(nb - 1.0),
        notes=notes,
    )


def admissible(ra_class, n: int) -> bool:
    c = _cls(ra_class)
    if n < 1:
        return False
    if c == "i":
        return True
    if c in ("ii", "iii"):
        return n % 2 == 1 or n >= 6
    return n >= 3


def _even_block(At: np.ndarray, Bt: np.ndarray, a_sign: int) -> tuple[np.ndarray, np.ndarray]:
    # A = ½[[Ã, ±ÃS], [Ã, ±ÃS]], B = ½[[B̃, B̃S], [B̃, B̃S]] with S = σ1⊗σ1
    S = kron(SIGMA1, SIGMA1)
    ones = np.ones((2, 1))
    A = 0.5 * np.kron(ones, np.hstack([At, a_sign * At @ S]))
    B = 0.5 * np.kron(ones, np.hstack([Bt, Bt @ S]))
    return A, B


def _base_pair(c: str, n: int, s: int, k: int) -> tuple[int, np.ndarray, np.ndarray]:
    """Smallest-dimension member (n0, A, B) of the family lifted to n."""
    if c == "i":
        p = brick(2, s)
        return (1 if n % 2 else 2), p.rho, p.tau
    if c in ("ii", "iii") and n % 2:
        p = brick(0 if c == "ii" else 3, s)
        return 1, p.rho, p.tau
    if c in ("ii", "iii"):
        p3, pk = brick(3, s), brick(k, s)
        At, Bt = kron(p3.rho, pk.rho), kron(p3.tau, pk.tau)
        A, B = _even_block(At, Bt, -1 if c == "ii" else 1)
        return 6, A, B
    # iv
    if n % 2:
        pk, p0 = brick(k, s), brick(0, s)
        return 3, kron(pk.rho, p0.rho), kron(pk.tau, p0.tau)
    p2, p0 = brick(2, s), brick(0, s)
    return 4, kron(p2.rho, p0.rho), kron(p2.tau, p0.tau)


def lift(A, B, M=None) -> tuple[np.ndarray, np.ndarray]:
    """Pair at dimension n from a pair at n − 2: (A ⊗ M, B ⊗ M^{-1}).

    Rigidity and the RA class carry over for any invertible M; the product
    B*A ⊗ (M^{-1})*M equals V ⊗ I_2 only for unitary M.
    """
    M = identity(2) if M is None else as_matrix(M)
    if M.shape != (2, 2):
        raise RigidityError("lifting matrix must be 2x2")
    Minv = np.linalg.inv(M)
    return kron(A, M), kron(B, Minv)


def example(ra_class, n: int, sign="+", k: int | None = None) -> RigidPotential:
    """The explicit example family for class ``ra_class`` in dimension n.

    ``k`` picks the free brick tag where the family has one (RA(iv) odd n,
    RA(ii)/(iii) even n); defaults follow the displayed instances.
    """
    c = _cls(ra_class)
    s = _sign(sign)
    if not admissible(c, n):
        raise RigidityError(f"no such potential exists: RA({c}) has no solutions in dimension n={n}")
    if k is None:
        k = 0 if c == "iv" else 3
    if k not in (0, 2, 3):
        raise RigidityError(f"brick tag must be 0, 2 or 3, got {k!r}")
    if c in ("ii", "iii") and n % 2 == 0 and k == 0:
        # ρ⁰(τ⁰)* = 0 kills ÃB̃*, which would leave an RA(iv) pair
        raise RigidityError("even-dimensional RA(ii)/RA(iii) families need brick tag 2 or 3")
    n0, A, B = _base_pair(c, n, s, k)
    for _ in range((n - n0) // 2):
        A, B = lift(A, B)
    na, nb = spectral_norm(A), spectral_norm(B)
    A, B = A / na, B / nb
    return RigidPotential(n=n, ra_class=c, A=A, B=B, V=dagger(B) @ A, sign=s, scale=na * nb)


def polar_split(V, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Factor V = B*A with A = √W, B = √W U*, where V = U W is the polar form.

    U is the partial isometry on the range of V; computed from one SVD so
    that W = √(V*V) and U W = V hold to rounding.
    """
    V = as_matrix(V)
    if V.shape[0] != V.shape[1]:
        raise RigidityError("polar_split needs a square matrix")
    u, s, vh = np.linalg.svd(V)
    r = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    w_half = (vh[:r].conj().T * np.sqrt(s[:r])[None, :]) @ vh[:r]
    U = u[:, :r] @ vh[:r]
    A = w_half
    B = w_half @ dagger(U) if r else np.zeros_like(V)
    return A, B


def general_potential(V, n: int) -> RigidPotential:
    A, B = polar_split(V)
    return RigidPotential(n=n, ra_class="general", A=A, B=B, V=as_matrix(V))


# -- non-existence probes ----------------------------------------------------


@dataclass
class ProbeReport:
    ra_class: str
    n: int
    trials: int
    seed: int
    counterexamples: int
    nullspace_dims: list
    draw_kinds: list

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["nullspace_histogram"] = {
            str(k): int(v) for k, v in zip(*np.unique(self.nullspace_dims, return_counts=True))
        }
        return d


def _constraint_requirements(c: str, rep: DiracRep):
    """(matrices M with A M B* = 0 imposed, matrices whose product must be nonzero)."""
    zero = [rep.alpha(k) for k in range(1, rep.n + 1)]
    mass, eye = rep.mass_matrix, identity(rep.N)
    if c == "iv":
        return zero + [mass, eye], []
    if c == "ii":
        return zero + [eye], [mass]
    if c == "iii":
        return zero + [mass], [eye]
    return zero, [mass, eye]


def probe_once(ra_class, rep: DiracRep, B, tol: float = 1e-9) -> tuple[int, bool]:
    """Search the solution space {A : A M B* = 0 for the class's M} for a
    pair meeting every nonzero requirement.

    Returns (nullspace dimension, counterexample found).  The requirements
    are linear in A, so a common nonzero element exists iff each required
    map is nonzero on the nullspace (a space is not a union of two proper
    subspaces).
    """
    c = _cls(ra_class)
    B = as_matrix(B)
    N = rep.N
    Bs = dagger(B)
    zeros, needs = _constraint_requirements(c, rep)
    # row-major vec(A M B*) = (I ⊗ (M B*)^T) vec(A)
    blocks = [np.kron(identity(N), (Mk @ Bs).T) for Mk in zeros]
    basis = nullspace(np.vstack(blocks), tol=tol)
    if not basis:
        return 0, False
    Z = np.hstack(basis)
    scale = max(spectral_norm(B), 1e-300)

    def restricted_norm(apply) -> float:
        cols = [apply(Z[:, j].reshape(N, N)).ravel() for j in range(Z.shape[1])]
        return spectral_norm(np.stack(cols, axis=1))

    ok_v = restricted_norm(lambda A: Bs @ A) > 1e-8 * scale
    ok_needs = all(restricted_norm(lambda A, Mk=Mk: A @ Mk @ Bs) > 1e-8 * scale for Mk in needs)
    return len(basis), bool(ok_v and ok_needs)


def _draw_B(rng: np.random.Generator, N: int, kind: str) -> np.ndarray:
    def gauss(shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    if kind == "gaussian":
        return gauss((N, N))
    if kind == "lowrank":
        r = int(rng.integers(1, N)) if N > 1 else 1
        return gauss((N, r)) @ gauss((r, N))
    # sparse entries from {0, ±1, ±i}: hits the non-generic configurations
    vals = np.array([0, 0, 1, -1, 1j, -1j])
    B = rng.choice(vals, size=(N, N))
    if not np.any(B):
        B[int(rng.integers(N)), int(rng.integers(N))] = 1
    return B.astype(np.complex128)


DRAW_KINDS = ("gaussian", "lowrank", "lattice")


def nonexistence_probe(ra_class, n: int, trials: int = 1000, seed: int = 0) -> ProbeReport:
    """Randomized search for pairs (A, B) of class RA(ra_class) in dimension n.

    Trial t draws B with generator seeded by (seed, t), cycling through
    full-rank Gaussian, low-rank Gaussian and sparse {0, ±1, ±i} draws.
    """
    c = _cls(ra_class)
    if (c, n) not in PROBE_CASES:
        raise RigidityError(f"no impossibility claim covers RA({c}) in dimension {n}")
    rep = dirac_matrices(n)
    dims, kinds, bad = [], [], 0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        kind = DRAW_KINDS[t % len(DRAW_KINDS)]
        dim, found = probe_once(c, rep, _draw_B(rng, rep.N, kind))
        dims.append(dim)
        kinds.append(kind)
        bad += found
    return ProbeReport(c, n, trials, seed, bad, dims, kinds)
