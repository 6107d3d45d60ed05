"""Recursive Dirac-matrix representation and its identities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrixcore import identity, kron, kron_all, kron_power

SIGMA0 = np.eye(2, dtype=np.complex128)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)

MAX_DIMENSION = 20


class CliffordError(ValueError):
    pass


def fiber_size(n: int) -> int:
    """N = 2^ceil(n/2)."""
    return 2 ** ((n + 1) // 2)


@dataclass(frozen=True)
class DiracRep:
    n: int
    N: int
    alphas: tuple
    betas: tuple

    def alpha(self, k: int) -> np.ndarray:
        """1-based access: alpha(1) .. alpha(n+1)."""
        if not 1 <= k <= self.n + 1:
            raise IndexError(f"alpha index {k} outside 1..{self.n + 1}")
        return self.alphas[k - 1]

    @property
    def mass_matrix(self) -> np.ndarray:
        return self.alphas[-1]


def _check_dim(n: int, max_n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise CliffordError(f"dimension must be an integer >= 1, got {n!r}")
    if n > max_n:
        raise CliffordError(
            f"n={n} exceeds the storage cap n <= {max_n} "
            f"({n + 1} dense matrices of size {fiber_size(n)}x{fiber_size(n)})"
        )


def _recursive_alphas(n: int) -> list[np.ndarray]:
    if n == 1:
        return [SIGMA1.copy(), SIGMA3.copy()]
    if n == 2:
        return [SIGMA1.copy(), SIGMA2.copy(), SIGMA3.copy()]
    half = identity(fiber_size(n) // 2)
    if n % 2:
        prev = _recursive_alphas(n - 1)
        return [kron(SIGMA1, a) for a in prev] + [kron(SIGMA3, half)]
    prev = _recursive_alphas(n - 2)
    return [kron(SIGMA1, half)] + [kron(SIGMA2, a) for a in prev] + [kron(SIGMA3, half)]


def _extract_betas(alphas: list[np.ndarray]) -> tuple:
    """β_k from α_k = [[0, β_k], [β_k*, 0]]; asserts the block structure."""
    N = alphas[0].shape[0]
    h = N // 2
    last = alphas[-1]
    expected = np.diag(np.r_[np.ones(h), -np.ones(h)]).astype(np.complex128)
    if not np.array_equal(last, expected):
        raise CliffordError("mass matrix is not diag(I, -I)")
    betas = []
    for k, a in enumerate(alphas[:-1], start=1):
        top, bot = a[:h, h:], a[h:, :h]
        if np.any(a[:h, :h]) or np.any(a[h:, h:]) or not np.array_equal(bot, top.conj().T):
            raise CliffordError(f"alpha_{k} lacks the off-diagonal block structure")
        betas.append(top.copy())
    return tuple(betas)


def dirac_matrices(n: int, max_n: int = MAX_DIMENSION) -> DiracRep:
    """Dirac matrices α_1..α_{n+1} in dimension n, built recursively."""
    _check_dim(n, max_n)
    alphas = _recursive_alphas(int(n))
    for a in alphas:
        a.setflags(write=False)
    betas = _extract_betas(alphas) if n >= 2 else ()
    return DiracRep(n=int(n), N=fiber_size(n), alphas=tuple(alphas), betas=betas)


def _even_closed_form(n: int, k: int) -> np.ndarray:
    h = n // 2
    if k <= h:
        return kron_all(kron_power(SIGMA2, k - 1), SIGMA1, kron_power(SIGMA0, h - k))
    if k == h + 1:
        return kron_power(SIGMA2, h)
    return kron_all(kron_power(SIGMA2, n + 1 - k), SIGMA3, kron_power(SIGMA0, k - h - 2))


def explicit_alphas(n: int) -> list[np.ndarray]:
    """Closed-form Kronecker expressions (no recursion)."""
    _check_dim(n, MAX_DIMENSION)
    if n == 1:
        return [SIGMA1.copy(), SIGMA3.copy()]
    if n % 2 == 0:
        return [_even_closed_form(n, k) for k in range(1, n + 2)]
    body = [kron(SIGMA1, _even_closed_form(n - 1, k)) for k in range(1, n + 1)]
    return body + [kron(SIGMA3, kron_power(SIGMA0, (n - 1) // 2))]


def alpha_tilde(rep: DiracRep) -> np.ndarray:
    """(−i)^floor(n/2) α_1 α_2 ... α_{n+1}."""
    prod = identity(rep.N)
    for a in rep.alphas:
        prod = prod @ a
    return (-1j) ** (rep.n // 2) * prod


def alpha_tilde_expected(rep: DiracRep) -> np.ndarray:
    if rep.n % 2:
        return kron(-1j * SIGMA2, identity(rep.N // 2))
    return identity(rep.N)


def anticommutator_residual(rep: DiracRep) -> float:
    """max over j,k of the max-entry error in α_jα_k + α_kα_j = 2δ I."""
    eye = identity(rep.N)
    worst = 0.0
    for j, a in enumerate(rep.alphas):
        for k, b in enumerate(rep.alphas[j:], start=j):
            target = 2 * eye if j == k else 0
            worst = max(worst, float(np.max(np.abs(a @ b + b @ a - target))))
    return worst


def check_rep(rep: DiracRep) -> dict:
    """Residuals of every structural identity; all should be ~0."""
    eye = identity(rep.N)
    at = alpha_tilde(rep)
    sign = (-1) ** rep.n
    out = {
        "n": rep.n,
        "N": rep.N,
        "hermitian": max(float(np.max(np.abs(a - a.conj().T))) for a in rep.alphas),
        "anticommutator": anticommutator_residual(rep),
        "explicit_vs_recursive": max(
            float(np.max(np.abs(a - b))) for a, b in zip(rep.alphas, explicit_alphas(rep.n))
        ),
        "alpha_tilde": float(np.max(np.abs(at - alpha_tilde_expected(rep)))),
        "alpha_tilde_square": float(np.max(np.abs(at @ at - sign * eye))),
        "alpha_tilde_adjoint": float(np.max(np.abs(at.conj().T - sign * at))),
        "alpha_tilde_commute": max(
            float(np.max(np.abs(a @ at - sign * at @ a))) for a in rep.alphas
        ),
    }
    if rep.betas:
        h = rep.N // 2
        worst = 0.0
        for j, bj in enumerate(rep.betas):
            for k, bk in enumerate(rep.betas):
                target = 2 * identity(h) if j == k else 0
                worst = max(worst, float(np.max(np.abs(bk @ bj.conj().T + bj @ bk.conj().T - target))))
        out["beta_relation"] = worst
    return out


def recursion_check(n: int, m: int) -> dict:
    """Check α^(n) against the composition of α^(m) and α^(n−m).

    Branches (f = floor(m/2)):
      k <= f                 : α_k^(n) = α_k^(m) ⊗ I
      f+1 <= k <= n−m+f+1    : α_k^(n) = α_{f+1}^(m) ⊗ α_{k−f}^(n−m)
      k >= n−m+f+2           : α_k^(n) = α_{k−(n−m)}^(m) ⊗ I
    For n = m the middle factor is the 1×1 identity.
    """
    if not (2 <= m <= n) or (n - m) % 2:
        raise CliffordError(f"recursion_check needs 2 <= m <= n with n-m even, got (n, m) = ({n}, {m})")
    big = dirac_matrices(n)
    small = dirac_matrices(m)
    d = n - m
    rest = dirac_matrices(d).alphas if d else (identity(1),)
    pad = identity(2 ** (d // 2))
    f = m // 2
    dev = {"low": 0.0, "middle": 0.0, "high": 0.0}
    for k in range(1, n + 2):
        if k <= f:
            branch, rhs = "low", kron(small.alpha(k), pad)
        elif k <= d + f + 1:
            branch, rhs = "middle", kron(small.alpha(f + 1), rest[k - f - 1])
        else:
            branch, rhs = "high", kron(small.alpha(k - d), pad)
        dev[branch] = max(dev[branch], float(np.max(np.abs(big.alpha(k) - rhs))))
    return {"n": n, "m": m, "max_deviation": dev, "ok": max(dev.values()) == 0.0}


def rep_to_json(rep: DiracRep) -> dict:
    def enc(a):
        return [[[float(x.real), float(x.imag)] for x in row] for row in a]

    return {
        "n": rep.n,
        "N": rep.N,
        "alphas": [enc(a) for a in rep.alphas],
        "betas": [enc(b) for b in rep.betas],
    }
