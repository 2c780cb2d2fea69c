"""Finite-size diagonalization of the double-quadrature Dicke model.

One photon mode and two collective spins, each in its maximal-j sector.
The chain-I coupling enters through i(a - a^dag), so the Hamiltonian is
complex Hermitian in the product basis; it is solved as such rather than
through a real gauge, which would obscure the antiunitary chain-I
symmetry.

Basis layout: flat index n*(n_c+1)*(n_i+1) + mc_idx*(n_i+1) + mi_idx with
mc_idx = m_C + N_C/2, mi_idx = m_I + N_I/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .double import DoubleDickeParams
from .ed import (DEFAULT_BUDGET_NNZ, DEFAULT_SEED, DEGENERACY_REL_TOL,
                 TOP_ROW_TOL, EDResult)
from .errors import (BudgetExceeded, ConvergenceError, CutoffError,
                     CutoffWarning, DomainError)
from .gaussian import FluctuationReport, heisenberg_product

__all__ = [
    "DoubleEDBasis",
    "build_double_hamiltonian",
    "double_parities",
    "symmetry_residuals",
    "double_ground_state",
    "photon_moments_double",
    "photon_entropy_double",
    "converge_cutoff_double",
    "double_ed",
]

# diagonal + 4 corners per coupling
_NNZ_PER_ROW = 9
_DENSE_DIM = 900


@dataclass(frozen=True)
class DoubleEDBasis:
    """Photon Fock space times two maximal-j spin sectors."""

    n_c: int
    n_i: int
    n_max: int

    def __post_init__(self):
        if self.n_c < 1 or self.n_i < 1:
            raise DomainError("chain sizes must be positive integers")
        if self.n_max < 1:
            raise CutoffError("photon cutoff must be at least 1")

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_c + 1) * (self.n_i + 1)

    def index(self, n: int, mc_idx: int, mi_idx: int) -> int:
        return (n * (self.n_c + 1) + mc_idx) * (self.n_i + 1) + mi_idx


def _spin_ops(n_spins: int):
    """Jz diagonal and J+ + J- for the maximal sector j = n_spins/2."""
    j = n_spins / 2.0
    m = np.arange(n_spins + 1) - j
    jz = sp.diags(m)
    # ladder from m to m+1: sqrt((j - m)(j + m + 1)), clipped for roundoff
    lad = np.sqrt(np.clip((j - m[:-1]) * (j + m[:-1] + 1.0), 0.0, None))
    jx2 = sp.diags([lad, lad], offsets=[-1, 1])
    return jz, jx2


def _photon_ops(n_max: int):
    levels = np.arange(n_max + 1)
    nph = sp.diags(levels.astype(float))
    root = np.sqrt(levels[1:].astype(float))
    x2 = sp.diags([root, root], offsets=[-1, 1])          # a + a^dag
    # i(a - a^dag): <n+1|.|n> = -i sqrt(n+1), <n-1|.|n> = +i sqrt(n)
    ip2 = sp.diags([-1j * root, 1j * root], offsets=[-1, 1])
    return nph, x2, ip2


def build_double_hamiltonian(p: DoubleDickeParams,
                             basis: DoubleEDBasis) -> sp.csr_matrix:
    """Sparse complex Hermitian matrix of the two-chain Hamiltonian with
    couplings scaled by the respective 1/sqrt(N_k)."""
    nph, x2, ip2 = _photon_ops(basis.n_max)
    jz_c, jx2_c = _spin_ops(basis.n_c)
    jz_i, jx2_i = _spin_ops(basis.n_i)
    ic = sp.identity(basis.n_c + 1, format="csr")
    ii = sp.identity(basis.n_i + 1, format="csr")
    iph = sp.identity(basis.n_max + 1, format="csr")

    gc = p.lambda_c / math.sqrt(basis.n_c)
    gi = p.lambda_i / math.sqrt(basis.n_i)

    H = (p.omega_cav * sp.kron(sp.kron(nph, ic), ii)
         + p.omega0_c * sp.kron(sp.kron(iph, jz_c), ii)
         + p.omega0_i * sp.kron(sp.kron(iph, ic), jz_i)).astype(complex)
    if gc != 0.0:
        H = H + gc * sp.kron(sp.kron(x2, jx2_c), ii)
    if gi != 0.0:
        H = H + gi * sp.kron(sp.kron(ip2, ic), jx2_i)
    return sp.csr_matrix(H)


def double_parities(basis: DoubleEDBasis) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of the unitary halves of the two antiunitary symmetries:
    U_C = (-1)^(n + mc_idx) and U_I = (-1)^mi_idx.

    T_k = U_k composed with complex conjugation leaves the Hamiltonian
    invariant exactly; the product U_C U_I is the unitary total parity.
    """
    sn = (-1.0) ** np.arange(basis.n_max + 1)
    sc = (-1.0) ** np.arange(basis.n_c + 1)
    si = (-1.0) ** np.arange(basis.n_i + 1)
    ones_c = np.ones(basis.n_c + 1)
    ones_i = np.ones(basis.n_i + 1)
    u_c = np.kron(np.kron(sn, sc), ones_i)
    u_i = np.kron(np.kron(np.ones(basis.n_max + 1), ones_c), si)
    return u_c, u_i


def symmetry_residuals(H: sp.csr_matrix,
                       basis: DoubleEDBasis) -> tuple[float, float, float]:
    """Max-abs residuals of the two antiunitary invariances
    U_k conj(H) - H U_k and of total-parity commutation; all exactly zero
    for a correctly assembled matrix."""
    u_c, u_i = double_parities(basis)
    res = []
    for u in (u_c, u_i):
        U = sp.diags(u)
        D = U @ H.conj() - H @ U
        res.append(0.0 if D.nnz == 0 else float(np.abs(D.data).max()))
    P = sp.diags(u_c * u_i)
    D = P @ H - H @ P
    res.append(0.0 if D.nnz == 0 else float(np.abs(D.data).max()))
    return tuple(res)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    a = v[k]
    if a != 0:
        v = v * (abs(a) / a)
    return v


def _top_slab_weight(state: np.ndarray, basis: DoubleEDBasis) -> float:
    w = state.reshape(basis.n_max + 1, -1)
    return float(np.sum(np.abs(w[-1]) ** 2))


def double_ground_state(H: sp.csr_matrix, basis: DoubleEDBasis, k: int = 2,
                        seed: int = DEFAULT_SEED,
                        tol: float = 1e-12) -> EDResult:
    """Lowest two states of the complex Hermitian matrix; a numerically
    degenerate pair is resolved into total-parity eigenstates and the
    even member is returned."""
    if k < 2:
        raise DomainError("k must be at least 2 to resolve the gap")
    dim = H.shape[0]
    if dim <= _DENSE_DIM:
        evals, evecs = np.linalg.eigh(H.toarray())
        evals, evecs = evals[:k], evecs[:, :k]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v0 /= np.linalg.norm(v0)
        try:
            evals, evecs = eigsh(H, k=k, which="SA", v0=v0, tol=tol)
        except ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"sparse eigensolver stalled at dim {dim}") from exc
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]

    u_c, u_i = double_parities(basis)
    pi_tot = u_c * u_i
    e0, e1 = float(evals[0]), float(evals[1])
    gap01 = max(e1 - e0, 0.0)
    psi0, psi1 = evecs[:, 0], evecs[:, 1]
    if gap01 <= DEGENERACY_REL_TOL * max(1.0, abs(e0)):
        V = evecs[:, :2]
        P2 = V.conj().T @ (pi_tot[:, None] * V)
        P2 = 0.5 * (P2 + P2.conj().T)
        pw, pv = np.linalg.eigh(P2)
        psi0 = V @ pv[:, int(np.argmax(pw))]
        psi1 = V @ pv[:, int(np.argmin(pw))]
        pair = (float(pw.max()), float(pw.min()))
        parity = pair[0]
    else:
        parity = float(np.real(np.vdot(psi0, pi_tot * psi0)))
        pair = (parity, float(np.real(np.vdot(psi1, pi_tot * psi1))))
    psi0 = _fix_phase(psi0 / np.linalg.norm(psi0))

    top = _top_slab_weight(psi0, basis)
    converged = top <= TOP_ROW_TOL
    if not converged:
        warnings.warn(
            f"top Fock slab holds weight {top:.3e}; increase the cutoff",
            CutoffWarning, stacklevel=2)
    return EDResult(ground_energy=e0, gap01=gap01, state=psi0,
                    parity=parity, cutoff_converged=converged,
                    n_max_used=basis.n_max, pair_parities=pair)


def photon_moments_double(result: EDResult,
                          basis: DoubleEDBasis) -> FluctuationReport:
    """Photon <a>, <a^2>, <a^dag a> of the ground state, reduced over both
    chains and fed to the generic uncertainty-product reducer."""
    w = result.state.reshape(basis.n_max + 1, -1)
    levels = np.arange(basis.n_max + 1)
    root1 = np.sqrt(levels[1:].astype(float))
    occ = float(np.sum(levels[:, None] * np.abs(w) ** 2))
    mean = complex(np.sum(root1[:, None] * w[:-1].conj() * w[1:]))
    if basis.n_max >= 2:
        root2 = np.sqrt((levels[:-2] + 1.0) * (levels[:-2] + 2.0))
        a_sq = complex(np.sum(root2[:, None] * w[:-2].conj() * w[2:]))
    else:
        a_sq = 0.0j
    return heisenberg_product(mean_a=mean, a_sq=a_sq, occupation=occ)


def photon_entropy_double(result: EDResult, basis: DoubleEDBasis,
                          floor: float = 1e-14) -> float:
    """Entanglement entropy (bits) between the photon and both chains."""
    w = result.state.reshape(basis.n_max + 1, -1)
    rho = w @ w.conj().T
    vals = np.linalg.eigvalsh(rho)
    vals = vals[vals > floor]
    return float(-np.sum(vals * np.log2(vals)))


def _hp_at(p: DoubleDickeParams, n_c: int, n_i: int, n_max: int,
           seed: int) -> float:
    basis = DoubleEDBasis(n_c=n_c, n_i=n_i, n_max=n_max)
    H = build_double_hamiltonian(p, basis)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CutoffWarning)
        res = double_ground_state(H, basis, seed=seed)
    return photon_moments_double(res, basis).hp


def converge_cutoff_double(p: DoubleDickeParams, tol: float = 1e-8,
                           budget_nnz: int = DEFAULT_BUDGET_NNZ,
                           start: int | None = None,
                           seed: int = DEFAULT_SEED) -> int:
    """Smallest cutoff from a halving grid whose hp is stable, confirmed
    at the next grid point up; same walk as the single-chain version."""
    if p.n_c is None or p.n_i is None:
        raise DomainError("chain sizes n_c and n_i are required for ED")
    lam = max(p.lambda_c, p.lambda_i)
    nbar = max(p.n_c, p.n_i)
    n0 = start if start is not None else max(
        8, math.ceil(4.0 * (nbar * lam ** 2 / p.omega_cav ** 2
                            + math.sqrt(nbar))))

    def stable(n: int) -> bool:
        probe = max(n + 1, math.ceil(1.25 * n))
        need = _NNZ_PER_ROW * (probe + 1) * (p.n_c + 1) * (p.n_i + 1)
        if need > budget_nnz:
            raise BudgetExceeded(
                f"cutoff probe needs about {need} stored entries, "
                f"budget is {budget_nnz}", needed=need, budget=budget_nnz)
        a = _hp_at(p, p.n_c, p.n_i, n, seed)
        b = _hp_at(p, p.n_c, p.n_i, probe, seed)
        return abs(a - b) < tol

    grid = [n0]
    while grid[-1] > 1:
        grid.append(grid[-1] // 2)
    grid.reverse()
    for i, cand in enumerate(grid):
        if stable(cand):
            if i + 1 == len(grid) or stable(grid[i + 1]):
                return cand
    n = n0
    while True:
        n *= 2
        if stable(n):
            return n


def double_ed(p: DoubleDickeParams, n_max: int, k: int = 2,
              seed: int = DEFAULT_SEED,
              budget_nnz: int = DEFAULT_BUDGET_NNZ,
              tol: float = 1e-12) -> tuple[EDResult, float, FluctuationReport]:
    """Ground state, photon entanglement entropy (bits), and photon
    fluctuation report at the given cutoff.  Requires n_c and n_i on the
    params."""
    if p.n_c is None or p.n_i is None:
        raise DomainError("chain sizes n_c and n_i are required for ED")
    basis = DoubleEDBasis(n_c=p.n_c, n_i=p.n_i, n_max=n_max)
    need = _NNZ_PER_ROW * basis.dim
    if need > budget_nnz:
        raise BudgetExceeded(
            f"matrix needs about {need} stored entries, budget is "
            f"{budget_nnz}", needed=need, budget=budget_nnz)
    H = build_double_hamiltonian(p, basis)
    res = double_ground_state(H, basis, k=k, seed=seed, tol=tol)
    s_bits = photon_entropy_double(res, basis)
    rep = photon_moments_double(res, basis)
    return res, s_bits, rep
