"""Sparse exact diagonalization of the Dicke model at finite N.

Works in the maximal-spin sector j = N/2 (the collective coupling never
leaves it), with basis states |n, m> indexed n*(N+1) + (m+j).  The
Hamiltonian

    H = omega a^dag a + omega0 Jz + (coupling/sqrt(N)) (a + a^dag)(J+ + J-)

is real symmetric with at most five nonzeros per row and commutes exactly
with the parity (-1)^(n + m + j).
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .dicke import DickeParams
from .errors import (BudgetExceeded, ConvergenceError, CutoffError,
                     CutoffWarning, DegenerateFit, DomainError)
from .fits import ExponentFit, _ols
from .gaussian import FluctuationReport, heisenberg_product

__all__ = [
    "EDBasis",
    "EDResult",
    "ScalingReport",
    "build_hamiltonian",
    "parity_diagonal",
    "ground_state",
    "photon_moments_ed",
    "photon_entropy_ed",
    "converge_cutoff",
    "scaling_at_critical",
    "save_state",
    "load_state",
]

# Top-Fock-row weight above which moments are flagged unreliable.
TOP_ROW_TOL = 1e-8
# gap01 below 1e-10*scale counts as a degenerate (cat) pair.
DEGENERACY_REL_TOL = 1e-10
DEFAULT_BUDGET_NNZ = int(5e7)
DEFAULT_SEED = 7

# Dense diagonalization below this dimension; iterative above.
_DENSE_DIM = 1200

_STATE_MAGIC = b"HPED"
_STATE_VERSION = 1


@dataclass(frozen=True)
class EDBasis:
    """Photon Fock ladder times the maximal-spin multiplet."""

    n_spins: int
    n_max: int

    def __post_init__(self):
        if not (isinstance(self.n_spins, (int, np.integer)) and self.n_spins >= 1):
            raise DomainError(f"n_spins must be a positive integer, got {self.n_spins!r}")
        if not (isinstance(self.n_max, (int, np.integer)) and self.n_max >= 1):
            raise CutoffError(f"n_max must be >= 1, got {self.n_max!r}")

    @property
    def j(self) -> float:
        return 0.5 * self.n_spins

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_spins + 1)

    def index(self, n: int, m: float) -> int:
        """Flat index of |n, m>, m in {-j .. j} in integer steps."""
        col = int(round(m + self.j))
        if not (0 <= n <= self.n_max and 0 <= col <= self.n_spins):
            raise DomainError(f"state (n={n}, m={m}) outside the basis")
        return n * (self.n_spins + 1) + col


@dataclass(frozen=True)
class EDResult:
    ground_energy: float
    gap01: float
    state: np.ndarray
    parity: float
    cutoff_converged: bool
    n_max_used: int
    # <Pi> of the two lowest states (parity-resolved when quasi-degenerate)
    pair_parities: tuple[float, float] = (math.nan, math.nan)


@dataclass(frozen=True)
class ScalingReport:
    """hp against system size at fixed couplings, with the power-law fit
    taken over the largest decade of N."""

    sizes: tuple[int, ...]
    hp_values: tuple[float, ...]
    cutoffs: tuple[int, ...]
    fit: ExponentFit
    fit_sizes: tuple[int, ...]


def _ladder_coeffs(basis: EDBasis) -> tuple[np.ndarray, np.ndarray]:
    j = basis.j
    m = -j + np.arange(basis.n_spins + 1)
    jp = np.sqrt(np.maximum(j * (j + 1) - m * (m + 1), 0.0))
    jm = np.sqrt(np.maximum(j * (j + 1) - m * (m - 1), 0.0))
    return jp, jm


def build_hamiltonian(p: DickeParams, basis: EDBasis) -> sp.csr_matrix:
    """Assemble the sparse Hamiltonian; real symmetric, <= 5 nonzeros/row."""
    nm = basis.n_spins + 1
    nn = basis.n_max + 1
    j = basis.j
    g = p.coupling / math.sqrt(basis.n_spins)

    levels = np.arange(nn)
    m_vals = -j + np.arange(nm)
    jp, jm = _ladder_coeffs(basis)

    diag = (p.omega * levels[:, None] + p.omega0 * m_vals[None, :]).ravel()

    # Transition blocks; each pair of mutually transposed operators is
    # generated from identical float products, so H is symmetric exactly.
    rows, cols, vals = [np.arange(basis.dim)], [np.arange(basis.dim)], [diag]
    root_n = np.sqrt(levels[1:])  # sqrt(n) for n = 1..n_max

    def add(dn: int, dm: int, amp: np.ndarray):
        # amp indexed by (n, m) of the source state
        n_src = levels[:-1] if dn > 0 else levels[1:]
        m_src = np.arange(nm - 1) if dm > 0 else np.arange(1, nm)
        nv, mv = np.meshgrid(n_src, m_src, indexing="ij")
        src = (nv * nm + mv).ravel()
        dst = ((nv + dn) * nm + (mv + dm)).ravel()
        rows.append(dst)
        cols.append(src)
        vals.append(amp.ravel())

    if g != 0.0:
        up = root_n  # photon raising amplitude from level n: sqrt(n+1)
        add(+1, +1, g * up[:, None] * jp[None, :-1])
        add(+1, -1, g * up[:, None] * jm[None, 1:])
        add(-1, +1, g * up[:, None] * jp[None, :-1])
        add(-1, -1, g * up[:, None] * jm[None, 1:])

    H = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim))
    return H.tocsr()


def parity_diagonal(basis: EDBasis) -> np.ndarray:
    """Diagonal of the parity operator, entries (-1)^(n + m + j)."""
    n_par = (-1.0) ** np.arange(basis.n_max + 1)
    m_par = (-1.0) ** np.arange(basis.n_spins + 1)
    return np.kron(n_par, m_par)


def _top_row_weight(state: np.ndarray, basis: EDBasis) -> float:
    top = state[-(basis.n_spins + 1):]
    return float(np.dot(top, top))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def ground_state(H: sp.spmatrix, basis: EDBasis, k: int = 2,
                 seed: int = DEFAULT_SEED, tol: float = 1e-12) -> EDResult:
    """Lowest k eigenpairs, deterministic for a fixed seed.

    A quasi-degenerate pair (gap01 below 1e-10 relative) is resolved by
    returning the even-parity combination of the two-dimensional ground
    space; nondegenerate ground states are parity eigenstates already.
    """
    dim = H.shape[0]
    if k < 2:
        raise DomainError("need at least two eigenpairs to report gap01")
    if dim <= _DENSE_DIM:
        w, v = np.linalg.eigh(H.toarray())
        evals, evecs = w[:k], v[:, :k]
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        v0 /= np.linalg.norm(v0)
        try:
            evals, evecs = spla.eigsh(H, k=k, which="SA", v0=v0, tol=tol)
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"eigensolver stalled at dim {dim}: "
                f"{len(exc.eigenvalues)} of {k} pairs converged",
                iterations=getattr(exc, "iterations", None)) from exc
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]

    e0 = float(evals[0])
    gap01 = max(float(evals[1] - evals[0]), 0.0)
    pi = parity_diagonal(basis)

    if gap01 <= DEGENERACY_REL_TOL * max(1.0, abs(e0)):
        # Diagonalize parity inside the degenerate pair; report the even
        # combination as the ground state.
        V = evecs[:, :2]
        p2 = V.T @ (pi[:, None] * V)
        p2 = 0.5 * (p2 + p2.T)
        pw, pv = np.linalg.eigh(p2)
        psi = V @ pv[:, int(np.argmax(pw))]
        pair = (float(np.max(pw)), float(np.min(pw)))
    else:
        psi = evecs[:, 0]
        v1 = evecs[:, 1]
        pair_1 = float(np.dot(v1 * pi, v1))
        pair = (math.nan, pair_1)  # ground entry patched below
    psi = _fix_sign(np.ascontiguousarray(psi / np.linalg.norm(psi)))
    parity = float(np.dot(psi * pi, psi))
    if math.isnan(pair[0]):
        pair = (parity, pair[1])
    converged = _top_row_weight(psi, basis) < TOP_ROW_TOL
    return EDResult(ground_energy=e0, gap01=gap01, state=psi, parity=parity,
                    cutoff_converged=converged, n_max_used=basis.n_max,
                    pair_parities=pair)


def _state_matrix(result: EDResult, basis: EDBasis) -> np.ndarray:
    if result.state.size != basis.dim:
        raise DomainError("state length does not match the basis dimension")
    return result.state.reshape(basis.n_max + 1, basis.n_spins + 1)


def _warn_if_truncated(result: EDResult, basis: EDBasis):
    w = _top_row_weight(result.state, basis)
    if w > TOP_ROW_TOL:
        warnings.warn(f"top Fock level holds {w:.2e} of the weight; "
                      "moments may be truncated", CutoffWarning, stacklevel=3)


def photon_moments_ed(result: EDResult, basis: EDBasis) -> FluctuationReport:
    """Photon <a>, <a^2>, <a^dag a> of the ground state, centered and fed
    to the generic uncertainty-product reducer."""
    _warn_if_truncated(result, basis)
    W = _state_matrix(result, basis)
    root1 = np.sqrt(np.arange(1, basis.n_max + 1))
    mean_a = float(np.sum(root1[:, None] * W[:-1] * W[1:]))
    root2 = np.sqrt(np.arange(1, basis.n_max)
                    * np.arange(2, basis.n_max + 1))
    a_sq = float(np.sum(root2[:, None] * W[:-2] * W[2:]))
    occ = float(np.sum(np.arange(basis.n_max + 1)[:, None] * W * W))
    return heisenberg_product(mean_a=mean_a, a_sq=a_sq, occupation=occ)


def photon_entropy_ed(result: EDResult, basis: EDBasis,
                      floor: float = 1e-16) -> float:
    """Entanglement entropy (bits) of the photon reduced density matrix."""
    _warn_if_truncated(result, basis)
    W = _state_matrix(result, basis)
    rho = W @ W.T
    w = np.linalg.eigvalsh(rho)
    w = w[w > floor]
    return float(-np.sum(w * np.log2(w)))


def _hp_at_cutoff(p: DickeParams, n_spins: int, n_max: int, seed: int,
                  memo: dict[int, float]) -> float:
    if n_max not in memo:
        basis = EDBasis(n_spins, n_max)
        res = ground_state(build_hamiltonian(p, basis), basis, seed=seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CutoffWarning)
            memo[n_max] = photon_moments_ed(res, basis).hp
    return memo[n_max]


def _nnz_estimate(n_max: int, n_spins: int) -> int:
    return 5 * (n_max + 1) * (n_spins + 1)


_cutoff_cache: dict[tuple, int] = {}


def converge_cutoff(p: DickeParams, n_spins: int, tol: float = 1e-8,
                    budget_nnz: int = DEFAULT_BUDGET_NNZ,
                    start: int | None = None,
                    seed: int = DEFAULT_SEED) -> int:
    """Smallest power-of-two-stepped Fock cutoff at which hp is stable.

    Stability at n means |hp(n) - hp(ceil(1.25 n))| < tol.  The search
    starts from the coherent-shift estimate ceil(4 (N lambda^2/omega^2 +
    sqrt(N))) (or an explicit start), doubles while unstable, halves while
    the smaller cutoff is still stable.  Results are cached per
    (params, N, tol).
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    key = (p.omega, p.omega0, p.coupling, n_spins, tol, start)
    if key in _cutoff_cache:
        return _cutoff_cache[key]

    n0 = start if start is not None else math.ceil(
        4.0 * (n_spins * p.coupling ** 2 / p.omega ** 2 + math.sqrt(n_spins)))
    n0 = max(int(n0), 1)

    memo: dict[int, float] = {}

    def stable(n: int) -> bool:
        probe = max(n + 1, math.ceil(1.25 * n))
        need = _nnz_estimate(probe, n_spins)
        if need > budget_nnz:
            raise BudgetExceeded(
                f"cutoff {n} needs ~{need} nonzeros to verify, over the "
                f"budget of {budget_nnz}", needed=need, budget=budget_nnz)
        return abs(_hp_at_cutoff(p, n_spins, n, seed, memo)
                   - _hp_at_cutoff(p, n_spins, probe, seed, memo)) < tol

    # Halving grid below the seed, walked cheapest-first; a candidate is
    # accepted only if the next grid point up confirms it (guards against
    # an accidental plateau far from convergence).
    grid = [n0]
    while grid[-1] > 1:
        grid.append(grid[-1] // 2)
    grid.reverse()

    chosen = None
    for i, cand in enumerate(grid):
        if stable(cand):
            if i + 1 == len(grid) or stable(grid[i + 1]):
                chosen = cand
                break
    while chosen is None:
        # Seed itself unstable: keep doubling.
        n0 *= 2
        if stable(n0):
            chosen = n0
    _cutoff_cache[key] = chosen
    return chosen


def scaling_at_critical(p: DickeParams, n_list: tuple[int, ...] | list[int],
                        tol: float = 1e-8,
                        budget_nnz: int = DEFAULT_BUDGET_NNZ,
                        seed: int = DEFAULT_SEED) -> ScalingReport:
    """hp(N) with converged cutoffs and its power-law fit.

    The N list must span at least 1.5 decades; the exponent is fitted over
    the largest decade only, where subleading corrections are smallest.
    """
    sizes = sorted(int(n) for n in n_list)
    if len(sizes) < 3:
        raise DomainError("need at least three sizes")
    if math.log10(sizes[-1] / sizes[0]) < 1.5:
        raise DomainError("size list must span at least 1.5 decades")

    hps, cuts = [], []
    for n_spins in sizes:
        n_max = converge_cutoff(p, n_spins, tol=tol, budget_nnz=budget_nnz,
                                seed=seed)
        basis = EDBasis(n_spins, n_max)
        res = ground_state(build_hamiltonian(p, basis), basis, seed=seed)
        hps.append(photon_moments_ed(res, basis).hp)
        cuts.append(n_max)

    lo = sizes[-1] / 10.0
    window = [(n, h) for n, h in zip(sizes, hps) if n >= lo]
    if len(window) < 3:
        raise DegenerateFit("largest decade of N holds fewer than 3 sizes")
    wn = np.array([n for n, _ in window], dtype=float)
    wh = np.array([h for _, h in window])
    fit = _ols(np.log(wn), np.log(wh))
    return ScalingReport(sizes=tuple(sizes), hp_values=tuple(hps),
                         cutoffs=tuple(cuts), fit=fit,
                         fit_sizes=tuple(int(n) for n in wn))


def save_state(path, result: EDResult, basis: EDBasis) -> None:
    """Flat little-endian binary export: header then the state vector."""
    header = struct.pack("<4sIII", _STATE_MAGIC, _STATE_VERSION,
                         basis.n_spins, basis.n_max)
    scalars = struct.pack("<dddB", result.ground_energy, result.gap01,
                          result.parity, int(result.cutoff_converged))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(scalars)
        fh.write(np.ascontiguousarray(result.state, dtype="<f8").tobytes())


def load_state(path) -> tuple[EDResult, EDBasis]:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, n_spins, n_max = struct.unpack_from("<4sIII", raw, 0)
    if magic != _STATE_MAGIC:
        raise DomainError("not a saved ground-state file")
    if version != _STATE_VERSION:
        raise DomainError(f"unsupported state version {version}")
    off = struct.calcsize("<4sIII")
    e0, gap01, parity, conv = struct.unpack_from("<dddB", raw, off)
    off += struct.calcsize("<dddB")
    basis = EDBasis(int(n_spins), int(n_max))
    state = np.frombuffer(raw, dtype="<f8", count=basis.dim,
                          offset=off).astype(np.float64)
    if state.size != basis.dim:
        raise DomainError("state vector truncated")
    result = EDResult(ground_energy=e0, gap01=gap01, state=state,
                      parity=parity, cutoff_converged=bool(conv),
                      n_max_used=int(n_max))
    return result, basis
