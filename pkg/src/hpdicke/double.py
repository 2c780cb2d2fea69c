"""Thermodynamic limit of the double-quadrature Dicke model

    H = omega_cav a^dag a + omega0_C Jz_C + omega0_I Jz_I
        + (lambda_C/sqrt(N_C)) (a + a^dag)(J+_C + J-_C)
        + (lambda_I/sqrt(N_I)) i(a - a^dag)(J+_I + J-_I)

two spin chains coupled to conjugate photon quadratures, with independent
Z2 symmetries and a four-phase diagram.  Everything here is built from the
classical (coherent-state) energy surface: its minimum fixes the
displacements, its Hessian is the three-mode quadratic form handed to the
generic Bogoliubov machinery.

Both chains enter symmetrically: x-quadrature displacement u couples to
chain C, p-quadrature displacement v to chain I, and swapping
(lambda_C, omega0_C) with (lambda_I, omega0_I) exchanges dx and dp while
preserving the uncertainty product and the entropy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (BranchError, CriticalPointDivergence, DomainError,
                     InstabilityError, MeanFieldError, RegimeError)
from .gaussian import (EntropyReport, FluctuationReport, QuadraticForm,
                       bogoliubov_gaps, entropy_from_hp, form_from_xp,
                       heisenberg_product, photon_moments_from_solution,
                       symplectic_diagonalize)

__all__ = [
    "DoubleDickeParams",
    "DoublePhase",
    "DoublePhaseInfo",
    "MeanField",
    "DoubleThermoSolution",
    "classify_double_phase",
    "mean_field",
    "double_quadrature_matrix",
    "build_double_quadratic_form",
    "double_gaps",
    "soft_mode_count",
    "solve_double_thermo",
    "lower_polariton",
    "double_point_hp",
    "hp_double",
    "entropy_double",
]

CRITICAL_REL_TOL = 1e-12
GRADIENT_TOL = 1e-10


@dataclass(frozen=True)
class DoubleDickeParams:
    """Frequencies and the two couplings; optional chain sizes for ED."""

    omega_cav: float
    omega0_c: float
    omega0_i: float
    lambda_c: float
    lambda_i: float
    n_c: int | None = None
    n_i: int | None = None

    def __post_init__(self):
        if not (self.omega_cav > 0 and self.omega0_c > 0 and self.omega0_i > 0):
            raise DomainError("frequencies must be positive")
        if self.lambda_c < 0 or self.lambda_i < 0:
            raise DomainError("couplings must be nonnegative")
        for v in (self.omega_cav, self.omega0_c, self.omega0_i,
                  self.lambda_c, self.lambda_i):
            if not math.isfinite(v):
                raise DomainError("parameters must be finite")

    @property
    def lambda_c_cr(self) -> float:
        return math.sqrt(self.omega_cav * self.omega0_c) / 2.0

    @property
    def lambda_i_cr(self) -> float:
        return math.sqrt(self.omega_cav * self.omega0_i) / 2.0


class DoublePhase(enum.Enum):
    NORMAL = "Normal"
    SUPERRADIANT_REAL = "SuperradiantReal"
    SUPERRADIANT_IMAG = "SuperradiantImag"
    SUPERRADIANT_DOUBLE = "SuperradiantDouble"


_DEGENERACY = {
    DoublePhase.NORMAL: 1,
    DoublePhase.SUPERRADIANT_REAL: 2,
    DoublePhase.SUPERRADIANT_IMAG: 2,
    DoublePhase.SUPERRADIANT_DOUBLE: 4,
}
_OFFSET_BITS = {1: 0, 2: 1, 4: 2}


@dataclass(frozen=True)
class DoublePhaseInfo:
    phase: DoublePhase
    degeneracy: int
    lambda_c_cr: float
    lambda_i_cr: float
    critical_c: bool
    critical_i: bool


@dataclass(frozen=True)
class MeanField:
    """Classical minimum of the energy surface, all per sqrt(N)."""

    u: float
    v: float
    x_c: float
    x_i: float
    mu_c: float
    mu_i: float
    epsilon_c: int
    epsilon_i: int
    energy: float


@dataclass(frozen=True)
class DoubleThermoSolution:
    phase: DoublePhase
    mu_c: float
    mu_i: float
    # (photon complex shift u + iv, chain-C shift, chain-I shift)
    displacements: tuple[complex, float, float]
    gaps: tuple[float, float, float]
    # None exactly on a critical line, where a gap vanishes.
    polariton_transform: np.ndarray | None


def _is_critical(lam: float, lam_cr: float) -> bool:
    return abs(lam - lam_cr) <= CRITICAL_REL_TOL * max(1.0, lam_cr)


def classify_double_phase(p: DoubleDickeParams) -> DoublePhaseInfo:
    """Phase from the two critical lines; a coupling exactly on its line
    counts as broken, with the matching critical flag set."""
    crit_c = _is_critical(p.lambda_c, p.lambda_c_cr)
    crit_i = _is_critical(p.lambda_i, p.lambda_i_cr)
    broken_c = crit_c or p.lambda_c > p.lambda_c_cr
    broken_i = crit_i or p.lambda_i > p.lambda_i_cr
    if broken_c and broken_i:
        phase = DoublePhase.SUPERRADIANT_DOUBLE
    elif broken_c:
        phase = DoublePhase.SUPERRADIANT_REAL
    elif broken_i:
        phase = DoublePhase.SUPERRADIANT_IMAG
    else:
        phase = DoublePhase.NORMAL
    return DoublePhaseInfo(phase=phase, degeneracy=_DEGENERACY[phase],
                           lambda_c_cr=p.lambda_c_cr,
                           lambda_i_cr=p.lambda_i_cr,
                           critical_c=crit_c, critical_i=crit_i)


def _resolve_branch(broken: bool, eps, label: str) -> int:
    if not broken:
        if eps in (None, 0):
            return 0
        raise BranchError(f"direction {label} is unbroken; branch must be 0")
    if eps is None:
        return 1
    if eps in (1, -1):
        return eps
    raise BranchError(f"broken direction {label} takes branch +1 or -1, "
                      f"got {eps}")


def mean_field(p: DoubleDickeParams,
               branch: tuple[int, int] | None = None) -> MeanField:
    """Closed-form minimizer of the classical energy per spin,

        f = w (u^2 + v^2) + sum_k w0_k (x_k^2 - 1/2)
            + 4 lC u x_C s_C - 4 lI v x_I s_I,   s_k = sqrt(1 - x_k^2).

    The gradient at the returned point is checked below 1e-10.
    """
    info = classify_double_phase(p)
    eps_c_in, eps_i_in = branch if branch is not None else (None, None)
    broken_c = info.phase in (DoublePhase.SUPERRADIANT_REAL,
                              DoublePhase.SUPERRADIANT_DOUBLE)
    broken_i = info.phase in (DoublePhase.SUPERRADIANT_IMAG,
                              DoublePhase.SUPERRADIANT_DOUBLE)
    eps_c = _resolve_branch(broken_c, eps_c_in, "C")
    eps_i = _resolve_branch(broken_i, eps_i_in, "I")

    om = p.omega_cav
    mu_c = min(om * p.omega0_c / (4.0 * p.lambda_c ** 2), 1.0) if broken_c else 1.0
    mu_i = min(om * p.omega0_i / (4.0 * p.lambda_i ** 2), 1.0) if broken_i else 1.0
    x_c = eps_c * math.sqrt((1.0 - mu_c) / 2.0)
    x_i = eps_i * math.sqrt((1.0 - mu_i) / 2.0)
    s_c = math.sqrt(1.0 - x_c * x_c)
    s_i = math.sqrt(1.0 - x_i * x_i)
    u = -(2.0 * p.lambda_c / om) * x_c * s_c
    v = +(2.0 * p.lambda_i / om) * x_i * s_i

    f = (om * (u * u + v * v)
         + p.omega0_c * (x_c * x_c - 0.5) + p.omega0_i * (x_i * x_i - 0.5)
         + 4.0 * p.lambda_c * u * x_c * s_c - 4.0 * p.lambda_i * v * x_i * s_i)

    hprime = lambda x, s: (1.0 - 2.0 * x * x) / s
    grad = (2.0 * om * u + 4.0 * p.lambda_c * x_c * s_c,
            2.0 * om * v - 4.0 * p.lambda_i * x_i * s_i,
            2.0 * p.omega0_c * x_c + 4.0 * p.lambda_c * u * hprime(x_c, s_c),
            2.0 * p.omega0_i * x_i - 4.0 * p.lambda_i * v * hprime(x_i, s_i))
    scale = max(om, p.omega0_c, p.omega0_i, 1.0)
    if max(abs(g) for g in grad) > GRADIENT_TOL * scale:
        raise MeanFieldError(
            f"stationarity violated at the closed-form minimum: {grad}")
    return MeanField(u=u, v=v, x_c=x_c, x_i=x_i, mu_c=mu_c, mu_i=mu_i,
                     epsilon_c=eps_c, epsilon_i=eps_i, energy=f)


def double_quadrature_matrix(p: DoubleDickeParams,
                             branch: tuple[int, int] | None = None
                             ) -> tuple[np.ndarray, float]:
    """Hessian/2 of the quantum fluctuation Hamiltonian in quadratures
    ordered (q_a, q_C, q_I, p_a, p_C, p_I), plus the classical minimum
    energy per spin.

    Identical for all symmetry branches (the entries are even in the
    coherence signs)."""
    mf = mean_field(p, branch)
    om = p.omega_cav

    def hp_(x, s):
        return (1.0 - 2.0 * x * x) / s

    def hpp(x, s):
        return x * (2.0 * x * x - 3.0) / s ** 3

    s_c = math.sqrt(1.0 - mf.x_c ** 2)
    s_i = math.sqrt(1.0 - mf.x_i ** 2)

    G = np.zeros((6, 6))
    G[0, 0] = om
    G[3, 3] = om
    G[1, 1] = p.omega0_c + 2.0 * p.lambda_c * mf.u * hpp(mf.x_c, s_c)
    G[4, 4] = p.omega0_c - 2.0 * p.lambda_c * mf.u * mf.x_c / s_c
    G[2, 2] = p.omega0_i - 2.0 * p.lambda_i * mf.v * hpp(mf.x_i, s_i)
    G[5, 5] = p.omega0_i + 2.0 * p.lambda_i * mf.v * mf.x_i / s_i
    G[0, 1] = G[1, 0] = 2.0 * p.lambda_c * hp_(mf.x_c, s_c)
    G[2, 3] = G[3, 2] = -2.0 * p.lambda_i * hp_(mf.x_i, s_i)
    return G, mf.energy


def build_double_quadratic_form(p: DoubleDickeParams,
                                branch: tuple[int, int] | None = None
                                ) -> QuadraticForm:
    """Three-mode quadratic form (modes a, b_C, b_I) expanded around the
    classical minimum; linear terms vanish there by the stationarity
    check inside mean_field."""
    G, f_min = double_quadrature_matrix(p, branch)
    return form_from_xp(G, const=f_min)


def double_gaps(p: DoubleDickeParams) -> tuple[float, float, float]:
    """The three polariton gaps, ascending.  Valid on the critical lines
    too, where the lowest one vanishes.

    At the double point the two soft directions are symplectically
    conjugate (they share the photon), so they merge into a single flat
    canonical pair: the ascending triple still holds exactly one zero,
    and the number of independent soft directions is what
    soft_mode_count reports."""
    form = build_double_quadratic_form(p)
    gaps = bogoliubov_gaps(form)
    return tuple(sorted(float(g) for g in gaps))


def soft_mode_count(p: DoubleDickeParams, tol: float = 1e-8) -> int:
    """Number of independent zero-stiffness quadrature directions: 0 in a
    phase interior, 1 on a single critical line, 2 at the double point
    (one per simultaneously breaking symmetry)."""
    G, _ = double_quadrature_matrix(p)
    ev = np.linalg.eigvalsh(G)
    return int(np.sum(np.abs(ev) < tol * max(1.0, np.abs(ev).max())))


def solve_double_thermo(p: DoubleDickeParams,
                        branch: tuple[int, int] | None = None
                        ) -> DoubleThermoSolution:
    """Mean field plus Bogoliubov data.  Exactly on a critical line the
    zero mode admits no symplectic normalization, so the transform is
    None there while the gaps remain available."""
    info = classify_double_phase(p)
    mf = mean_field(p, branch)
    form = build_double_quadratic_form(p, branch)
    on_line = info.critical_c or info.critical_i
    transform = None
    if on_line:
        gaps = tuple(sorted(float(g) for g in bogoliubov_gaps(form)))
    else:
        sol = symplectic_diagonalize(form)
        gaps = tuple(float(g) for g in sol.gaps)
        transform = sol.transform.copy()
    return DoubleThermoSolution(phase=info.phase, mu_c=mf.mu_c, mu_i=mf.mu_i,
                                displacements=(complex(mf.u, mf.v),
                                               mf.x_c, mf.x_i),
                                gaps=gaps, polariton_transform=transform)


def _require_matter_degenerate(p: DoubleDickeParams):
    if abs(p.omega0_c - p.omega0_i) > 1e-12 * max(p.omega0_c, p.omega0_i):
        raise CriticalPointDivergence(
            "finite double-point values hold for equal matter frequencies "
            "only; this double point has omega0_c != omega0_i",
            quantity="hp")


def lower_polariton(p: DoubleDickeParams) -> np.ndarray:
    """Coefficients of the lowest polariton over
    (a, b_C, b_I, a^dag, b_C^dag, b_I^dag).

    Defined in the normal phase; on a single critical line the mode is
    gapless and the row diverges, while at the double point the two
    divergences compensate and the finite limit row

        (1, -s, i s, 0, s, -i s),  s = sqrt(omega_cav / (4 omega0_C))

    is returned (symplectically normalized as it stands)."""
    info = classify_double_phase(p)
    if info.critical_c and info.critical_i:
        _require_matter_degenerate(p)
        s = math.sqrt(p.omega_cav / (4.0 * p.omega0_c))
        return np.array([1.0, -s, 1j * s, 0.0, s, -1j * s])
    if info.critical_c or info.critical_i:
        raise CriticalPointDivergence(
            "the lower polariton is gapless on a critical line",
            quantity="polariton")
    if info.phase is not DoublePhase.NORMAL:
        raise RegimeError(
            f"lower polariton row is defined in the normal phase, "
            f"not {info.phase.value}")
    sol = symplectic_diagonalize(build_double_quadratic_form(p))
    k = int(np.argmin(sol.gaps))
    return sol.transform[k].copy()


def double_point_hp(p: DoubleDickeParams) -> float:
    """Uncertainty product at the double symmetry-breaking point,

        dx dp = 1/2 + (1 + 4 (omega0_C/omega_cav)^2)^(-1/2)

    finite although both critical lines cross here."""
    _require_matter_degenerate(p)
    ratio = p.omega0_c / p.omega_cav
    return 0.5 + 1.0 / math.sqrt(1.0 + 4.0 * ratio * ratio)


def hp_double(p: DoubleDickeParams) -> FluctuationReport:
    """Photon quadrature fluctuations.  Diverges on each critical line
    (exponent -1/4 in the distance), except at the double point where the
    two divergences compensate and dx = dp = sqrt(hp)."""
    info = classify_double_phase(p)
    if info.critical_c and info.critical_i:
        hp = double_point_hp(p)
        return heisenberg_product(occupation=hp - 0.5)
    if info.critical_c or info.critical_i:
        raise CriticalPointDivergence(
            "photon fluctuations diverge on a critical line",
            quantity="hp", exponent=-0.25)
    sol = symplectic_diagonalize(build_double_quadratic_form(p))
    return photon_moments_from_solution(sol, mode_index=0)


def entropy_double(p: DoubleDickeParams, include_degeneracy: bool = True,
                   renyi_alphas: tuple[float, ...] = ()) -> EntropyReport:
    """Photon-matter entanglement entropy; the degeneracy offset maps the
    phase degeneracy {1, 2, 4} to {0, 1, 2} bits."""
    rep = hp_double(p)
    info = classify_double_phase(p)
    offset = _OFFSET_BITS[info.degeneracy] if include_degeneracy else 0
    return entropy_from_hp(rep.hp, degeneracy_offset=offset,
                           renyi_alphas=renyi_alphas)
