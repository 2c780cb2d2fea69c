"""Closed-form thermodynamic-limit solution of the single-cavity Dicke model

    H = omega a^dag a + omega0 Jz + (coupling / sqrt(N)) (a + a^dag)(J+ + J-)

in the maximal-spin sector, for N -> infinity: phase classification, order
parameter, polariton gaps, mixing angle, coherences, photon quadrature
fluctuations, and entanglement entropy.

Angular momentum convention: Jz eigenvalues m in {-N/2 .. N/2} with standard
ladder elements, omega0 the full two-level splitting.  The critical coupling
is sqrt(omega * omega0) / 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, CriticalPointDivergence, DomainError
from .gaussian import (EntropyReport, FluctuationReport, QuadraticForm,
                       entropy_from_hp, form_from_xp, heisenberg_product)

__all__ = [
    "DickeParams",
    "Phase",
    "PhaseInfo",
    "ThermoSolution",
    "lambda_critical",
    "classify_phase",
    "solve_thermo",
    "dicke_quadratic_form",
    "hp_thermo",
    "entropy_thermo",
]

# Relative half-width of the band around the critical coupling treated as
# exactly critical.
CRITICAL_REL_TOL = 1e-12


@dataclass(frozen=True)
class DickeParams:
    """Model frequencies and coupling, all in the same energy unit."""

    omega: float
    omega0: float
    coupling: float

    def __post_init__(self):
        if not (self.omega > 0 and self.omega0 > 0):
            raise DomainError("frequencies must be positive")
        if not self.coupling >= 0:
            raise DomainError("coupling must be nonnegative")
        for v in (self.omega, self.omega0, self.coupling):
            if not math.isfinite(v):
                raise DomainError("parameters must be finite")


class Phase(enum.Enum):
    NORMAL = "Normal"
    SUPERRADIANT = "Superradiant"


@dataclass(frozen=True)
class PhaseInfo:
    phase: Phase
    lambda_cr: float
    critical: bool


@dataclass(frozen=True)
class ThermoSolution:
    """Thermodynamic-limit ground-state data.

    mu: order parameter (1 in the normal phase).
    gamma: polariton mixing angle, in [0, pi/2].
    gap_minus <= gap_plus: polariton energies.
    alpha_coh, beta_coh: photonic and matter coherences per sqrt(N); the
        ground-state amplitudes are <a>/sqrt(N) = -alpha_coh and
        <b>/sqrt(N) = +beta_coh on the chosen branch.
    epsilon: symmetry-breaking branch, 0 in the normal phase else +-1.
    """

    phase: Phase
    mu: float
    gamma: float
    gap_minus: float
    gap_plus: float
    alpha_coh: float
    beta_coh: float
    epsilon: int


def lambda_critical(p: DickeParams) -> float:
    return math.sqrt(p.omega * p.omega0) / 2.0


def classify_phase(p: DickeParams) -> PhaseInfo:
    """Phase label plus critical coupling.

    Normal strictly below the critical coupling; on the boundary the label
    is Superradiant with the critical flag set.
    """
    lam_cr = lambda_critical(p)
    critical = abs(p.coupling - lam_cr) <= CRITICAL_REL_TOL * max(1.0, lam_cr)
    phase = Phase.NORMAL if (p.coupling < lam_cr and not critical) else Phase.SUPERRADIANT
    return PhaseInfo(phase=phase, lambda_cr=lam_cr, critical=critical)


def solve_thermo(p: DickeParams, epsilon: int | None = None) -> ThermoSolution:
    """Order parameter, gaps, mixing angle and coherences.

    epsilon selects the symmetry-breaking branch in the superradiant phase
    (+1 or -1; None picks +1).  In the normal phase only 0 (or None) is
    meaningful.
    """
    info = classify_phase(p)
    om, om0, lam = p.omega, p.omega0, p.coupling
    if info.phase is Phase.NORMAL:
        if epsilon not in (None, 0):
            raise BranchError("normal phase has a unique ground state; "
                              f"branch {epsilon} is not available")
        eps = 0
        mu = 1.0
    else:
        if epsilon in (None,):
            eps = 1
        elif epsilon in (1, -1):
            eps = epsilon
        else:
            raise BranchError("superradiant branch must be +1 or -1, "
                              f"got {epsilon}")
        mu = om * om0 / (4.0 * lam * lam)

    om0_eff = om0 / mu
    tr = om0_eff * om0_eff + om * om
    disc = math.sqrt((om0_eff * om0_eff - om * om) ** 2
                     + 16.0 * lam * lam * om * om0 * mu)
    gap_plus = math.sqrt(0.5 * (tr + disc))
    gap_minus = math.sqrt(max(0.5 * (tr - disc), 0.0))

    if lam == 0.0:
        # Decoupled limit; atan2(+0, negative) would jump to pi.
        gamma = 0.0
    else:
        gamma = 0.5 * math.atan2(4.0 * lam * math.sqrt(om * om0) * mu ** 2.5,
                                 om0 * om0 - mu * mu * om * om)

    alpha = eps * lam * math.sqrt(max(1.0 - mu * mu, 0.0)) / om
    beta = eps * math.sqrt(max(1.0 - mu, 0.0) / 2.0)
    return ThermoSolution(phase=info.phase, mu=mu, gamma=gamma,
                          gap_minus=gap_minus, gap_plus=gap_plus,
                          alpha_coh=alpha, beta_coh=beta, epsilon=eps)


def dicke_quadratic_form(p: DickeParams,
                         epsilon: int | None = None) -> QuadraticForm:
    """Quadratic fluctuation Hamiltonian around the mean-field ground state,
    modes ordered (photon, matter).

    The matter mode is the Holstein-Primakoff boson expanded around the
    coherence of the chosen branch; one mu-parameterized set of
    coefficients covers both phases.
    """
    sol = solve_thermo(p, epsilon)
    om, om0, lam = p.omega, p.omega0, p.coupling
    mu = sol.mu
    g_qq = np.array([[om, 2.0 * lam * mu * math.sqrt(2.0 / (1.0 + mu))],
                     [2.0 * lam * mu * math.sqrt(2.0 / (1.0 + mu)),
                      2.0 * om0 / (mu * (1.0 + mu))]])
    g_pp = np.diag([om, om0 * (1.0 + mu) / (2.0 * mu)])
    G = np.zeros((4, 4))
    G[:2, :2] = g_qq
    G[2:, 2:] = g_pp
    return form_from_xp(G)


def _variances(sol: ThermoSolution, omega: float) -> tuple[float, float]:
    c2 = math.cos(sol.gamma) ** 2
    s2 = math.sin(sol.gamma) ** 2
    dx2 = 0.5 * omega * (c2 / sol.gap_minus + s2 / sol.gap_plus)
    dp2 = 0.5 * (c2 * sol.gap_minus + s2 * sol.gap_plus) / omega
    return dx2, dp2


def hp_thermo(p: DickeParams) -> FluctuationReport:
    """Photon quadrature fluctuations of the thermodynamic ground state.

    Diverges at the critical coupling with exponent -1/4 in the distance
    to it; at that point CriticalPointDivergence is raised instead of
    returning a large float.  Both superradiant branches give the same
    fluctuations.
    """
    info = classify_phase(p)
    if info.critical:
        raise CriticalPointDivergence(
            "photon fluctuations diverge at the critical coupling",
            quantity="hp", exponent=-0.25)
    sol = solve_thermo(p)
    dx2, dp2 = _variances(sol, p.omega)
    n_c = 0.5 * (dx2 + dp2) - 0.5
    sq_c = 0.5 * (dx2 - dp2)
    return heisenberg_product(mean_a=0.0, a_sq=sq_c, occupation=n_c)


def entropy_thermo(p: DickeParams, include_degeneracy: bool = True,
                   renyi_alphas: tuple[float, ...] = ()) -> EntropyReport:
    """Photon-matter entanglement entropy of the thermodynamic ground state.

    With include_degeneracy, one bit is added in the superradiant phase so
    the value is comparable to finite-size symmetric (cat) ground states.
    """
    rep = hp_thermo(p)
    info = classify_phase(p)
    offset = 1 if (include_degeneracy and info.phase is Phase.SUPERRADIANT) else 0
    return entropy_from_hp(rep.hp, degeneracy_offset=offset,
                           renyi_alphas=renyi_alphas)
