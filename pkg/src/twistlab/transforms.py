"""The resonance transform

    H(alpha, T) = alpha^{-1/2} int_{2 alpha T}^{3 alpha T}
                  F(1/2 + it) e^{i d t log(t/(e alpha)) - i pi/4} dt,

computed by three independent routes: direct quadrature against the smoothed
evaluator, the stationary-phase coefficient sum, and the functional-equation
closed form kappa a_m T^{1+iA}.

Constant conventions
--------------------
Several closed-form constants in the standard derivation of this transform
are inconsistent as commonly printed; this module fixes them by numerical
cross-validation of the three routes (each route is computed independently,
so an error in any convention shows up as a route deviation that fails to
shrink as T grows):

* The resonance-kernel integral I_n is the bare integral (no 1/(2 pi i)
  prefactor), and its stationary-phase main term carries the full constant
  sqrt(2 pi alpha / d) n^{1/(2d)} with phase e^{-i d alpha n^{1/d}}
  (minus sign in the exponential).
* The stationary window for K_T = [2 alpha T, 3 alpha T] is
  (2T)^d < n < (3T)^d, so that is the coefficient-sum route's window.
* The resonant linear-phase integral J_n uses the base n^{-1} C Q^2 alpha^d,
  the same combination that defines the resonant index m = C Q^2 alpha^d.
* kappa comes in two conventions: "paper-printed", the literal closed form
  omega e^{iB} sqrt(C) Q alpha^{(1-d)/2+iA} (3^{1+iA}-2^{1+iA})/(1+iA),
  kept for reference (for the ones-coefficient series at alpha = 2 pi its
  modulus is 0.3989); and "oracle-calibrated",

      kappa* = omega e^{i(B - pi/4)} m^{-1/2} alpha^{1/2+iA}
               (3^{1+iA} - 2^{1+iA}) / (1 + iA),

  assembled from first principles (functional equation + exact J_m), whose
  modulus sqrt(2 pi) = 2.5066 for the ones series at alpha = 2 pi matches
  the measured |H_direct|/T.  Calibrated is the downstream default.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .errors import BudgetError, PoleError, ResonanceError
from .evaluate import SmoothedLineEvaluator
from .model import LSeriesInstance, SmoothingParams, resonance_alpha
from .oscillatory import integrate_oscillatory
from .summation import compensated_sum

KAPPA_CONVENTIONS = ("paper-printed", "oracle-calibrated")


@dataclass(frozen=True)
class KappaValue:
    value: complex
    convention: str

    def __post_init__(self):
        if self.convention not in KAPPA_CONVENTIONS:
            raise ValueError(f"convention must be one of {KAPPA_CONVENTIONS}")


@dataclass(frozen=True)
class TransformReport:
    T: float
    direct: Optional[complex]
    sum_side: Optional[complex]
    fe_side: Optional[complex]
    deviations: Dict[str, float]


def _budget() -> float:
    try:
        return float(os.environ.get("TWISTLAB_BUDGET", "1e9"))
    except ValueError:
        return 1e9


def _require_transform_degree(L: LSeriesInstance) -> float:
    d = L.invariants().d
    if d < 1.0:
        raise ValueError(f"transform needs degree >= 1, {L.name!r} has d = {d}")
    return d


def _resolve_X(L: LSeriesInstance, T: float, sp: SmoothingParams) -> float:
    if sp.X is not None:
        return sp.X
    return float(T) ** (L.invariants().d + sp.rho)


def H_direct(L: LSeriesInstance, alpha: float, T: float, sp: SmoothingParams,
             corrections: bool = True, force: bool = False,
             tol: Optional[float] = None) -> complex:
    """Direct quadrature route.  Cost is O(X * panels); configurations whose
    estimate exceeds the operation budget (TWISTLAB_BUDGET, default 1e9) are
    refused unless force=True."""
    d = _require_transform_degree(L)
    a, b = 2.0 * alpha * T, 3.0 * alpha * T
    for pole in L.fe.poles:
        if abs(pole.location.real - 0.5) < 1e-6 and a - 1e-6 <= pole.location.imag <= b + 1e-6:
            raise PoleError(f"pole of {L.name!r} on the integration segment")
    X = _resolve_X(L, T, sp)
    line = SmoothedLineEvaluator(L, sp.with_X(X), corrections=corrections)

    rate = d * max(abs(math.log(a / alpha)), abs(math.log(b / alpha))) + 1.0
    est_panels = (b - a) * rate / (0.25 * 2.0 * math.pi)
    cost = X * est_panels
    if cost > _budget() and not force:
        raise BudgetError(
            f"H_direct estimated cost {cost:.2e} exceeds budget "
            f"{_budget():.2e}; pass force=True or raise TWISTLAB_BUDGET")

    if tol is None:
        tol = max(1e-8, 1e-4 * T)

    def phase(t):
        return d * t * (np.log(t / alpha) - 1.0) - math.pi / 4.0

    def dphase(t):
        return d * np.log(t / alpha)

    res = integrate_oscillatory(phase, (a, b), tol, dphase=dphase,
                                amplitude=line.values)
    return res.value / math.sqrt(alpha)


def H_sum_side(L: LSeriesInstance, alpha: float, T: float,
               sp: SmoothingParams) -> complex:
    """Stationary-phase coefficient sum over the window (2T)^d < n < (3T)^d:

        sqrt(2 pi / d) sum (a_n / sqrt(n)) n^{1/(2d)}
                         e^{-(n/X)^p} e^{-i d alpha n^{1/d}}."""
    d = _require_transform_degree(L)
    X = _resolve_X(L, T, sp)
    lo = (2.0 * T) ** d
    hi = (3.0 * T) ** d
    n_lo = int(math.floor(lo)) + 1
    n_hi = int(math.ceil(hi)) - 1
    if n_hi < n_lo:
        return 0.0 + 0.0j
    table = L.coefficients.bulk(n_hi).values
    n = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    a_n = table[n_lo - 1 : n_hi]
    terms = (a_n * n ** (1.0 / (2.0 * d) - 0.5)
             * np.exp(-((n / X) ** sp.p))
             * np.exp(-1j * d * alpha * n ** (1.0 / d)))
    return math.sqrt(2.0 * math.pi / d) * compensated_sum(terms)


def J_n_quadrature(L: LSeriesInstance, alpha: float, T: float, n: int,
                   tol: Optional[float] = None) -> complex:
    """int_{K_T} (n^{-1} C Q^2 alpha^d)^{-it} t^{iA} dt by panel quadrature."""
    if n < 1:
        raise ValueError("n must be >= 1")
    inv = L.invariants()
    base = inv.C * L.fe.Q ** 2 * alpha ** inv.d / n
    log_base = math.log(base)
    A = inv.A
    a, b = 2.0 * alpha * T, 3.0 * alpha * T
    if tol is None:
        tol = max(1e-10, 1e-8 * alpha * T)

    def phase(t):
        return -t * log_base + A * np.log(t)

    def dphase(t):
        return -log_base + A / t

    return integrate_oscillatory(phase, (a, b), tol, dphase=dphase).value


def J_m_closed_form(L: LSeriesInstance, alpha: float, T: float) -> complex:
    """Resonant case n = m: (3^{1+iA} - 2^{1+iA})/(1+iA) (alpha T)^{1+iA}."""
    A = L.invariants().A
    e = 1.0 + 1j * A
    return (3.0 ** e - 2.0 ** e) / e * (alpha * T) ** e


def kappa(L: LSeriesInstance, alpha: float, m: int, convention: str) -> KappaValue:
    """The T^{1+iA} coefficient of the functional-equation route, under the
    chosen convention (see the module notes).  Requires the resonance
    condition m = C Q^2 alpha^d to 1e-9 relative."""
    inv = L.invariants()
    resonant = inv.C * L.fe.Q ** 2 * alpha ** inv.d
    if abs(resonant - m) > 1e-9 * max(1.0, abs(m)):
        raise ResonanceError(
            f"alpha = {alpha} is not the resonance of m = {m}: "
            f"C Q^2 alpha^d = {resonant}")
    A, B, C, d = inv.A, inv.B, inv.C, inv.d
    e = 1.0 + 1j * A
    jm = (3.0 ** e - 2.0 ** e) / e
    if convention == "paper-printed":
        value = (L.fe.omega * cmath.exp(1j * B) * math.sqrt(C) * L.fe.Q
                 * alpha ** ((1.0 - d) / 2.0 + 1j * A) * jm)
    elif convention == "oracle-calibrated":
        value = (L.fe.omega * cmath.exp(1j * (B - math.pi / 4.0))
                 * m ** -0.5 * alpha ** (0.5 + 1j * A) * jm)
    else:
        raise ValueError(f"convention must be one of {KAPPA_CONVENTIONS}")
    return KappaValue(value=value, convention=convention)


def H_fe_side(L: LSeriesInstance, alpha: float, T: float, kap: KappaValue,
              m: int) -> complex:
    """kappa a_m T^{1+iA}; the calibrated convention conjugates a_m (all
    presets used downstream have real a_m, so the flag is cosmetic there)."""
    if T == 0.0:
        return 0.0 + 0.0j
    if T < 0.0:
        raise ValueError("T must be nonnegative")
    a_m = L.coefficients.coefficient(m)
    if abs(a_m) == 0.0:
        raise ResonanceError(f"a_{m} vanishes for {L.name!r}")
    if kap.convention == "oracle-calibrated":
        a_m = a_m.conjugate()
    A = L.invariants().A
    return kap.value * a_m * T ** (1.0 + 1j * A)


def _pair_dev(x: complex, y: complex) -> float:
    denom = max(abs(x), abs(y))
    return abs(x - y) / denom if denom > 0 else 0.0


def run_transform(L: LSeriesInstance, m: int, T: float, sp: SmoothingParams,
                  routes: Sequence[str] = ("direct", "sum", "fe"),
                  corrections: bool = True, force: bool = False) -> TransformReport:
    """Evaluate the requested H routes at one T and report pairwise relative
    deviations |a - b| / max(|a|, |b|)."""
    alpha = L.resonance_alpha(m)
    values: Dict[str, complex] = {}
    if "direct" in routes:
        values["direct"] = H_direct(L, alpha, T, sp, corrections=corrections,
                                    force=force)
    if "sum" in routes:
        values["sum"] = H_sum_side(L, alpha, T, sp)
    if "fe" in routes:
        kap = kappa(L, alpha, m, "oracle-calibrated")
        values["fe"] = H_fe_side(L, alpha, T, kap, m)
    devs = {}
    names = [r for r in ("direct", "sum", "fe") if r in values]
    for i, r1 in enumerate(names):
        for r2 in names[i + 1:]:
            devs[f"{r1}-{r2}"] = _pair_dev(values[r1], values[r2])
    return TransformReport(T=T, direct=values.get("direct"),
                           sum_side=values.get("sum"), fe_side=values.get("fe"),
                           deviations=devs)


def constant_conventions() -> str:
    """Human-readable summary of the constant conventions this module uses
    (printed by the CLI's --ledger flag)."""
    return (
        "Constant conventions (fixed by three-route cross-validation):\n"
        "  I_n kernel        bare integral over K_T = [2aT, 3aT]; no 1/(2 pi i)\n"
        "  stationary window (2T)^d < n < (3T)^d  (stationary point c = a n^{1/d} in K_T)\n"
        "  stationary term   sqrt(2 pi a / d) n^{1/(2d)} exp(-i d a n^{1/d})\n"
        "  flat-phase ranges n <= T^d (|f'| >= d log 2), n >= (4T)^d (|f'| >= d log 4/3)\n"
        "  J_n base          (n^{-1} C Q^2 a^d)^{-it} t^{iA}; resonance m = C Q^2 a^d\n"
        "  kappa printed     omega e^{iB} sqrt(C) Q a^{(1-d)/2+iA} (3^e-2^e)/e, e = 1+iA\n"
        "                    (|kappa| = 0.3989 for ones-series at a = 2 pi; kept for reference)\n"
        "  kappa calibrated  omega e^{i(B-pi/4)} m^{-1/2} a^{1/2+iA} (3^e-2^e)/e\n"
        "                    (|kappa| = sqrt(2 pi) = 2.5066 for ones-series at a = 2 pi;\n"
        "                     matches measured |H_direct|/T; downstream default)\n"
        "  B constant        -2[sum Im mu_j log l_j - sum Im mu'_j log l'_j]\n"
        "                    - (pi/2)[d/2 + 2 Re(mu - mu') - (r - r')]\n"
        "                    (+pi/4 for the ones series; validated against exact\n"
        "                     gamma-factor ratios, which reject the sign-flipped form)\n"
    )
