"""
Closed-form large-K predictions for the shift-K grid filter: the asymptotic
loss, the rectangular frequency-window limit of its transfer function and the
loss of an ideal frequency window under AR(1) input.
"""
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

import config
from core.bounds import optimal_b
from core.errors import BranchError, DomainError, OutOfRegimeWarning, ValidationError
from core.filter import TaskSpec, shiftk_init, transfer_function

logger = logging.getLogger(__name__)


def _amplitude(alpha: float) -> float:
    return math.exp(-alpha) * (math.exp(2 * alpha) - math.exp(-2 * alpha))


def upper_bound_coefficient(alpha: float) -> float:
    """e^{-2a} (e^{2a} - e^{-2a}) / 2, i.e. (1 - e^{-4a}) / 2."""
    return math.exp(-2 * alpha) * (math.exp(2 * alpha) - math.exp(-2 * alpha)) / 2


def upper_bound_asymptotic(spec: TaskSpec) -> float:
    if spec.K == 0:
        raise DomainError("The asymptotic loss needs K >= 1")
    if spec.S > spec.K:
        warnings.warn(f"S={spec.S} > K={spec.K}: outside the small S/K regime", OutOfRegimeWarning)
    return 1 - upper_bound_coefficient(spec.alpha) * spec.S / spec.K


@dataclass(frozen=True)
class WindowPoint:
    """Limit of the shift-K grid transfer function at rescaled frequency Omega = K w / pi."""

    Omega: float
    T: int
    alpha: float
    value: complex


def window_limit(Omega: float, T: int, alpha: float) -> complex:
    """
    Large-K limit of the shift-K grid transfer function C(e^{iw}) at w = pi Omega / K.

    Inside (|Omega| < T) its modulus oscillates between 1 - e^{-2a} and 1 + e^{-2a};
    outside it decays like 1/Omega.
    """
    if T < 1:
        raise ValidationError(f"T must be >= 1, got {T}")
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    if not math.isfinite(Omega):
        raise DomainError("Omega must be finite")
    if abs(abs(Omega) - T) <= config.WINDOW_BOUNDARY_TOL:
        raise DomainError(f"Omega={Omega} lies on the window edge |Omega| = T = {T}")
    amplitude = _amplitude(alpha)
    if abs(Omega) < T:
        phase = np.exp(1j * np.pi * Omega)
        return complex(amplitude / (math.exp(alpha) * phase - math.exp(-alpha) / phase))
    n = math.floor(Omega)
    if n == T:
        raise DomainError(f"Omega={Omega} lies in (T, T+1) where the exterior limit is undefined")
    sign = (-1) ** (T + 1)
    return complex(amplitude / 2 * 1j * sign * 2 * n / (2 * np.pi * (n - T) * (n + T)))


def window_point(Omega: float, T: int, alpha: float) -> WindowPoint:
    return WindowPoint(Omega, T, alpha, window_limit(Omega, T, alpha))


@dataclass(frozen=True)
class WindowSweepRow:
    """
    One Omega of a window sweep at w = pi Omega / K. `limit` is NaN where the
    limit is undefined; `transfer` and `solved_transfer` are C(e^{iw}) for the
    asymptotic and the solved weights.
    """

    Omega: float
    T: int
    K: int
    alpha: float
    limit: complex
    transfer: complex
    solved_transfer: complex


def window_sweep(S: int, K: int, alpha: float, omegas) -> list[WindowSweepRow]:
    """
    Window limit, asymptotic-b transfer and solved-b transfer of the shift-K grid
    over rescaled frequencies `omegas`.
    """
    spec = TaskSpec(S, K, 0.0, alpha)
    params = shiftk_init(spec)
    solved = params.with_weights(optimal_b(params.a, K))
    T = (S - 1) // 2
    omegas = np.asarray(omegas, dtype=float)
    w = np.pi * omegas / K
    transfer = transfer_function(params, w)
    solved_transfer = transfer_function(solved, w)
    rows = []
    for Omega, t, st in zip(omegas, np.atleast_1d(transfer), np.atleast_1d(solved_transfer)):
        try:
            limit = window_limit(float(Omega), T, alpha)
        except DomainError:
            limit = complex(np.nan, np.nan)
        rows.append(WindowSweepRow(float(Omega), T, K, alpha, limit, complex(t), complex(st)))
    logger.debug(f"Window sweep S={S} K={K}: {len(rows)} points")
    return rows


def ideal_window_loss(spec: TaskSpec) -> float:
    """1 - (2/pi) arctan(((1+rho)/(1-rho)) tan(pi S/K)), valid while S/K < 1/2."""
    if spec.K == 0 or 2 * spec.S >= spec.K:
        raise BranchError(f"S/K = {spec.S}/{spec.K} leaves the principal tangent branch (need S/K < 1/2)")
    rho = spec.rho
    return 1 - 2 / math.pi * math.atan((1 + rho) / (1 - rho) * math.tan(math.pi * spec.S / spec.K))
