"""
Approximation error between a diagonal recurrence and the shift-K target.

Every loss here is the same quantity computed three ways:
    time_closed      geometric series summed in closed form
    freq_quadrature  (1/2pi) * integral of |C(e^{iw}) - e^{-iKw}|^2 Gamma(e^{iw}) dw
    oracle           direct truncation of the double sum over (c_k - d_k) rho^|k-k'|
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import signal

import config
from core.asymptotics import upper_bound_asymptotic
from core.bounds import gram_matrix, lower_bound_auto, lower_bound_white
from core.errors import NumericalError, SingularConfigurationError, ValidationError
from core.filter import FilterParams, ShiftKTarget, TaskSpec, impulse_response, pole_power, transfer_function
from core.spectral import NoiseModel, autocorr_spectrum, geometric_tail_bound, uniform_grid, weighted_quadrature

logger = logging.getLogger(__name__)

REPORT_FIELDS = ("time_closed", "freq_quadrature", "oracle_truncated",
                 "oracle_tail_bound", "lower_bound", "upper_asymptotic")


@dataclass(frozen=True)
class LossReport:
    time_closed: float
    freq_quadrature: float
    oracle_truncated: float
    oracle_tail_bound: float
    lower_bound: float
    upper_asymptotic: Optional[float] = None

    def __post_init__(self):
        for name in REPORT_FIELDS:
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise NumericalError(f"LossReport.{name} is not finite: {value}")
        if self.time_closed < -config.NEGATIVE_LOSS_TOL:
            raise NumericalError(f"Negative loss {self.time_closed:.3e}")

    def to_json(self) -> dict:
        return asdict(self)


def _check_K(K: int):
    if K < 0:
        raise ValidationError(f"Shift K must be >= 0, got {K}")


def _real_loss(value: complex, reference: float = 1.0) -> float:
    if abs(value.imag) > config.IMAG_RESIDUE_TOL * max(1.0, abs(reference)):
        raise NumericalError(f"Closed-form loss has imaginary residue {value.imag:.3e}")
    if value.real < -config.NEGATIVE_LOSS_TOL:
        raise NumericalError(f"Closed-form loss is negative: {value.real:.3e}")
    return float(value.real)


def loss_white_closed(p: FilterParams, K: int) -> float:
    """1 + sum b_s conj(b_s') / (1 - a_s conj(a_s')) - 2 Re sum b_s a_s^K."""
    _check_K(K)
    quad = p.b @ gram_matrix(p.a) @ np.conj(p.b)
    value = 1 + quad - 2 * np.sum(p.b * pole_power(p.a, K)).real
    return _real_loss(value, abs(quad))


def loss_auto_closed(p: FilterParams, K: int, rho: float) -> float:
    """
    Loss under AR(1) input, through the weights on the augmented poles (a, rho):

        w_s = b_s a_s / (a_s - rho),   w_{S+1} = -rho * sum_s w_s / a_s

    Raises:
        SingularConfigurationError: a pole sits on rho or on 0; use loss_freq_quadrature.
    """
    _check_K(K)
    NoiseModel(rho)
    if rho == 0:
        return loss_white_closed(p, K)
    a, b = p.a, p.b
    if np.min(np.abs(a - rho)) <= config.SINGULAR_POLE_TOL or np.min(np.abs(a)) <= config.SINGULAR_POLE_TOL:
        raise SingularConfigurationError(
            f"A pole lies within {config.SINGULAR_POLE_TOL} of rho={rho} or of 0; "
            "use loss_freq_quadrature for this configuration")
    w = b * a / (a - rho)
    augmented_a = np.append(a, rho)
    augmented_w = np.append(w, -rho * np.sum(w / a))
    scale = 1 - rho**2
    cross = np.sum(augmented_w * pole_power(augmented_a, K) / (1 - augmented_a * rho))
    quad = augmented_w @ gram_matrix(augmented_a) @ np.conj(augmented_w)
    value = 1 - 2 * scale * cross.real + scale * quad
    return _real_loss(value, scale * abs(quad))


def quadrature_nodes_for(rho: float, a=None) -> int:
    """
    ceil(8192 / (1 - rho)), raised so that the slowest pole decays over the grid,
    capped at 2^20.
    """
    nodes = math.ceil(config.LOSS_QUAD_NODES / (1 - rho))
    if a is not None and len(a):
        r = float(np.max(np.abs(a)))
        if r > 0:
            nodes = max(nodes, math.ceil(config.QUAD_DECAY_FACTOR / -math.log(r)))
    return min(nodes, config.MAX_QUAD_NODES)


def loss_freq_quadrature(p: FilterParams, K: int, rho: float, nodes: Optional[int] = None) -> float:
    _check_K(K)
    model = NoiseModel(rho)
    nodes = quadrature_nodes_for(rho, p.a) if nodes is None else nodes
    if nodes < config.MIN_LOSS_NODES:
        raise ValidationError(f"Need at least {config.MIN_LOSS_NODES} nodes, got {nodes}")
    grid = uniform_grid(nodes)
    samples = np.empty(nodes)
    for start in range(0, nodes, config.QUAD_CHUNK):
        omega = grid.nodes[start:start + config.QUAD_CHUNK]
        error = transfer_function(p, omega) - np.exp(-1j * K * omega)
        samples[start:start + config.QUAD_CHUNK] = np.abs(error) ** 2 * autocorr_spectrum(model, omega)
    logger.debug(f"Quadrature loss with {nodes} nodes")
    return weighted_quadrature(samples, grid)


def oracle_k_max(p: FilterParams, K: int) -> int:
    """Smallest truncation whose geometric tail falls below the oracle target."""
    r = float(np.max(np.abs(p.a)))
    weight = float(np.sum(np.abs(p.b)))
    if r == 0 or weight == 0:
        return K
    needed = math.log(config.ORACLE_TAIL_TARGET * (1 - r) / weight) / math.log(r)
    return int(min(max(K, math.ceil(needed)), config.ORACLE_MAX_K))


def loss_truncated_oracle(p: FilterParams, K: int, rho: float,
                          k_max: Optional[int] = None) -> tuple[float, float]:
    """
    sum_{k,k' <= k_max} (c_k - d_k) conj(c_k' - d_k') rho^|k-k'|.

    Returns:
        (value, tail_bound) where tail_bound bounds the discarded mass
    """
    _check_K(K)
    NoiseModel(rho)
    k_max = oracle_k_max(p, K) if k_max is None else k_max
    if k_max < K:
        raise ValidationError(f"k_max={k_max} < K={K} truncates the target delta away")
    e = impulse_response(p, k_max).values - ShiftKTarget(K).kernel(k_max)
    value = float(np.sum(np.abs(e) ** 2))
    if rho > 0:
        # q_k = sum_{j<k} rho^(k-j) e_j
        q = signal.lfilter([0.0, rho], [1.0, -rho], e)
        value += 2 * float(np.sum(e * np.conj(q)).real)
    r = float(np.max(np.abs(p.a)))
    tail = geometric_tail_bound(p.a, k_max, p.b)
    tail_bound = 2 * tail * (1 + float(np.sum(np.abs(p.b))) / (1 - r))
    return value, tail_bound


def time_closed(p: FilterParams, K: int, rho: float = 0.0) -> float:
    """Closed-form loss, or the quadrature when the closed form is singular."""
    if rho == 0:
        return loss_white_closed(p, K)
    try:
        return loss_auto_closed(p, K, rho)
    except SingularConfigurationError as e:
        logger.warning(f"{e}; falling back to quadrature")
        return loss_freq_quadrature(p, K, rho)


def loss_report(p: FilterParams, K: int, rho: float = 0.0, alpha: Optional[float] = None,
                nodes: Optional[int] = None, k_max: Optional[int] = None) -> LossReport:
    """
    All loss estimates for one configuration.

    Args:
        p: filter to evaluate
        K: target shift
        rho: AR(1) coefficient of the input
        alpha: decay of the shift-K grid when p came from shiftk_init; enables upper_asymptotic
        nodes: quadrature nodes (scaled with rho and the poles when omitted)
        k_max: oracle truncation (tail below the oracle target when omitted)
    """
    closed = time_closed(p, K, rho)
    quadrature = loss_freq_quadrature(p, K, rho, nodes)
    oracle, tail_bound = loss_truncated_oracle(p, K, rho, k_max)
    if rho == 0:
        lower = lower_bound_white(p.S, K)
    else:
        lower = lower_bound_auto(p.S, K, rho) if K >= 1 else 0.0
    upper = None
    if alpha is not None and K >= 1:
        upper = upper_bound_asymptotic(TaskSpec(p.S, K, rho, alpha))
    return LossReport(closed, quadrature, oracle, tail_bound, lower, upper)
