"""
Cauchy-structured Gram matrix of geometric sequences, optimal weights, the
performance criteria F_K / H_K, the lower bounds and the verification identities
(displacement structure, Blaschke products, semi-Parseval, Toeplitz eigenpair).
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

import config
from core.errors import (ConditioningError, DegenerateConfigurationError, NumericalError,
                         SingularConfigurationError, StabilityError, ValidationError)
from core.filter import pole_power
from core.spectral import ComplexSeq, as_seq, dtft_eval, uniform_grid, weighted_quadrature

logger = logging.getLogger(__name__)


def _check_poles(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex).reshape(-1)
    if len(a) == 0:
        raise ValidationError("Need at least one pole")
    if np.any(np.abs(a) >= 1):
        raise StabilityError(f"Unstable pole: max|a_s| = {np.max(np.abs(a)):.6g} >= 1")
    if len(a) > 1:
        gaps = np.abs(a[:, None] - a[None, :])[np.triu_indices(len(a), 1)]
        if gaps.min() <= config.DISTINCT_POLE_TOL:
            raise DegenerateConfigurationError(
                f"Poles must be pairwise distinct (min distance {gaps.min():.3e})")
    return a


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > config.IMAG_RESIDUE_TOL * max(1.0, abs(value.real)):
        raise NumericalError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


@dataclass(frozen=True)
class CauchyGram:
    """C_{ss'} = 1 / (1 - a_s conj(a_s')), Hermitian positive definite."""

    a: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray

    @property
    def condition(self) -> float:
        smallest = self.eigenvalues[0]
        return float(self.eigenvalues[-1] / smallest) if smallest > 0 else np.inf

    def displacement_residual(self) -> float:
        """max |C - diag(a) C diag(conj(a)) - 1 1^T|."""
        shifted = self.a[:, None] * self.matrix * np.conj(self.a)[None, :]
        return float(np.max(np.abs(self.matrix - shifted - 1.0)))

    def solve(self, rhs) -> np.ndarray:
        """C^{-1} rhs through a Cholesky factorization, guarded by the condition estimate."""
        if self.condition > config.COND_LIMIT:
            raise ConditioningError("Cauchy Gram matrix is ill-conditioned", self.condition)
        try:
            factor = linalg.cho_factor(self.matrix, lower=True)
        except linalg.LinAlgError:
            raise ConditioningError("Cholesky factorization failed", self.condition)
        return linalg.cho_solve(factor, np.asarray(rhs, dtype=complex))


def gram_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    full = 1.0 / (1.0 - a[:, None] * np.conj(a)[None, :])
    # mirror the upper triangle so C is Hermitian bit for bit
    return np.triu(full) + np.triu(full, 1).conj().T


def cauchy_gram(a) -> CauchyGram:
    a = _check_poles(a)
    matrix = gram_matrix(a)
    eigenvalues = linalg.eigvalsh(matrix)
    if len(a) <= config.PD_CHECK_MAX_SIZE and eigenvalues[0] <= 0:
        raise DegenerateConfigurationError(
            f"Cauchy Gram matrix is not positive definite (smallest eigenvalue {eigenvalues[0]:.3e})")
    gram = CauchyGram(a, matrix, eigenvalues)
    logger.debug(f"Cauchy Gram S={len(a)} condition={gram.condition:.3e}")
    return gram


def optimal_b(a, K: int) -> np.ndarray:
    """
    Exact minimizer of the white-noise loss over b for fixed poles.

    The loss is 1 + beta^H C beta - 2 Re(beta^H a^K) in beta = conj(b), so
    b = conj(C^{-1} a^K), i.e. conj(C) b = conj(a)^K.
    """
    gram = cauchy_gram(a)
    target = pole_power(gram.a, K)
    b = np.conj(gram.solve(target))
    residual = np.linalg.norm(np.conj(gram.matrix) @ b - np.conj(target))
    if residual > 1e-8 * np.linalg.norm(target):
        raise ConditioningError(f"Normal-equation residual {residual:.3e} too large", gram.condition)
    return b


def f_criterion(a, K: int) -> float:
    """F_K = <a^K, C^{-1} a^K>; the best white-noise loss for poles a is 1 - F_K."""
    gram = cauchy_gram(a)
    target = pole_power(gram.a, K)
    return _real(np.vdot(target, gram.solve(target)), "F_K")


def lower_bound_white(S: int, K: int) -> float:
    if S < 1 or K < 0:
        raise ValidationError(f"Need S >= 1 and K >= 0, got S={S}, K={K}")
    return max(0.0, 1.0 - S / (K + 1))


def lower_bound_auto(S: int, K: int, rho: float) -> float:
    if S < 1 or K < 1:
        raise ValidationError(f"Need S >= 1 and K >= 1, got S={S}, K={K}")
    if not 0.0 <= rho < 1.0:
        raise ValidationError(f"rho must lie in [0, 1), got {rho}")
    return max(0.0, 1.0 - 3 * S / (K * (1 - rho)))


def h_criterion(a, K: int, rho: float) -> float:
    """
    Unconstrained minimum of the autocorrelated loss over weights on the poles a
    augmented with rho. Lower-bounds the loss of every filter with poles a.
    """
    if not 0.0 <= rho < 1.0:
        raise ValidationError(f"rho must lie in [0, 1), got {rho}")
    if rho <= config.MIN_H_RHO:
        logger.debug(f"rho={rho} is white noise, using F_K")
        return 1.0 - f_criterion(a, K)
    a = _check_poles(a)
    if np.min(np.abs(a - rho)) <= config.SINGULAR_POLE_TOL:
        raise DegenerateConfigurationError(f"A pole collides with rho={rho}")
    augmented = np.append(a, rho)
    gram = cauchy_gram(augmented)
    g = pole_power(augmented, K) / (1 - augmented * rho)
    return 1.0 - (1 - rho**2) * _real(np.vdot(g, gram.solve(g)), "H_K")


@dataclass(frozen=True)
class BoundValues:
    f_k: float
    lower_white: float
    h_k: Optional[float] = None
    lower_auto: Optional[float] = None


def bound_values(a, K: int, rho: float = 0.0) -> BoundValues:
    S = len(np.atleast_1d(a))
    f_k = f_criterion(a, K)
    if rho == 0:
        return BoundValues(f_k, lower_bound_white(S, K))
    return BoundValues(f_k, lower_bound_white(S, K), h_criterion(a, K, rho),
                       lower_bound_auto(S, K, rho) if K >= 1 else 0.0)


def blaschke_eval(a, z):
    """B(z) = prod_s (a_s - z) / (1 - z conj(a_s)); unit modulus on the unit circle."""
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    factors = (a - z[..., None]) / (1 - z[..., None] * np.conj(a))
    value = np.prod(factors, axis=-1)
    return complex(value) if value.ndim == 0 else value


def u_vector(a) -> np.ndarray:
    """u = C^{-1} 1."""
    gram = cauchy_gram(a)
    return gram.solve(np.ones(len(gram.a)))


def cauchy_inverse_displacement(a) -> np.ndarray:
    """
    C^{-1} rebuilt from its displacement structure.

    With f = diag(a)^{-1} 1, v = diag(conj(a))^{-1} C^{-1} diag(a)^{-1} 1 and
    q = f^H C^{-1} f:
        (C^{-1})_{ss'} = v_s conj(v_s') / ((1 + q) (1 / (conj(a_s) a_s') - 1))
    """
    gram = cauchy_gram(a)
    a = gram.a
    if np.min(np.abs(a)) <= config.SINGULAR_POLE_TOL:
        raise SingularConfigurationError("Displacement inverse needs nonzero poles")
    f = 1.0 / a
    x_f = gram.solve(f)
    q = _real(np.vdot(f, x_f), "q")
    v = x_f / np.conj(a)
    scale = 1.0 / (np.conj(a)[:, None] * a[None, :]) - 1.0
    return np.outer(v, np.conj(v)) / ((1 + q) * scale)


def verify_semi_parseval(w, nodes: int = config.DEFAULT_QUAD_NODES) -> tuple[float, float]:
    """
    Both sides of sum_L L |w_L|^2 = (i/2pi) * integral of W'(w) conj(W(w)).

    Returns:
        (lhs by direct summation, rhs by quadrature with W' evaluated analytically)
    """
    if nodes < config.MIN_SEMI_PARSEVAL_NODES:
        raise ValidationError(f"Need at least {config.MIN_SEMI_PARSEVAL_NODES} nodes, got {nodes}")
    w = as_seq(w)
    lags = w.indices
    lhs = float(np.sum(lags * np.abs(w.values) ** 2))
    grid = uniform_grid(nodes)
    spectrum = dtft_eval(w, grid)
    derivative = dtft_eval(ComplexSeq(-1j * lags * w.values, w.offset), grid)
    rhs = (1j * weighted_quadrature(derivative * np.conj(spectrum), grid)).real
    return lhs, float(rhs)


def toeplitz_eigenvalue(alpha: float) -> float:
    return 2.0 / (np.exp(2 * alpha) - np.exp(-2 * alpha))


def toeplitz_eigen_residual(alpha: float, size: int) -> float:
    """||T z - lambda z|| / ||z|| for T(s, s') = 1 / (2 alpha - i (s - s') pi), z = ((-1)^s)."""
    if size < 3 or size % 2 == 0:
        raise ValidationError(f"size must be odd and >= 3, got {size}")
    T = (size - 1) // 2
    s = np.arange(-T, T + 1)
    toeplitz = 1.0 / (2 * alpha - 1j * (s[:, None] - s[None, :]) * np.pi)
    z = np.where(s % 2 == 0, 1.0, -1.0)
    residual = toeplitz @ z - toeplitz_eigenvalue(alpha) * z
    return float(np.linalg.norm(residual) / np.linalg.norm(z))
