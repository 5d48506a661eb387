"""
Complex sequences, DTFT evaluation on frequency grids, the AR(1) autocorrelation
spectrum and the quadrature every Parseval-type identity in the package rests on.

Conventions:
    DTFT        X(e^{iw}) = sum_n x_n e^{-iwn}
    quadrature  (1/2pi) * integral over [-pi, pi]
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

import config
from core.errors import ValidationError

SCHEMES = ("uniform-midpoint", "uniform-endpoint")


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class ComplexSeq:
    """Finite truncation of a causal complex sequence, starting at `offset`."""

    values: np.ndarray
    offset: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValidationError("ComplexSeq entries must be finite")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def indices(self) -> np.ndarray:
        return self.offset + np.arange(len(self.values))

    @classmethod
    def delta(cls, index: int, length: int = None) -> "ComplexSeq":
        """Unit impulse at `index`, zero-padded up to `length` entries."""
        length = index + 1 if length is None else length
        values = np.zeros(length, dtype=complex)
        values[index] = 1.0
        return cls(values)


@dataclass(frozen=True)
class FreqGrid:
    nodes: np.ndarray
    scheme: str = "uniform-midpoint"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1)
        if self.scheme not in SCHEMES:
            raise ValidationError(f"Unknown grid scheme: {self.scheme}. Use one of {SCHEMES}")
        if np.any(np.abs(nodes) > np.pi):
            raise ValidationError("Grid nodes must lie in [-pi, pi]")
        if np.any(np.diff(nodes) <= 0):
            raise ValidationError("Grid nodes must be strictly increasing")
        object.__setattr__(self, "nodes", _frozen(nodes))

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class NoiseModel:
    """Stationary AR(1) input with autocorrelation gamma(k) = rho^|k|."""

    rho: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValidationError(f"rho must lie in [0, 1), got {self.rho}")

    def spectrum(self, omega):
        return autocorr_spectrum(self, omega)


def as_seq(seq: Union[ComplexSeq, np.ndarray, list]) -> ComplexSeq:
    return seq if isinstance(seq, ComplexSeq) else ComplexSeq(seq)


def uniform_grid(nodes: int = config.DEFAULT_QUAD_NODES, scheme: str = "uniform-midpoint") -> FreqGrid:
    """Uniform grid on [-pi, pi] with `nodes` points (midpoint or left-endpoint rule)."""
    if nodes < 0:
        raise ValidationError("Node count must be nonnegative")
    h = 2 * np.pi / nodes if nodes else 0.0
    shift = 0.5 if scheme == "uniform-midpoint" else 0.0
    return FreqGrid(-np.pi + (np.arange(nodes) + shift) * h, scheme)


def dtft_eval(seq: Union[ComplexSeq, np.ndarray], grid: FreqGrid) -> np.ndarray:
    """Evaluate the DTFT of a finite sequence at every node of `grid`."""
    seq = as_seq(seq)
    if len(grid) == 0:
        return np.zeros(0, dtype=complex)
    phases = np.exp(-1j * np.outer(grid.nodes, seq.indices))
    return phases @ seq.values


def autocorr_spectrum(model: NoiseModel, omega):
    """Gamma(e^{iw}) = (1 - rho^2) / |1 - rho e^{-iw}|^2, strictly positive."""
    omega = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(omega)):
        raise ValidationError("omega must be finite")
    rho = model.rho
    value = (1 - rho**2) / np.abs(1 - rho * np.exp(-1j * omega)) ** 2
    return float(value) if value.ndim == 0 else value


def weighted_quadrature(samples, grid: FreqGrid):
    """Approximate (1/2pi) * integral of f over [-pi, pi] from samples on a uniform grid."""
    samples = np.asarray(samples)
    if samples.shape != (len(grid),):
        raise ValidationError(f"Got {samples.size} samples for a grid of {len(grid)} nodes")
    if len(grid) == 0:
        return 0.0
    value = samples.mean()
    return float(value) if np.isrealobj(samples) else complex(value)


def energy(seq: Union[ComplexSeq, np.ndarray]) -> float:
    return float(np.sum(np.abs(as_seq(seq).values) ** 2))


def geometric_tail_bound(a, k_max: int, b=None) -> float:
    """
    Bound on sum_{k > k_max} |c_k| for c_k = sum_s b_s a_s^k.

    Args:
        a: pole vector, all |a_s| < 1
        k_max: last retained index
        b: weight vector (unit weights when omitted)

    Returns:
        sum|b| * r^(k_max+1) / (1 - r) with r = max|a|
    """
    a = np.asarray(a, dtype=complex)
    weight = len(a) if b is None else float(np.sum(np.abs(b)))
    r = float(np.max(np.abs(a))) if len(a) else 0.0
    if r >= 1:
        raise ValidationError("Tail bound needs max|a| < 1")
    return weight * r ** (k_max + 1) / (1 - r)


def convolve_causal(c, u) -> np.ndarray:
    """y_n = sum_{k<=n} c_k u_{n-k} for n < len(u)."""
    c = np.asarray(c, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if len(u) == 0 or len(c) == 0:
        return np.zeros(len(u), dtype=complex)
    return np.convolve(c, u)[: len(u)]


def window_gamma_mass(model: NoiseModel, half_width: float) -> float:
    """(1/2pi) * integral of Gamma over [-w, w], in closed form."""
    if not 0 <= half_width <= np.pi:
        raise ValidationError("half_width must lie in [0, pi]")
    rho = model.rho
    # arctan2 keeps w = pi (tan -> inf) on the principal branch
    angle = np.arctan2((1 + rho) * np.sin(half_width / 2), (1 - rho) * np.cos(half_width / 2))
    return float(2 / np.pi * angle)


def window_gamma_mass_quadrature(model: NoiseModel, half_width: float,
                                 nodes: int = config.DEFAULT_QUAD_NODES) -> float:
    """Midpoint-rule counterpart of window_gamma_mass."""
    if not 0 <= half_width <= np.pi:
        raise ValidationError("half_width must lie in [0, pi]")
    h = 2 * half_width / nodes
    omegas = -half_width + (np.arange(nodes) + 0.5) * h
    return float(half_width / np.pi * np.mean(autocorr_spectrum(model, omegas)))
