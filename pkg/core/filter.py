"""
Diagonal linear-recurrence filter: x_n = diag(a) x_{n-1} + b u_n, y_n = sum_s x_{n,s}.

Kernel c_k = sum_s b_s a_s^k, transfer function C(e^{iw}) = sum_s b_s / (1 - a_s e^{-iw}).
"""
from dataclasses import dataclass

import numpy as np

from core.errors import StabilityError, ValidationError
from core.spectral import ComplexSeq, as_seq

CONVENTIONS = ("one_to_S", "symmetric_T")
_VANDERMONDE_BUDGET = 1_000_000


@dataclass(frozen=True)
class FilterParams:
    """Poles `a` and weights `b` of an order-S diagonal recurrence."""

    a: np.ndarray
    b: np.ndarray
    convention: str = "one_to_S"

    def __post_init__(self):
        a = np.array(self.a, dtype=complex).reshape(-1)
        b = np.array(self.b, dtype=complex).reshape(-1)
        if self.convention not in CONVENTIONS:
            raise ValidationError(f"Unknown index convention: {self.convention}")
        if len(a) == 0 or len(a) != len(b):
            raise ValidationError(f"Poles and weights need equal length >= 1, got {len(a)} and {len(b)}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValidationError("Filter parameters must be finite")
        if np.any(np.abs(a) >= 1):
            raise StabilityError(f"Unstable pole: max|a_s| = {np.max(np.abs(a)):.6g} >= 1")
        if self.convention == "symmetric_T" and len(a) % 2 == 0:
            raise ValidationError("symmetric_T convention needs S odd (S = 2T + 1)")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def S(self) -> int:
        return len(self.a)

    @property
    def logical_indices(self) -> np.ndarray:
        """s in [1, S] or s in [-T, T] (ascending), matching storage order."""
        if self.convention == "symmetric_T":
            T = (self.S - 1) // 2
            return np.arange(-T, T + 1)
        return np.arange(1, self.S + 1)

    def with_weights(self, b) -> "FilterParams":
        return FilterParams(self.a, b, self.convention)

    def to_json(self) -> dict:
        return {
            "convention": self.convention,
            "a": [[float(z.real), float(z.imag)] for z in self.a],
            "b": [[float(z.real), float(z.imag)] for z in self.b],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FilterParams":
        unknown = set(data) - {"convention", "a", "b"}
        if unknown:
            raise ValidationError(f"Unknown FilterParams keys: {sorted(unknown)}")
        try:
            a = [complex(re, im) for re, im in data["a"]]
            b = [complex(re, im) for re, im in data["b"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"Malformed FilterParams JSON: {e}")
        return cls(a, b, data.get("convention", "one_to_S"))


@dataclass(frozen=True)
class TaskSpec:
    S: int
    K: int
    rho: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.S < 1:
            raise ValidationError(f"State size S must be >= 1, got {self.S}")
        if self.K < 0:
            raise ValidationError(f"Shift K must be >= 0, got {self.K}")
        if not 0.0 <= self.rho < 1.0:
            raise ValidationError(f"rho must lie in [0, 1), got {self.rho}")
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class ShiftKTarget:
    """The kernel d_k = 1 iff k = K."""

    K: int

    def kernel(self, k_max: int) -> np.ndarray:
        d = np.zeros(k_max + 1, dtype=complex)
        if self.K <= k_max:
            d[self.K] = 1.0
        return d


def pole_power(a, k: int) -> np.ndarray:
    """a_s^k with 0^0 = 1."""
    a = np.asarray(a, dtype=complex)
    if k == 0:
        return np.ones_like(a)
    with np.errstate(all="ignore"):
        powers = a**k
    return np.where(a == 0, 0.0, powers)


def pole_powers(a, k_max: int) -> np.ndarray:
    """S x (k_max + 1) Vandermonde matrix V[s, k] = a_s^k, built by running products."""
    a = np.asarray(a, dtype=complex)
    factors = np.ones((len(a), k_max + 1), dtype=complex)
    factors[:, 1:] = a[:, None]
    return np.cumprod(factors, axis=1)


def impulse_response(p: FilterParams, k_max: int) -> ComplexSeq:
    """c_k = sum_s b_s a_s^k for k = 0..k_max."""
    if k_max < 0:
        raise ValidationError("k_max must be nonnegative")
    # Vandermonde blocks of a few poles at a time keep memory linear in k_max
    chunk = max(1, _VANDERMONDE_BUDGET // (k_max + 1))
    c = np.zeros(k_max + 1, dtype=complex)
    for start in range(0, p.S, chunk):
        c += p.b[start:start + chunk] @ pole_powers(p.a[start:start + chunk], k_max)
    return ComplexSeq(c)


def transfer_terms(p: FilterParams, omega) -> np.ndarray:
    """Partial-fraction terms b_s / (1 - a_s e^{-iw}); trailing axis runs over s."""
    omega = np.asarray(omega, dtype=float)
    z = np.exp(-1j * omega)[..., None]
    return p.b / (1 - p.a * z)


def transfer_function(p: FilterParams, omega):
    """C(e^{iw}) = sum_s b_s / (1 - a_s e^{-iw}); scalar in, scalar out."""
    value = transfer_terms(p, omega).sum(axis=-1)
    return complex(value) if value.ndim == 0 else value


def shiftk_weight(alpha: float, K: int) -> float:
    """|b_s| = e^{-alpha} (e^{2 alpha} - e^{-2 alpha}) / (2K)."""
    return np.exp(-alpha) * (np.exp(2 * alpha) - np.exp(-2 * alpha)) / (2 * K)


def shiftk_poles(S: int, K: int, alpha: float) -> np.ndarray:
    """a_s = e^{-alpha/K} e^{i pi s/K} for s in [-T, T], exactly conjugate-symmetric."""
    T = (S - 1) // 2
    upper = np.exp(-alpha / K) * np.exp(1j * np.pi * np.arange(0, T + 1) / K)
    upper[0] = upper[0].real
    return np.concatenate([np.conj(upper[:0:-1]), upper])


def alternating_signs(indices) -> np.ndarray:
    return np.where(np.asarray(indices) % 2 == 0, 1.0, -1.0)


def shiftk_init(spec: TaskSpec) -> FilterParams:
    """Explicit shift-K filter: grid poles and the asymptotically optimal real weights."""
    if spec.S % 2 == 0:
        raise ValidationError(f"shiftk_init needs S odd (S = 2T + 1), got S = {spec.S}")
    if spec.K < 1:
        raise ValidationError(f"shiftk_init needs K >= 1, got K = {spec.K}")
    T = (spec.S - 1) // 2
    a = shiftk_poles(spec.S, spec.K, spec.alpha)
    b = alternating_signs(np.arange(-T, T + 1)) * shiftk_weight(spec.alpha, spec.K)
    return FilterParams(a, b, "symmetric_T")


def is_conjugate_symmetric(p: FilterParams, tol: float = 1e-12) -> bool:
    """True when the (a_s, b_s) pairs are closed under complex conjugation."""
    for a_s, b_s in zip(p.a, p.b):
        j = np.argmin(np.abs(p.a - np.conj(a_s)))
        if abs(p.a[j] - np.conj(a_s)) > tol or abs(p.b[j] - np.conj(b_s)) > tol:
            return False
    return True


def rnn_rollout(p: FilterParams, input) -> ComplexSeq:
    """Run the diagonal recurrence from a zero state and read out y_n = sum_s x_{n,s}."""
    u = as_seq(input).values
    x = np.zeros(p.S, dtype=complex)
    y = np.zeros(len(u), dtype=complex)
    for n, u_n in enumerate(u):
        x = p.a * x + p.b * u_n
        y[n] = x.sum()
    return ComplexSeq(y)
