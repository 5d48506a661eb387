"""
Invariant checks behind `verify`: the loss identities, the Cauchy-matrix
identities, the semi-Parseval relation, the Toeplitz eigenpair and the
training gradients. Every check registers itself in CHECKS.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from core.bounds import (blaschke_eval, cauchy_gram, cauchy_inverse_displacement, f_criterion,
                         gram_matrix, optimal_b, toeplitz_eigen_residual, toeplitz_eigenvalue,
                         u_vector, verify_semi_parseval)
from core.errors import ValidationError
from core.experiments import loss_gradient
from core.filter import FilterParams, impulse_response, pole_powers
from core.loss import loss_auto_closed, loss_freq_quadrature, loss_truncated_oracle, loss_white_closed
from core.spectral import ComplexSeq, convolve_causal, dtft_eval, uniform_grid

logger = logging.getLogger(__name__)

CHECKS: dict = {}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class CheckContext:
    rng: np.random.Generator
    perturb_cauchy: float = 0.0


def register_check(name: str):
    def decorator(fn: Callable[[CheckContext], CheckResult]):
        CHECKS[name] = fn
        return fn
    return decorator


def random_poles(rng: np.random.Generator, S: int, r_min: float = 0.1, r_max: float = 0.9) -> np.ndarray:
    """S stable poles with moduli in [r_min, r_max]; one random phase per sector of width 2pi/S."""
    phases = -np.pi + 2 * np.pi * (np.arange(S) + rng.uniform(0.1, 0.9, S)) / S
    return rng.uniform(r_min, r_max, S) * np.exp(1j * phases)


def random_params(rng: np.random.Generator, S: int) -> FilterParams:
    b = rng.normal(size=S) + 1j * rng.normal(size=S)
    return FilterParams(random_poles(rng, S), 0.5 * b)


def _result(name: str, value: float, tolerance: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(value <= tolerance), float(value), tolerance, detail)


@register_check("parseval_white")
def check_parseval_white(ctx: CheckContext) -> CheckResult:
    worst = 0.0
    for _ in range(200):
        p = random_params(ctx.rng, int(ctx.rng.integers(1, 9)))
        K = int(ctx.rng.integers(0, 51))
        closed = loss_white_closed(p, K)
        oracle, tail = loss_truncated_oracle(p, K, 0.0)
        worst = max(worst, abs(closed - loss_freq_quadrature(p, K, 0.0, 8192)) / 1e-6,
                    abs(closed - oracle) / max(1e-8, tail))
    return _result("parseval_white", worst, 1.0, "max error in units of its tolerance")


@register_check("parseval_auto")
def check_parseval_auto(ctx: CheckContext) -> CheckResult:
    worst = 0.0
    for rho in (0.3, 0.6):
        for _ in range(200):
            p = random_params(ctx.rng, int(ctx.rng.integers(1, 9)))
            K = int(ctx.rng.integers(0, 51))
            closed = loss_auto_closed(p, K, rho)
            oracle, tail = loss_truncated_oracle(p, K, rho)
            worst = max(worst, abs(closed - loss_freq_quadrature(p, K, rho)) / 1e-6,
                        abs(closed - oracle) / max(1e-8, tail))
    return _result("parseval_auto", worst, 1.0, "max error in units of its tolerance")


@register_check("displacement")
def check_displacement(ctx: CheckContext) -> CheckResult:
    a = random_poles(ctx.rng, 8)
    matrix = gram_matrix(a)
    if ctx.perturb_cauchy:
        matrix = matrix + ctx.perturb_cauchy * np.eye(len(a))
    shifted = a[:, None] * matrix * np.conj(a)[None, :]
    residual = float(np.max(np.abs(matrix - shifted - 1.0)))
    return _result("displacement", residual, 1e-12, f"perturbation {ctx.perturb_cauchy:g}")


@register_check("displacement_inverse")
def check_displacement_inverse(ctx: CheckContext) -> CheckResult:
    a = random_poles(ctx.rng, 6, 0.2, 0.8)
    dense = np.linalg.inv(cauchy_gram(a).matrix)
    error = np.linalg.norm(cauchy_inverse_displacement(a) - dense) / np.linalg.norm(dense)
    return _result("displacement_inverse", error, 1e-8)


@register_check("blaschke_unit_modulus")
def check_blaschke(ctx: CheckContext) -> CheckResult:
    a = random_poles(ctx.rng, 10)
    z = np.exp(1j * uniform_grid(512).nodes)
    return _result("blaschke_unit_modulus", float(np.max(np.abs(np.abs(blaschke_eval(a, z)) - 1))), 1e-12)


@register_check("u_vector_rational")
def check_u_rational(ctx: CheckContext) -> CheckResult:
    a = random_poles(ctx.rng, 6, 0.2, 0.8)
    u = u_vector(a)
    z = 0.9 * np.exp(1j * ctx.rng.uniform(-np.pi, np.pi, 16))
    lhs = (u / (1 - z[:, None] * np.conj(a))).sum(axis=1)
    rhs = 1 - np.prod(np.conj(a)) * blaschke_eval(a, z)
    return _result("u_vector_rational", float(np.max(np.abs(lhs - rhs))), 1e-8)


@register_check("u_vector_mass")
def check_u_mass(ctx: CheckContext) -> CheckResult:
    a = random_poles(ctx.rng, 6, 0.2, 0.8)
    error = abs(u_vector(a).sum() - (1 - np.prod(np.abs(a) ** 2)))
    return _result("u_vector_mass", float(error), 1e-9)


@register_check("semi_parseval")
def check_semi_parseval(ctx: CheckContext) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        w = ctx.rng.normal(size=32) + 1j * ctx.rng.normal(size=32)
        lhs, rhs = verify_semi_parseval(w, 256)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return _result("semi_parseval", worst, 1e-8, "relative")


@register_check("toeplitz_eigen")
def check_toeplitz(ctx: CheckContext) -> CheckResult:
    residuals = [toeplitz_eigen_residual(1.0, size) for size in (11, 41, 161)]
    monotone = residuals[0] > residuals[1] > residuals[2]
    eigen_error = abs(toeplitz_eigenvalue(1.0) - 0.275721)
    detail = f"residuals {', '.join(f'{r:.3e}' for r in residuals)}"
    return CheckResult("toeplitz_eigen", bool(monotone and eigen_error < 1e-6), eigen_error, 1e-6, detail)


@register_check("lower_bound_white")
def check_lower_bound(ctx: CheckContext) -> CheckResult:
    worst = -np.inf
    for _ in range(500):
        S = int(ctx.rng.integers(1, 11))
        K = int(ctx.rng.integers(1, 201))
        a = random_poles(ctx.rng, S, 0.4, 0.9)
        f_k = f_criterion(a, K)
        best = loss_white_closed(FilterParams(a, optimal_b(a, K)), K)
        worst = max(worst, f_k - S / (K + 1), abs(best - (1 - f_k)))
    return _result("lower_bound_white", worst, 1e-9)


@register_check("convolution_theorem")
def check_convolution(ctx: CheckContext) -> CheckResult:
    p = random_params(ctx.rng, 4)
    c = impulse_response(p, 31).values
    u = ctx.rng.normal(size=32)
    full = ComplexSeq(np.convolve(c, u))
    grid = uniform_grid(128)
    error = np.max(np.abs(dtft_eval(full, grid) - dtft_eval(c, grid) * dtft_eval(u, grid)))
    truncated = np.max(np.abs(convolve_causal(c, u) - full.values[:32]))
    return _result("convolution_theorem", float(max(error, truncated)), 1e-10)


def finite_difference_gradient(p: FilterParams, batch: np.ndarray, t_star: int, h: float = 1e-6):
    def mse(a, b):
        prediction = (batch[:, ::-1] @ (b @ pole_powers(a, batch.shape[1] - 1))).real
        return np.mean((prediction - batch[:, t_star - 1]) ** 2)

    grads = []
    for which in ("a", "b"):
        values = p.a if which == "a" else p.b
        grad = np.zeros(len(values), dtype=complex)
        for s in range(len(values)):
            for step in (1.0, 1j):
                plus, minus = values.copy(), values.copy()
                plus[s] += h * step
                minus[s] -= h * step
                args_plus = (plus, p.b) if which == "a" else (p.a, plus)
                args_minus = (minus, p.b) if which == "a" else (p.a, minus)
                derivative = (mse(*args_plus) - mse(*args_minus)) / (2 * h)
                grad[s] += derivative * step
        grads.append(grad)
    return grads[0], grads[1]


@register_check("gradient")
def check_gradient(ctx: CheckContext) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        S = int(ctx.rng.integers(1, 5))
        N = int(ctx.rng.integers(4, 65))
        p = random_params(ctx.rng, S)
        batch = ctx.rng.normal(size=(8, N))
        t_star = int(ctx.rng.integers(1, N + 1))
        grad_a, grad_b = loss_gradient(p, batch, t_star)
        fd_a, fd_b = finite_difference_gradient(p, batch, t_star)
        analytic = np.concatenate([grad_a, grad_b])
        numeric = np.concatenate([fd_a, fd_b])
        worst = max(worst, np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), 1e-12))
    return _result("gradient", float(worst), 1e-5, "relative")


def run_checks(seed: int = 0, perturb_cauchy: float = 0.0, names: Optional[list] = None) -> dict:
    """Run the selected checks (all by default) and build the JSON report."""
    if seed < 0:
        raise ValidationError(f"seed must be nonnegative, got {seed}")
    names = list(CHECKS) if names is None else names
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise KeyError(f"Unknown checks: {unknown}. Available: {', '.join(CHECKS)}")
    results = []
    for name in names:
        ctx = CheckContext(np.random.default_rng([seed, len(results)]), perturb_cauchy)
        result = CHECKS[name](ctx)
        logger.info(f"{'PASS' if result.passed else 'FAIL'} {name}: {result.value:.3e} (tol {result.tolerance:g})")
        results.append(result)
    failures = [r.name for r in results if not r.passed]
    return {
        "passed": not failures,
        "seed": seed,
        "checks": [asdict(r) for r in results],
        "failures": failures,
    }
