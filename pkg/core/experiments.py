"""
Synthetic copy task: recover u_{t*} from an AR(1) sequence of length N with a
diagonal linear recurrence read out at the last step (a shift by K* = N - t*).

Training is plain minibatch gradient descent on the complex parameters with
decoupled weight decay and a radial clamp keeping every pole inside the unit disk.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional, Union

import numpy as np
from scipy import signal
from tqdm import tqdm

import config
from core.errors import DivergenceError, ValidationError
from core.filter import FilterParams, TaskSpec, alternating_signs, impulse_response, pole_powers, shiftk_init, shiftk_weight

logger = logging.getLogger(__name__)

INIT_SCHEMES = ("shiftk_grid", "random_phase")


@dataclass(frozen=True)
class ARDatasetSpec:
    N: int
    t_star: int
    rho: float
    num_samples: int
    seed: int = 0
    burn_in: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError(f"Sequence length N must be >= 1, got {self.N}")
        if not 1 <= self.t_star <= self.N:
            raise ValidationError(f"t_star must lie in [1, N={self.N}], got {self.t_star}")
        if not 0.0 <= self.rho < 1.0:
            raise ValidationError(f"rho must lie in [0, 1), got {self.rho}")
        if self.num_samples < 1:
            raise ValidationError(f"num_samples must be positive, got {self.num_samples}")
        if self.burn_in < 0 or self.seed < 0:
            raise ValidationError("burn_in and seed must be nonnegative")

    @property
    def K_star(self) -> int:
        return self.N - self.t_star


@dataclass(frozen=True)
class ARDataset:
    """Sequences stored row-wise, shape (num_samples, N); targets are u_{t*}."""

    sequences: np.ndarray
    targets: np.ndarray
    t_star: int

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[tuple[np.ndarray, float]]:
        return iter(zip(self.sequences, self.targets))


@dataclass(frozen=True)
class TrainConfig:
    init_scheme: str = "shiftk_grid"
    K_init: int = 250
    alpha: float = 1.0
    S: int = 33
    learning_rate: float = config.DESK_LEARNING_RATE
    weight_decay: float = config.WEIGHT_DECAY
    batch_size: int = 20
    epochs: int = config.DESK_EPOCHS
    seed: int = 0

    def __post_init__(self):
        if self.init_scheme not in INIT_SCHEMES:
            raise ValidationError(f"Unknown init scheme: {self.init_scheme}. Use one of {INIT_SCHEMES}")
        if self.K_init < 1 or self.S < 1 or self.batch_size < 1 or self.epochs < 1:
            raise ValidationError("K_init, S, batch_size and epochs must be positive")
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be positive, got {self.alpha}")
        if self.learning_rate < 0 or self.weight_decay < 0 or self.seed < 0:
            raise ValidationError("learning_rate, weight_decay and seed must be nonnegative")
        if self.init_scheme == "shiftk_grid" and self.S % 2 == 0:
            raise ValidationError(f"shiftk_grid needs S odd (S = 2T + 1), got S = {self.S}")


@dataclass(frozen=True)
class TrainRun:
    config: TrainConfig
    data_spec: ARDatasetSpec
    loss_curve: list[float]
    final_params: FilterParams
    final_mse: float
    initial_mse: Optional[float] = field(default=None)

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "data_spec": asdict(self.data_spec),
            "loss_curve": list(self.loss_curve),
            "initial_mse": self.initial_mse,
            "final_mse": self.final_mse,
            "final_params": self.final_params.to_json(),
        }


def gen_ar1(spec: ARDatasetSpec) -> ARDataset:
    """u_1 ~ U(0, 1), u_n = rho u_{n-1} + eps_n with eps_n ~ N(0, 1 - rho^2)."""
    rng = np.random.default_rng(spec.seed)
    length = spec.burn_in + spec.N
    drive = np.empty((spec.num_samples, length))
    drive[:, 0] = rng.uniform(0.0, 1.0, spec.num_samples)
    drive[:, 1:] = rng.normal(0.0, math.sqrt(1 - spec.rho**2), (spec.num_samples, length - 1))
    sequences = signal.lfilter([1.0], [1.0, -spec.rho], drive, axis=1)[:, spec.burn_in:]
    return ARDataset(sequences, sequences[:, spec.t_star - 1].copy(), spec.t_star)


def init_scheme(train_config: TrainConfig) -> FilterParams:
    """
    shiftk_grid:  a_u = e^{-alpha/K} e^{i u pi/K}, u in [-T, T]
    random_phase: a_u = e^{-alpha/K} e^{i eps_u pi}, eps_u ~ U(-1, 1), u in [1, S]
    Both take b_u = (-1)^u e^{-alpha} (e^{2 alpha} - e^{-2 alpha}) / (2K).
    """
    K, alpha, S = train_config.K_init, train_config.alpha, train_config.S
    if train_config.init_scheme == "shiftk_grid":
        return shiftk_init(TaskSpec(S, K, 0.0, alpha))
    rng = np.random.default_rng(train_config.seed)
    phases = np.pi * rng.uniform(-1.0, 1.0, S)
    a = np.exp(-alpha / K) * np.exp(1j * phases)
    b = alternating_signs(np.arange(1, S + 1)) * shiftk_weight(alpha, K)
    return FilterParams(a, b, "one_to_S")


def _sequences(data: Union[ARDataset, np.ndarray]) -> np.ndarray:
    sequences = data.sequences if isinstance(data, ARDataset) else np.asarray(data, dtype=float)
    if sequences.ndim == 1:
        sequences = sequences[None, :]
    if sequences.shape[1] == 0:
        raise ValidationError("Sequences must be nonempty")
    return sequences


def _states(p: FilterParams, reversed_seqs: np.ndarray) -> np.ndarray:
    """G[n, s] = sum_k a_s^k u_{N-1-k}; the final state is b * G."""
    return reversed_seqs @ pole_powers(p.a, reversed_seqs.shape[1] - 1).T


def predict(p: FilterParams, data: Union[ARDataset, np.ndarray]) -> np.ndarray:
    """Real read-out of the recurrence at the last step of every sequence."""
    sequences = _sequences(data)
    return (_states(p, sequences[:, ::-1]) @ p.b).real


def empirical_mse(p: FilterParams, data: Union[ARDataset, np.ndarray], t_star: int) -> float:
    sequences = _sequences(data)
    if not 1 <= t_star <= sequences.shape[1]:
        raise ValidationError(f"t_star must lie in [1, {sequences.shape[1]}], got {t_star}")
    residual = predict(p, sequences) - sequences[:, t_star - 1]
    return float(np.mean(residual**2))


def loss_gradient(p: FilterParams, batch: Union[ARDataset, np.ndarray],
                  t_star: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Gradients dL/dRe + i dL/dIm of the batch MSE with respect to a and b.

    Uses dc_k/db_s = a_s^k and dc_k/da_s = k a_s^{k-1} b_s through the final-step read-out.
    """
    sequences = _sequences(batch)
    reversed_seqs = sequences[:, ::-1]
    n = sequences.shape[1]
    powers = pole_powers(p.a, n - 1)
    derivative = np.zeros_like(powers)
    derivative[:, 1:] = np.arange(1, n) * powers[:, :-1]
    states = reversed_seqs @ powers.T
    sensitivities = reversed_seqs @ derivative.T
    residual = (states @ p.b).real - sequences[:, t_star - 1]
    grad_b = np.mean(2 * residual[:, None] * np.conj(states), axis=0)
    grad_a = np.mean(2 * residual[:, None] * np.conj(p.b * sensitivities), axis=0)
    return grad_a, grad_b


def _clamp(a: np.ndarray) -> np.ndarray:
    radius = np.abs(a)
    over = radius >= config.STABILITY_RADIUS
    a = a.copy()
    a[over] *= config.STABILITY_RADIUS / radius[over]
    return a


def _check_divergence(mse: float, epoch: int):
    if not math.isfinite(mse) or mse > config.DIVERGENCE_MSE:
        raise DivergenceError(f"Training diverged with MSE {mse:.3e}", epoch)


def train(train_config: TrainConfig, data_spec: ARDatasetSpec, data: Optional[ARDataset] = None,
          progress: bool = False) -> TrainRun:
    """
    Minibatch gradient descent from init_scheme(train_config) on gen_ar1(data_spec).

    Every step applies theta <- theta - lr * grad - lr * wd * theta, then clamps
    the poles radially to |a| <= 1 - 1e-6. The batch order comes from the config seed.
    """
    data = gen_ar1(data_spec) if data is None else data
    params = init_scheme(train_config)
    lr, wd = train_config.learning_rate, train_config.weight_decay
    rng = np.random.default_rng(train_config.seed)
    initial_mse = empirical_mse(params, data, data_spec.t_star)
    loss_curve = []

    epochs = tqdm(range(train_config.epochs), desc=f"{train_config.init_scheme} K_init={train_config.K_init}",
                  disable=not progress)
    for epoch in epochs:
        order = rng.permutation(len(data))
        a, b = params.a.copy(), params.b.copy()
        for start in range(0, len(data), train_config.batch_size):
            batch = data.sequences[order[start:start + train_config.batch_size]]
            grad_a, grad_b = loss_gradient(FilterParams(a, b, params.convention), batch, data_spec.t_star)
            a = _clamp(a - lr * grad_a - lr * wd * a)
            b = b - lr * grad_b - lr * wd * b
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise DivergenceError("Parameters became non-finite", epoch)
        params = FilterParams(a, b, params.convention)
        mse = empirical_mse(params, data, data_spec.t_star)
        _check_divergence(mse, epoch)
        loss_curve.append(mse)
        epochs.set_postfix(mse=f"{mse:.4g}")
        logger.debug(f"epoch {epoch}: mse={mse:.6g}")

    return TrainRun(train_config, data_spec, loss_curve, params, loss_curve[-1], initial_mse)


def learned_kernel(run: TrainRun, k_max: Optional[int] = None):
    """Impulse response c_k of the trained filter, by default over the sequence length."""
    k_max = run.data_spec.N - 1 if k_max is None else k_max
    return impulse_response(run.final_params, k_max)


@dataclass(frozen=True)
class ComparisonRow:
    rho: float
    seed: int
    grid_mse: float
    random_mse: float


def compare_initializations(base: TrainConfig, data_spec: ARDatasetSpec, rhos, seeds) -> list[ComparisonRow]:
    """
    Paired shiftk_grid / random_phase runs with K_init = K* on every (rho, seed).
    An even S is kept for random_phase and reduced by one for the grid.
    """
    rows = []
    for rho in rhos:
        for seed in seeds:
            spec = ARDatasetSpec(data_spec.N, data_spec.t_star, rho, data_spec.num_samples,
                                 seed, data_spec.burn_in)
            data = gen_ar1(spec)
            grid_S = base.S if base.S % 2 else base.S - 1
            grid = TrainConfig(**{**asdict(base), "init_scheme": "shiftk_grid", "S": grid_S, "seed": seed})
            random = TrainConfig(**{**asdict(base), "init_scheme": "random_phase", "seed": seed})
            rows.append(ComparisonRow(rho, seed, train(grid, spec, data).final_mse,
                                      train(random, spec, data).final_mse))
            logger.info(f"rho={rho} seed={seed}: grid={rows[-1].grid_mse:.4g} random={rows[-1].random_mse:.4g}")
    return rows


def k_init_sweep(base: TrainConfig, data_spec: ARDatasetSpec, k_inits) -> list[tuple[int, float]]:
    """Final MSE of the shiftk_grid scheme for every K_init, on one shared dataset."""
    data = gen_ar1(data_spec)
    results = []
    for K_init in k_inits:
        sweep_config = TrainConfig(**{**asdict(base), "init_scheme": "shiftk_grid", "K_init": int(K_init)})
        run = train(sweep_config, data_spec, data)
        results.append((int(K_init), run.final_mse))
    return results
