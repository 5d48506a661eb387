import itertools
import json
import logging

from commands.base import Command
from core.commands import EXIT_OK, register_command, run_pool
from core.errors import ConfigError
from core.export import LOSS_COLUMNS, loss_row, write_csv
from core.filter import FilterParams, TaskSpec, shiftk_init
from core.loss import loss_report
from core.run_config import LossRunConfig, load_run_config

logger = logging.getLogger(__name__)


def load_params(path: str) -> FilterParams:
    try:
        with open(path, encoding="utf-8") as f:
            return FilterParams.from_json(json.load(f))
    except FileNotFoundError:
        raise ConfigError(f"Filter parameter file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Filter parameter file {path} is not valid JSON: {e}")


def sweep_points(run: LossRunConfig, fixed: bool = False) -> list[tuple]:
    """(S, K, rho, alpha) in sweep order; S and alpha collapse when the filter is fixed."""
    if fixed:
        return [(None, K, rho, None) for K, rho in itertools.product(run.K, run.rho)]
    return list(itertools.product(run.S, run.K, run.rho, run.alpha))


@register_command
class LossCommand(Command):
    name = "loss"
    description = "Loss of shift-K filters (closed form, quadrature, oracle) with bounds, as CSV"

    def add_arguments(self, parser):
        parser.add_argument("--params", help="FilterParams JSON evaluated instead of the shift-K grid")

    def run(self, args) -> int:
        run = load_run_config(LossRunConfig, args.config)
        params_path = getattr(args, "params", None) or run.params
        fixed = load_params(params_path) if params_path else None

        def evaluate(point):
            S, K, rho, alpha = point
            if fixed is not None:
                report = loss_report(fixed, K, rho, None, run.nodes, run.k_max)
                return loss_row(fixed.S, K, rho, None, report)
            params = shiftk_init(TaskSpec(S, K, rho, alpha))
            return loss_row(S, K, rho, alpha, loss_report(params, K, rho, alpha, run.nodes, run.k_max))

        points = sweep_points(run, fixed is not None)
        logger.info(f"Evaluating {len(points)} loss points on {args.threads} thread(s)")
        rows = run_pool(evaluate, points, args.threads)
        write_csv(args.out or run.out, LOSS_COLUMNS, rows)
        return EXIT_OK
