import dataclasses
import logging
import os
import sys

import config
from commands.base import Command
from core.commands import EXIT_OK, register_command, run_pool
from core.experiments import compare_initializations, k_init_sweep, learned_kernel, train
from core.export import write_csv, write_json, write_kernel, write_loss_curve
from core.run_config import TrainRunConfig, as_dict, load_run_config

logger = logging.getLogger(__name__)


def apply_overrides(run: TrainRunConfig, seed=None, full: bool = False) -> TrainRunConfig:
    """--seed replaces every seed of the run; --full switches to the full experiment scale."""
    train_config, data = run.train, run.data
    seeds = run.seeds
    if seed is not None:
        train_config = dataclasses.replace(train_config, seed=seed)
        data = dataclasses.replace(data, seed=seed)
        seeds = [seed]
    if full:
        data = dataclasses.replace(data, N=config.FULL_SEQUENCE_LENGTH, t_star=config.FULL_T_STAR,
                                   num_samples=config.FULL_NUM_SAMPLES)
        train_config = dataclasses.replace(train_config, epochs=config.FULL_EPOCHS)
    return dataclasses.replace(run, train=train_config, data=data, seeds=seeds)


@register_command
class TrainCommand(Command):
    name = "train"
    description = "Train the diagonal recurrence on the AR(1) copy task (single run, init comparison or K_init sweep)"

    def add_arguments(self, parser):
        parser.add_argument("--mode", choices=("single", "compare", "k_init_sweep"),
                            help="Override the mode of the run config")

    def run(self, args) -> int:
        run = load_run_config(TrainRunConfig, args.config)
        if getattr(args, "mode", None):
            run = dataclasses.replace(run, mode=args.mode)
        run = apply_overrides(run, args.seed, args.full)
        out_dir = args.out or run.out
        os.makedirs(out_dir, exist_ok=True)
        logger.info(f"Training mode={run.mode} N={run.data.N} t*={run.data.t_star} samples={run.data.num_samples}")

        if run.mode == "single":
            result = train(run.train, run.data, progress=sys.stderr.isatty())
            write_json(os.path.join(out_dir, "run.json"), result.to_json())
            write_loss_curve(os.path.join(out_dir, "loss_curve.csv"), result.loss_curve)
            write_kernel(os.path.join(out_dir, "kernel.csv"), learned_kernel(result))
            logger.info(f"Final MSE {result.final_mse:.6g} (initial {result.initial_mse:.6g})")
        elif run.mode == "compare":
            pairs = [(rho, seed) for rho in run.rhos for seed in run.seeds]
            rows = run_pool(lambda pair: compare_initializations(run.train, run.data, [pair[0]], [pair[1]])[0],
                            pairs, args.threads)
            write_csv(os.path.join(out_dir, "compare.csv"), ("rho", "seed", "grid_mse", "random_mse"),
                      ((r.rho, r.seed, r.grid_mse, r.random_mse) for r in rows))
        else:
            results = run_pool(lambda k: k_init_sweep(run.train, run.data, [k])[0], run.k_inits, args.threads)
            write_csv(os.path.join(out_dir, "k_init.csv"), ("K_init", "final_mse"), results)
            best = min(results, key=lambda item: item[1])
            logger.info(f"Lowest final MSE at K_init={best[0]} (K*={run.data.K_star})")

        write_json(os.path.join(out_dir, "config.json"), as_dict(run))
        return EXIT_OK
