import logging

import numpy as np

from commands.base import Command
from core.asymptotics import window_sweep
from core.commands import EXIT_OK, register_command
from core.export import WINDOW_COLUMNS, window_row, write_csv
from core.run_config import WindowRunConfig, load_run_config

logger = logging.getLogger(__name__)


@register_command
class WindowCommand(Command):
    name = "window"
    description = "Transfer function of the shift-K grid against its rectangular-window limit, as CSV"

    def run(self, args) -> int:
        run = load_run_config(WindowRunConfig, args.config)
        if run.omegas is not None:
            omegas = np.asarray(run.omegas, dtype=float)
        else:
            omegas = np.linspace(run.omega_min, run.omega_max, run.points)
        rows = window_sweep(run.S, run.K, run.alpha, omegas)
        undefined = sum(1 for row in rows if np.isnan(row.limit.real))
        if undefined:
            logger.info(f"{undefined} points sit where the window limit is undefined (written as nan)")
        write_csv(args.out or run.out, WINDOW_COLUMNS, (window_row(row) for row in rows))
        return EXIT_OK
