"""CSV and JSON writers. Floats carry 17 significant digits and a '.' decimal point."""
import csv
import json
import logging
import math
import os
from typing import Iterable, Optional, Sequence

import config

logger = logging.getLogger(__name__)

LOSS_COLUMNS = ("S", "K", "rho", "alpha", "time_closed", "freq_quadrature", "oracle_truncated",
                "oracle_tail_bound", "lower_bound", "upper_asymptotic")
WINDOW_COLUMNS = ("Omega", "T", "K", "alpha", "re_limit", "im_limit", "re_transfer", "im_transfer",
                  "re_solved_transfer", "im_solved_transfer")


def format_value(value) -> str:
    """Locale-free text for one CSV cell; None becomes an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.{config.CSV_DIGITS}g}"


def _ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write rows in the given order. Returns the number of data rows."""
    _ensure_parent(path)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"Row has {len(row)} cells for {len(columns)} columns")
            writer.writerow([format_value(v) for v in row])
            count += 1
    logger.info(f"Wrote {count} rows to {path}")
    return count


def write_json(path: str, data) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=False, allow_nan=True)
        f.write("\n")
    logger.info(f"Wrote {path}")


def loss_row(S: int, K: int, rho: float, alpha: Optional[float], report) -> tuple:
    return (S, K, rho, alpha, report.time_closed, report.freq_quadrature, report.oracle_truncated,
            report.oracle_tail_bound, report.lower_bound, report.upper_asymptotic)


def window_row(row) -> tuple:
    return (row.Omega, row.T, row.K, row.alpha, row.limit.real, row.limit.imag,
            row.transfer.real, row.transfer.imag, row.solved_transfer.real, row.solved_transfer.imag)


def write_loss_curve(path: str, loss_curve: Sequence[float]) -> int:
    return write_csv(path, ("epoch", "mse"), ((epoch, mse) for epoch, mse in enumerate(loss_curve, start=1)))


def write_kernel(path: str, seq) -> int:
    """Impulse response as (k, re, im) rows."""
    return write_csv(path, ("k", "re", "im"), ((int(k), v.real, v.imag) for k, v in zip(seq.indices, seq.values)))
