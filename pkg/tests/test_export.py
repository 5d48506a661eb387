import csv
import json
import math

import pytest

from core.asymptotics import window_sweep
from core.export import (LOSS_COLUMNS, WINDOW_COLUMNS, format_value, loss_row, window_row, write_csv,
                         write_json, write_kernel, write_loss_curve)
from core.filter import FilterParams, impulse_response
from core.loss import loss_report


@pytest.mark.parametrize("value, text", [(None, ""), (True, "1"), (7, "7"), (float("nan"), "nan"),
                                         (0.1, "0.10000000000000001"), (-2.5, "-2.5"), (1e20, "1e+20")])
def test_format_value(value, text):
    assert format_value(value) == text


def test_formatted_floats_round_trip_exactly():
    value = 1 / 3
    assert float(format_value(value)) == value


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def test_write_csv_creates_parent_directories(tmp_path):
    path = tmp_path / "nested" / "out.csv"
    assert write_csv(str(path), ("x", "y"), [(1, 0.5), (2, None)]) == 2
    assert read_rows(path) == [["x", "y"], ["1", "0.5"], ["2", ""]]
    assert "\r" not in path.read_text()


def test_write_csv_rejects_ragged_rows(tmp_path):
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "out.csv"), ("x", "y"), [(1,)])


def test_loss_rows(tmp_path, single_pole):
    report = loss_report(single_pole, 1, 0.0)
    path = tmp_path / "loss.csv"
    write_csv(str(path), LOSS_COLUMNS, [loss_row(1, 1, 0.0, None, report)])
    header, row = read_rows(path)
    assert tuple(header) == LOSS_COLUMNS
    assert float(row[LOSS_COLUMNS.index("time_closed")]) == pytest.approx(0.8125)
    assert row[LOSS_COLUMNS.index("upper_asymptotic")] == ""


def test_window_rows(tmp_path):
    path = tmp_path / "window.csv"
    write_csv(str(path), WINDOW_COLUMNS, [window_row(row) for row in window_sweep(11, 100, 1.0, [0.0, 5.5])])
    header, centre, edge = read_rows(path)
    assert len(header) == len(WINDOW_COLUMNS)
    assert float(centre[WINDOW_COLUMNS.index("re_limit")]) == pytest.approx(1 + math.exp(-2))
    assert edge[WINDOW_COLUMNS.index("re_limit")] == "nan"


def test_loss_curve_counts_epochs_from_one(tmp_path):
    path = tmp_path / "curve.csv"
    write_loss_curve(str(path), [0.9, 0.8])
    assert read_rows(path) == [["epoch", "mse"], ["1", "0.90000000000000002"], ["2", "0.80000000000000004"]]


def test_kernel(tmp_path):
    path = tmp_path / "kernel.csv"
    assert write_kernel(str(path), impulse_response(FilterParams([0.5], [1.0]), 2)) == 3
    assert [row[:2] for row in read_rows(path)[1:]] == [["0", "1"], ["1", "0.5"], ["2", "0.25"]]


def test_write_json_keeps_key_order(tmp_path):
    path = tmp_path / "out" / "report.json"
    write_json(str(path), {"b": 1, "a": [1.5]})
    assert list(json.loads(path.read_text())) == ["b", "a"]
