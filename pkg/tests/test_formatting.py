import csv
import io
import json
import math

import numpy as np
import pandas as pd

from src.models.reports import CheckResult
from src.models.run_config import OutputFormat
from src.utils.formatting import flatten, reports_to_csv, reports_to_json, to_plain


def test_to_plain_handles_numpy_and_enums():
    plain = to_plain({"a": np.float64(1.5), "b": np.arange(3), "c": OutputFormat.CSV, "d": np.bool_(True)})
    assert plain == {"a": 1.5, "b": [0, 1, 2], "c": "csv", "d": True}
    assert isinstance(plain["d"], bool)


def test_non_finite_reals_become_null():
    assert to_plain([math.nan, math.inf, 2.0]) == [None, None, 2.0]
    text = reports_to_json([{"value": math.nan}])
    assert json.loads(text)["reports"] == [{"value": None}]


def test_frames_become_records():
    assert to_plain(pd.DataFrame({"t": [1.0], "value": [0.5]})) == [{"t": 1.0, "value": 0.5}]


def test_flatten_uses_dotted_keys():
    flat = flatten({"check": "x", "report": {"residuals": {"a": 1e-16}, "quotients": [0.1, 0.2]}})
    assert flat == {
        "check": "x",
        "report.residuals.a": 1e-16,
        "report.quotients": "0.10000000000000001;0.20000000000000001",
    }


def test_csv_round_trips_reals():
    value = 2.0 / math.pi
    text = reports_to_csv([CheckResult(check="constants", s=0.5, n=2, passed=True, value=value)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0])[:4] == ["check", "s", "n", "passed"]
    assert float(rows[0]["value"]) == value
    assert rows[0]["passed"] == "true"
    assert rows[0]["target"] == ""
    assert text.endswith("\n") and "\r" not in text


def test_json_document_is_stable():
    result = CheckResult(check="fourier_identity", s=0.5, n=1, passed=True, value=1.0)
    config = {"command": "fracops", "s_grid": [0.5]}
    assert reports_to_json([result], config) == reports_to_json([result], config)
    document = json.loads(reports_to_json([result], config))
    assert document["version"] == "1.0.0"
    assert document["reports"][0]["asserted"] is True
