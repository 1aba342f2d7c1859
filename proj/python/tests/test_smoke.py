import json
import math

import numpy as np
import pytest

import slowent

FIB = [[[2, 1], [1, 1]]]
BLOCKS = [
    [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 1], [0, 0, 2, 1]],
]
LOG_GOLDEN2 = 2.0 * math.log((1.0 + math.sqrt(5.0)) / 2.0)


def test_fibonacci_spectrum():
    spec = sorted(slowent.spectrum(FIB), key=lambda f: f["coeffs"][0])
    assert [f["multiplicity"] for f in spec] == [1, 1]
    assert spec[0]["coeffs"][0] == pytest.approx(-LOG_GOLDEN2, abs=1e-12)
    assert spec[1]["coeffs"][0] == pytest.approx(LOG_GOLDEN2, abs=1e-12)


def test_slow_entropy_fibonacci():
    rep = slowent.slow_entropy(FIB)
    assert rep["total"] == pytest.approx(2 * LOG_GOLDEN2, abs=1e-12)
    assert rep["half_total"] == pytest.approx(LOG_GOLDEN2, abs=1e-12)


def test_slow_entropy_weighted_box_scales():
    base = slowent.slow_entropy(BLOCKS, norm="linf")["total"]
    wide = slowent.slow_entropy(BLOCKS, norm="weighted_box", weights=np.array([2.0, 2.0]))
    assert wide["total"] == pytest.approx(2.0 * base, rel=1e-12)


def test_chamber_count():
    assert slowent.chamber_count(BLOCKS) == 4


def test_errors_carry_names():
    with pytest.raises(slowent.SlowEntropyError) as info:
        slowent.spectrum([[[2, 0], [0, 1]]])
    assert info.value.name == "NonUnimodular"
    assert info.value.numerical is False
    with pytest.raises(slowent.SlowEntropyError, match="NonCommuting"):
        slowent.spectrum([[[2, 1], [1, 1]], [[1, 1], [0, 1]]])


def test_build_report_entropy():
    cfg = {"action": {"dim": 2, "rank": 1, "generators": FIB}, "norm": {"kind": "l2"}}
    rep = slowent.build_report("entropy", cfg)
    assert rep["command"] == "entropy"
    assert rep["entropy"]["total"] == pytest.approx(2 * LOG_GOLDEN2, abs=1e-12)


def test_run_writes_artifacts(tmp_path):
    cfg = {"action": {"dim": 2, "rank": 1, "generators": FIB}, "norm": {"kind": "l2"}}
    path = tmp_path / "fib.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    status, _, err = slowent.run("entropy", str(path), out=str(out))
    assert status == 0, err
    assert (out / "report.json").exists()
    assert (out / "entropy.csv").exists()


def test_run_validation_status(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"action": {"dim": 2, "rank": 1, "generators": FIB}, "bogus": 1}))
    status, _, err = slowent.run("entropy", str(path))
    assert status == 1
    assert err.startswith("ConfigParse")
