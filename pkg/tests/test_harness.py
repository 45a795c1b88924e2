import json
import math

import numpy as np
import pytest

from bisphere.errors import DomainError
from bisphere.harness import (
    ExperimentRecord,
    SweepGrid,
    alpha_p,
    classify_growth,
    emit_report,
    fit_loglog,
    minor_arc_samples,
    read_report_csv,
    run_error_decay_experiment,
    run_holder_sweep,
    run_multiplier_comparison,
    run_scaling_experiment,
    run_sharpness_experiment,
    run_weyl_experiment,
)
from bisphere.spectral import farey_major_arcs

# ------------------------------------------------------------------- fitting


def test_fit_exact_power_drops_smallest():
    x = np.array([1, 2, 4, 8, 16.0])
    y = 3 * x**1.7
    y[0] = 100.0  # transient, dropped
    fit = fit_loglog(x, y)
    assert fit.slope == pytest.approx(1.7, abs=1e-12)
    assert fit.residual < 1e-12 and fit.dropped == (1.0,) and not fit.flagged


def test_fit_flags_bad_residual():
    x = np.array([1, 2, 4, 8, 16, 32.0])
    y = np.array([1, 10, 1, 10, 1, 10.0])
    fit = fit_loglog(x, y)
    assert fit.flagged
    rec = ExperimentRecord("demo", {}, list(zip(x, y)), fit)
    assert any("residual" in f for f in rec.flags)


def test_fit_rejects_bad_data():
    with pytest.raises(DomainError):
        fit_loglog([1, 2, 3], [1, 0, 2])
    with pytest.raises(DomainError):
        fit_loglog([1, 2], [1, 2], drop_smallest=False) and fit_loglog([1], [1])


def test_sweep_grid_validation():
    g = SweepGrid(((2, 2, 1), (4, 4, 1), (math.inf, math.inf, math.inf)))
    assert g.violations() == [(4, 4, 1)]
    assert SweepGrid.in_claimed_region((8, 8, 4), 3)
    assert not SweepGrid.in_claimed_region((2, 2, 1), 3)
    with pytest.raises(DomainError):
        SweepGrid(((0.5, 2, 1),))
    with pytest.raises(DomainError):
        SweepGrid(((2, 2, 1),), family="gaussian")


# --------------------------------------------------------------- experiments


def test_scaling_small():
    rec = run_scaling_experiment(2, (2, 3, 4, 6), 2, 2, 1, kappa=2)
    assert rec.fit.slope == pytest.approx(2.0, abs=0.3)
    assert rec.derived["norm_product_slope"] == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(DomainError):
        run_scaling_experiment(3, (2, 4, 8))


def test_scaling_violating_triple_grows():
    rec = run_scaling_experiment(2, (2, 3, 4, 6), 4, 4, 1, kappa=2)
    assert rec.derived["violates_necessary"] and rec.derived["ratio_slope"] > 0


@pytest.mark.parametrize(
    "d, n, R, p, label",
    [(3, 1, 40, 1.0, "convergent"), (3, 2, 40, 1.0, "log-like"), (5, 2, 30, 1.2, "convergent")],
)
def test_sharpness_labels(d, n, R, p, label):
    rec = run_sharpness_experiment(d, n, R, p)
    assert rec.derived["label"] == label
    S = rec.values
    assert np.all(np.diff(S) >= 0)


def test_sharpness_d4_filter():
    rec = run_sharpness_experiment(4, 2, 30, 1.0)
    assert rec.params["congruence_filter"] is True


def test_classifier_on_synthetic_sequences():
    R = np.arange(1, 61, dtype=float)
    conv = np.cumsum(1.0 / R**2)
    assert classify_growth(R, conv, 1e-9)["label"] == "convergent"
    log = np.cumsum(1.0 / R)
    assert classify_growth(R, log, 1e-3)["label"] == "log-like"
    power = R**1.5
    assert classify_growth(R, power, 1.0)["label"] == "power-like"


def test_holder_sweep_families():
    grid = SweepGrid(((8, 8, 4), (8, 8, 2), (math.inf, math.inf, math.inf)), "box", (2, 4, 8))
    recs = run_holder_sweep(grid, 3)
    inside, violating, trivial = recs
    assert inside.fit.slope <= 0.05
    assert violating.fit.slope > 0
    assert trivial.derived["max_ratio"] <= 1 + 1e-12
    for fam in ("random_sparse", "delta_plus_constant"):
        g = SweepGrid(((math.inf, math.inf, math.inf),), fam, (2, 3, 4))
        (rec,) = run_holder_sweep(g, 2)
        assert rec.derived["max_ratio"] <= 1 + 1e-12


def test_holder_sweep_deterministic():
    g = SweepGrid(((2, 2, 1),), "random_sparse", (2, 4, 6))
    a = run_holder_sweep(g, 2, seed=5)[0]
    b = run_holder_sweep(g, 2, seed=5)[0]
    assert a.measurements == b.measurements


def test_weyl_samples_are_minor():
    for N in (16, 64):
        th = minor_arc_samples(N)
        assert th.size > 100 and not farey_major_arcs(N).contains(th).any()


def test_weyl_small():
    rec = run_weyl_experiment((16, 32, 64, 128, 256), n_quasi=64)
    assert rec.fit.slope < 0.8
    assert all(c > 0.5 for c in rec.derived["major_arc_contrast"])


def test_error_decay_small():
    rec = run_error_decay_experiment(3, (4, 8, 16))
    assert rec.derived["raw_slope"] == pytest.approx(3, abs=1.0)
    assert rec.derived["alpha_p"]["2.0"] == pytest.approx(-rec.derived["delta_fit"])
    with pytest.raises(DomainError):
        run_error_decay_experiment(3, (8, 256))


def test_alpha_p_formula():
    assert alpha_p(2.0, 0.7) == pytest.approx(-0.7)
    assert alpha_p(1.0, 0.7) == pytest.approx(2.0)


def test_multiplier_comparison_small():
    rec = run_multiplier_comparison(3, (20,), None, None)
    t = rec.derived["trend"]["20"]
    assert t["last"] < t["first"]
    assert rec.derived["B_over_M"]["20"]["ratio"] == pytest.approx(1, abs=0.05)


# ------------------------------------------------------------------- reports


def _record():
    return ExperimentRecord("demo", {"d": 3, "p": math.inf}, [(2, 1.5), (4, 3.25), (8, 6.0)], fit_loglog([2, 4, 8], [1.5, 3.25, 6.0]))


def test_report_refuses_empty(tmp_path):
    with pytest.raises(DomainError):
        emit_report([], tmp_path)
    with pytest.raises(DomainError):
        emit_report([ExperimentRecord("empty", {}, [])], tmp_path)


def test_report_byte_stable(tmp_path):
    a = emit_report([_record()], tmp_path / "a")
    b = emit_report([_record()], tmp_path / "b")
    assert [p.name for p in a] == [p.name for p in b]
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_report_csv_round_trip(tmp_path):
    rec = _record()
    paths = emit_report([rec], tmp_path, formats=("csv", "json"))
    rows = read_report_csv(paths[0])
    assert [(r["abscissa"], r["value"]) for r in rows] == [(float(a), float(v)) for a, v in rec.measurements]
    assert rows[0]["params"] == {"d": 3, "p": "inf"}
    doc = json.loads(paths[1].read_text())
    assert doc["schema_version"] == 1 and doc["records"][0]["fit"]["slope"] == pytest.approx(rec.fit.slope)
    assert paths[0].read_text().splitlines()[0] == "experiment,param_json,abscissa,value"


def test_svg_is_self_contained(tmp_path):
    (svg,) = emit_report([_record()], tmp_path, formats=("svg",))
    text = svg.read_text()
    assert text.startswith("<svg") and "href" not in text and "<line" in text


def test_experiment_csv_deterministic(tmp_path):
    recs = [run_sharpness_experiment(3, 1, 20, 1.0)]
    a = emit_report(recs, tmp_path / "a", formats=("csv",))[0].read_bytes()
    recs = [run_sharpness_experiment(3, 1, 20, 1.0)]
    b = emit_report(recs, tmp_path / "b", formats=("csv",))[0].read_bytes()
    assert a == b
