import math

import pytest

import sparsegof


def test_version_and_names():
    assert sparsegof.__version__ == "0.1.0"
    assert list(sparsegof.STAT_NAMES) == ["Q", "Qab", "G", "Gab", "RC23"]


def test_core_statistics():
    q = sparsegof.pearson_q([0.25] * 4, [0.3, 0.2, 0.3, 0.2], 10)
    assert math.isclose(q, 0.4, rel_tol=0, abs_tol=1e-12)
    g = sparsegof.kullback_g([0.25] * 4, [0.3, 0.2, 0.3, 0.2], 10)
    assert math.isclose(g, 0.40271027101377754, rel_tol=0, abs_tol=1e-12)
    rc = sparsegof.power_divergence(2.0 / 3.0, [0.25] * 4, [0.3, 0.2, 0.3, 0.2], 10)
    assert math.isclose(rc, 0.4005988415899539, rel_tol=0, abs_tol=1e-12)


def test_chi_square_quantile():
    assert math.isclose(
        sparsegof.chi_square_quantile(0.95, 99), 123.2252214534, abs_tol=1e-6
    )
    assert math.isclose(
        sparsegof.chi_square_cdf(sparsegof.chi_square_quantile(0.9, 7), 7),
        0.9,
        abs_tol=1e-9,
    )


def test_errors_map_to_value_error():
    assert issubclass(sparsegof.Error, ValueError)
    with pytest.raises(ValueError):
        sparsegof.pearson_q([0.25] * 4, [0.3, 0.2, 0.3, 0.2], 0)
    with pytest.raises(ValueError):
        sparsegof.chi_square_quantile(1.5, 10)


def test_choose_ab_and_estimator():
    fallback = sparsegof.choose_ab([0, 0, 3, 1])
    assert fallback["fallback"] is True
    assert fallback["a"] == 0.0 and fallback["b"] == 1.0

    active = sparsegof.choose_ab([0, 1, 2, 1, 2, 1, 2, 1])
    assert active["fallback"] is False
    assert math.isclose(active["b"], 0.52940912924769623, abs_tol=1e-14)
    assert math.isclose(active["a"], 0.001596034050497916, abs_tol=1e-16)

    est = sparsegof.corrected_estimator([0, 1, 2, 1, 2, 1, 2, 1])
    assert math.isclose(sum(est), 1.0, abs_tol=1e-12)
    assert all(0.0 < p < 1.0 for p in est)
    assert sparsegof.cond2_check(est, [0, 1, 2, 1, 2, 1, 2, 1])


def test_simple_null_report():
    report = sparsegof.run_test([25, 25, 25, 25], [0.25] * 4, alpha=0.05)
    assert report["statistics"]["Q"] == 0.0
    assert report["combined_reject"] is False
    assert "correction inactive: no zero cells" in report["warnings"]


def test_independence_on_bundled_table():
    table = sparsegof.builtin_table("rivers")
    assert (table["rows"], table["cols"]) == (3, 6)
    assert sum(table["cells"]) == 21
    assert len(table["row_labels"]) == 3 and len(table["col_labels"]) == 6

    rows = [
        table["cells"][i * table["cols"] : (i + 1) * table["cols"]]
        for i in range(table["rows"])
    ]
    report = sparsegof.run_test_independence(rows, alpha=0.05)
    assert report["df"] == 10
    assert math.isclose(report["statistics"]["Qab"], 20.676367275425154, abs_tol=1e-9)
    assert math.isclose(report["statistics"]["Gab"], 26.055926731409325, abs_tol=1e-9)
    assert report["combined_reject"] is True


def test_simulation_determinism():
    f2 = sparsegof.builtin_distribution("f2")
    assert math.isclose(f2[50], 0.0198, abs_tol=1e-15)
    g = sparsegof.perturb_distribution(f2)
    assert math.isclose(g[0], f2[0] + 1.0 / 300.0, abs_tol=1e-15)

    spec = dict(
        sampling=[0.05, 0.15, 0.3, 0.5],
        null_p=[0.05, 0.15, 0.3, 0.5],
        n=40,
        replicates=200,
        alphas=[0.05],
        seed=3,
    )
    first = sparsegof.run_simulation(**spec)
    second = sparsegof.run_simulation(**spec)
    assert first == second
    assert first["rng"] == "splitmix64+mt19937_64"
    assert sum(b["count"] for b in first["per_c"].values()) == 200


def test_zero_count_decay():
    points = sparsegof.zero_count_decay([0.5, 0.5], [1, 4], 200, 7)
    assert points[0] == (1, 1.0)
    assert 0.0 <= points[1][1] <= 1.0
