"""Tests for orbit optimization, subset search and noise curves."""
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import io
import math

import numpy as np
import pytest

from entdisc.dense import overlap, white_noise
from entdisc.errors import ConfigError, GroupError, StateError
from entdisc.graphs import elements_of_weight, group_from_generators
from entdisc.local_unitary import LocalUnitaryParams, conjugate_state
from entdisc.measures import d_multi, f_gap
from entdisc.observables import computational_basis
from entdisc.optimizer import (
    NoiseCurve,
    OptimizerConfig,
    fidelity_measure,
    max_overlap,
    minimize_d,
    minimize_f,
    noise_curve,
    noise_tolerance,
    parse_grid,
    subset_search,
    symmetry_permutations,
)
from entdisc.pauli import parse_labels
from entdisc.states import builtin_generators, cluster4, ghz, w3, what_w3

QUICK = OptimizerConfig(restarts=4, max_iter=1500, seed=1)
THOROUGH = OptimizerConfig(restarts=16, max_iter=4000, seed=1)

D_GHZ4_C4 = (4 - 8 * math.log2(0.75)) / 15
D_GHZ3_W3 = 0.223537
LOG_6_5 = math.log2(6 / 5)


def _stabilizers(name):
    return group_from_generators(builtin_generators(name)).nontrivial()


def test_config_validation():
    """Test that invalid settings raise ConfigError."""
    with pytest.raises(ConfigError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ConfigError):
        OptimizerConfig(tol=0)
    with pytest.raises(ConfigError):
        OptimizerConfig(max_iter=0)
    with pytest.raises(ConfigError):
        OptimizerConfig(workers=0)
    assert OptimizerConfig(restarts=2).restarts == 2


def test_identical_states_give_zero():
    """Test that sigma = rho is recognized at the identity."""
    report = minimize_d(ghz(3), ghz(3), _stabilizers("ghz3"), QUICK)
    assert report.D == pytest.approx(0.0, abs=1e-12)
    report = minimize_f(ghz(3), ghz(3), _stabilizers("ghz3"), QUICK)
    assert report.F == pytest.approx(0.0, abs=1e-12)
    value, _ = max_overlap(w3(), w3(), QUICK)
    assert value == pytest.approx(1.0, abs=1e-12)


def test_result_never_exceeds_identity_value():
    """Test the identity start bound for both measures."""
    obs = parse_labels(["IZIZ", "XXXX", "ZZII"])
    cfg = OptimizerConfig(restarts=1, max_iter=50, seed=0)
    report = minimize_d(ghz(4), cluster4(), obs, cfg)
    assert report.D <= d_multi(ghz(4), cluster4(), obs) + 1e-12
    report = minimize_f(ghz(4), cluster4(), obs, cfg)
    assert report.F <= f_gap(ghz(4), cluster4(), obs) + 1e-12


def test_seeded_determinism():
    """Test that identical settings give identical reports."""
    obs = _stabilizers("ghz3")
    a = minimize_d(ghz(3), w3(), obs, QUICK).to_dict()
    b = minimize_d(ghz(3), w3(), obs, QUICK).to_dict()
    assert a == b


def test_report_params_reproduce_values():
    """Test that the minimizer reproduces the reported D exactly."""
    obs = _stabilizers("ghz3")
    report = minimize_d(ghz(3), w3(), obs, QUICK)
    sigma = conjugate_state(report.params, w3())
    assert d_multi(ghz(3), sigma, obs) == pytest.approx(report.D, abs=1e-12)
    assert report.D == pytest.approx(np.mean([b.d for b in report.breakdown]))


def test_max_overlap_values():
    """Test maximal overlaps of GHZ4/C4 and GHZ3/W3."""
    value, params = max_overlap(ghz(4), cluster4(), THOROUGH)
    assert value == pytest.approx(0.5, abs=1e-5)
    assert overlap(ghz(4), conjugate_state(params, cluster4())) == pytest.approx(value, abs=1e-12)
    value, _ = max_overlap(ghz(3), w3(), THOROUGH)
    assert value == pytest.approx(0.75, abs=1e-5)
    with pytest.raises(StateError):
        max_overlap(white_noise(ghz(3), 0.5), w3(), QUICK)


def test_fidelity_measure():
    """Test the closed form for the full stabilizer set."""
    assert fidelity_measure(4, 0.5) == pytest.approx(8 / 15)
    assert fidelity_measure(3, 0.75) == pytest.approx(2 / 7)
    assert fidelity_measure(2, 1.0) == 0.0


@pytest.mark.slow
def test_f_ghz4_against_cluster():
    """Test F(GHZ4 || C4) = 8/15 and its agreement with the overlap form."""
    report = minimize_f(ghz(4), cluster4(), _stabilizers("ghz4"), THOROUGH)
    assert report.F == pytest.approx(8 / 15, abs=1e-4)
    value, _ = max_overlap(ghz(4), cluster4(), THOROUGH)
    assert report.F == pytest.approx(fidelity_measure(4, value), abs=1e-4)


@pytest.mark.slow
def test_d_ghz4_against_cluster_with_breakdown():
    """Test D(GHZ4 || C4) and the per-operator values at the optimum."""
    report = minimize_d(ghz(4), cluster4(), _stabilizers("ghz4"), THOROUGH)
    assert report.D == pytest.approx(D_GHZ4_C4, abs=5e-3)
    values = sorted(b.d for b in report.breakdown)
    assert values[:3] == pytest.approx([0, 0, 0], abs=5e-3)
    assert values[3:7] == pytest.approx([1, 1, 1, 1], abs=5e-3)
    assert values[7:] == pytest.approx([-math.log2(0.75)] * 8, abs=5e-3)


@pytest.mark.slow
def test_reverse_direction_cluster_against_ghz4():
    """Test D = F = 8/15 for C4 against GHZ4 and 1 for three-point families."""
    obs = _stabilizers("cluster4")
    assert minimize_d(cluster4(), ghz(4), obs, THOROUGH).D == pytest.approx(8 / 15, abs=5e-3)
    assert minimize_f(cluster4(), ghz(4), obs, THOROUGH).F == pytest.approx(8 / 15, abs=5e-3)
    three_point = elements_of_weight(group_from_generators(builtin_generators("cluster4")), 3)
    assert len(three_point) == 8
    for family in (three_point[:1], three_point):
        assert minimize_f(cluster4(), ghz(4), family, QUICK).F == pytest.approx(1.0, abs=1e-6)
        assert minimize_d(cluster4(), ghz(4), family, QUICK).D == pytest.approx(1.0, abs=1e-6)


@pytest.mark.slow
def test_ghz3_against_w3():
    """Test D and F of GHZ3 against the W orbit, and the fixed rotated W value."""
    obs = _stabilizers("ghz3")
    report = minimize_d(ghz(3), w3(), obs, THOROUGH)
    assert report.D == pytest.approx(D_GHZ3_W3, abs=5e-3)
    assert report.D < d_multi(ghz(3), what_w3(), obs)
    assert d_multi(ghz(3), what_w3(), obs) == pytest.approx((6 / 7) * LOG_6_5, abs=1e-6)
    assert minimize_f(ghz(3), w3(), obs, THOROUGH).F == pytest.approx(2 / 7, abs=1e-4)


@pytest.mark.slow
def test_ghz3_singleton_izz():
    """Test F = 1/3 and D = log2(6/5) for the IZZ family."""
    obs = parse_labels(["IZZ"])
    assert minimize_f(ghz(3), w3(), obs, THOROUGH).F == pytest.approx(1 / 3, abs=1e-4)
    assert minimize_d(ghz(3), w3(), obs, THOROUGH).D == pytest.approx(LOG_6_5, abs=5e-3)


def test_w3_against_ghz3_single_qubit_family():
    """Test the orbit-independent W3 versus GHZ3 values."""
    obs = parse_labels(["IIZ", "IZI", "ZII"])
    expected = (2 / 3) * math.log2(4 / 3) - (1 / 3) * math.log2(3 / 2)
    assert minimize_d(w3(), ghz(3), obs, QUICK).D == pytest.approx(expected, abs=5e-3)
    assert minimize_f(w3(), ghz(3), obs, QUICK).F == pytest.approx(1.0, abs=1e-6)


def test_computational_basis_minimization():
    """Test D of the computational basis at and around z-rotated cluster states."""
    angles = np.zeros((4, 3))
    angles[1, 0] = np.pi / 4
    angles[3, 0] = 3 * np.pi / 4
    start = LocalUnitaryParams(4, angles)
    report = minimize_d(ghz(4), cluster4(), [computational_basis(4)], QUICK, start=start)
    assert report.D <= 1.0 + 1e-9
    assert report.F is None


def test_symmetry_permutations():
    """Test the permutations used to merge equivalent families."""
    obs = _stabilizers("ghz4")
    assert len(symmetry_permutations(ghz(4), cluster4(), obs, True)) == 24
    assert len(symmetry_permutations(ghz(4), cluster4(), obs, False)) == 8


def test_subset_search_errors():
    """Test candidate validation."""
    with pytest.raises(GroupError):
        subset_search(ghz(3), w3(), [], 1, "D", QUICK)
    with pytest.raises(GroupError):
        subset_search(ghz(3), w3(), parse_labels(["XXI"]), 1, "D", QUICK)
    with pytest.raises(GroupError):
        subset_search(ghz(3), w3(), parse_labels(["III"]), 1, "D", QUICK)
    with pytest.raises(ConfigError):
        subset_search(ghz(3), w3(), parse_labels(["IZZ"]), 0, "D", QUICK)
    with pytest.raises(ConfigError):
        subset_search(ghz(3), w3(), parse_labels(["IZZ"]), 1, "KL", QUICK)


def test_results_do_not_depend_on_workers():
    """Test that a process pool reproduces the in-process report exactly."""
    obs = _stabilizers("ghz3")
    serial = OptimizerConfig(restarts=4, max_iter=1500, seed=1, workers=1)
    pooled = OptimizerConfig(restarts=4, max_iter=1500, seed=1, workers=2)
    assert minimize_d(ghz(3), w3(), obs, serial).to_dict() == minimize_d(ghz(3), w3(), obs, pooled).to_dict()
    assert minimize_f(ghz(3), w3(), obs, serial).to_dict() == minimize_f(ghz(3), w3(), obs, pooled).to_dict()
    assert max_overlap(ghz(3), w3(), serial)[0] == max_overlap(ghz(3), w3(), pooled)[0]
    ranked = [
        [(r.labels, r.value) for r in subset_search(ghz(3), w3(), obs, 1, "F", cfg)]
        for cfg in (serial, pooled)
    ]
    assert ranked[0] == ranked[1]


def test_subset_search_reference_normalization():
    """Test that F families can be normalized on an explicit reference state."""
    obs = _stabilizers("ghz3")
    own = subset_search(ghz(3), w3(), obs, 1, "F", QUICK)
    referred = subset_search(ghz(3), w3(), obs, 1, "F", QUICK, normalization="reference", reference=ghz(3))
    assert [(r.labels, r.value) for r in own] == [(r.labels, r.value) for r in referred]
    with pytest.raises(StateError):
        subset_search(ghz(3), w3(), obs, 1, "F", QUICK, normalization="reference")


@pytest.mark.slow
def test_subset_search_ghz3_singletons():
    """Test that the two-point operators are the best GHZ3 singletons."""
    results = subset_search(ghz(3), w3(), _stabilizers("ghz3"), 1, "D", THOROUGH)
    assert len(results) == 7
    assert [r.value for r in results] == sorted((r.value for r in results), reverse=True)
    assert results[0].value == pytest.approx(LOG_6_5, abs=5e-3)
    assert {r.labels[0] for r in results[:3]} == {"IZZ", "ZIZ", "ZZI"}


@pytest.mark.slow
def test_subset_search_cluster_singletons_f():
    """Test that every three-point cluster stabilizer reaches F = 1."""
    results = subset_search(cluster4(), ghz(4), _stabilizers("cluster4"), 1, "F", QUICK)
    assert results[0].value == pytest.approx(1.0, abs=1e-6)
    best = {r.labels[0] for r in results if r.value > 1 - 1e-6}
    three_point = {s.label for s in elements_of_weight(group_from_generators(builtin_generators("cluster4")), 3)}
    assert three_point <= best


@pytest.mark.slow
@pytest.mark.parametrize("metric", ["D", "F"])
def test_subset_search_ghz4_against_cluster(metric):
    """Test the eight optimal three-element GHZ4 families at the default restarts."""
    cfg = OptimizerConfig(seed=2, include_permutations=True)
    assert cfg.restarts == 64
    results = subset_search(ghz(4), cluster4(), _stabilizers("ghz4"), 3, metric, cfg)
    assert len(results) == 15 + 105 + 455
    top = [r for r in results if r.value > 2 / 3 - 5e-3]
    assert len(top) == 8
    assert all(r.size == 3 for r in top)
    assert ("IIZZ", "IZIZ", "IZZI") in {r.labels for r in top}
    assert all(r.value == pytest.approx(2 / 3, abs=5e-3) for r in top)
    for r in results:
        if r.size == 1:
            assert r.value == pytest.approx(0.0, abs=5e-3)
        elif r.size == 2:
            assert min(abs(r.value), abs(r.value - 0.5)) < 5e-3


def test_parse_grid():
    """Test the a:b:step grid syntax."""
    assert parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.5:0.5:0.1") == [0.5]
    for bad in ("0:1", "0:1:0", "1:0:0.1", "0:2:1", "a:b:c"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_noise_tolerance_and_csv():
    """Test the tolerance lookup and the CSV layout."""
    curve = NoiseCurve([(0.0, 0.5, 0.7), (0.25, 0.2, 0.3), (0.5, 0.0, 0.1), (1.0, 0.0, 0.0)])
    assert noise_tolerance(curve, "F") == 0.25
    assert noise_tolerance(curve, "D") == 0.5
    assert noise_tolerance(NoiseCurve([(0.0, 0.0, 0.0)])) is None
    out = io.StringIO()
    curve.write_csv(out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "one_minus_p,F,D"
    assert lines[2] == "0.25,0.2,0.3"


@pytest.mark.slow
def test_noise_curve_cluster_against_ghz4():
    """Test the F zero crossing at 8/15 and positivity of the three-point curves."""
    obs = _stabilizers("cluster4")
    curve = noise_curve(cluster4(), ghz(4), obs, [1.0, 0.6, 0.4], THOROUGH)
    rows = {round(row[0], 6): row for row in curve.rows}
    assert rows[0.0][1] == pytest.approx(8 / 15, abs=1e-2)
    assert rows[0.4][1] == pytest.approx(0.6 - 7 / 15, abs=1e-2)
    assert rows[0.6][1] == 0.0
    assert noise_tolerance(curve, "F") == pytest.approx(0.4)
    ds = curve.column("D")
    assert all(a <= b + 5e-3 for a, b in zip(ds[1:], ds[:-1]))

    three_point = elements_of_weight(group_from_generators(builtin_generators("cluster4")), 3)
    curve = noise_curve(cluster4(), ghz(4), three_point, [1.0, 0.01], QUICK)
    f_value, d_value = curve.rows[-1][1], curve.rows[-1][2]
    assert curve.rows[-1][0] == pytest.approx(0.99)
    assert f_value > 0
    assert d_value > 0


def _binary_entropy(x):
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_subset_noise_tolerance_bounds_the_family():
    """Test that a subset's D tolerance bounds the family's, while F can drop."""
    full = _stabilizers("cluster4")
    three_point = elements_of_weight(group_from_generators(builtin_generators("cluster4")), 3)
    grid = [1.0, 0.5, 0.05]
    sub_curve = noise_curve(cluster4(), ghz(4), three_point, grid, QUICK)
    full_curve = noise_curve(cluster4(), ghz(4), full, grid, QUICK)
    for (one_minus_p, _, d_value) in sub_curve.rows:
        p = 1 - one_minus_p
        assert d_value == pytest.approx(1 - _binary_entropy((1 + p) / 2) if p < 1 else 1.0, abs=1e-9)
    assert noise_tolerance(sub_curve, "D") == pytest.approx(0.95)
    assert noise_tolerance(full_curve, "D") >= noise_tolerance(sub_curve, "D")
    assert noise_tolerance(sub_curve, "F") == pytest.approx(0.95)
    assert noise_tolerance(full_curve, "F") == pytest.approx(0.5)


def test_noise_curve_errors():
    """Test invalid grids and inputs."""
    with pytest.raises(ConfigError):
        noise_curve(ghz(3), w3(), _stabilizers("ghz3"), [], QUICK)
    with pytest.raises(ConfigError):
        noise_curve(ghz(3), w3(), _stabilizers("ghz3"), [1.5], QUICK)
    with pytest.raises(StateError):
        noise_curve(ghz(3), w3(), None, [1.0], QUICK)
