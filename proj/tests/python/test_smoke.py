import json
import math

import pytest

import cbpsim


def test_malthusian_closed_form():
    spec = cbpsim.BirthProcessSpec(cbpsim.RateSequence.affine(1.0, 1.5))
    result = cbpsim.solve_malthusian(spec)
    assert result["alpha_star"] == pytest.approx(2.5, abs=1e-8)
    assert result["mu"] == pytest.approx(2.0 / 3.0, abs=1e-8)
    assert result["supercritical"]
    assert result["closed_form_alpha_star"] == pytest.approx(2.5, abs=1e-12)


def test_subcritical_spec_raises():
    spec = cbpsim.BirthProcessSpec(
        cbpsim.RateSequence.affine(1.0, 1.0), cbpsim.AgingFunction.exponential(4.0)
    )
    check = cbpsim.check_supercritical(spec)
    assert not check["supercritical"]
    assert check["limit_mean_progeny"] == pytest.approx(math.exp(0.25) - 1.0)
    with pytest.raises(Exception):
        cbpsim.solve_malthusian(spec)


def test_count_probabilities_normalized():
    spec = cbpsim.BirthProcessSpec(cbpsim.RateSequence.constant(1.0))
    probs = cbpsim.count_probabilities(spec, 1.0, 30)
    assert probs["values"][0] == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert sum(probs["values"]) + probs["tail_mass"] == pytest.approx(1.0, abs=1e-10)


def test_simulation_and_collapse():
    spec = cbpsim.BirthProcessSpec(cbpsim.RateSequence.affine(1.0, 1.0))
    log = cbpsim.simulate_ctbp(spec, seed=11, individuals=600)
    assert len(log) == 600
    assert log.parents[0] == 0
    assert log.birth_times == sorted(log.birth_times)

    again = cbpsim.simulate_ctbp(spec, seed=11, individuals=600)
    assert log.birth_times == again.birth_times

    graph = cbpsim.collapse(log, m=3)
    assert graph["n_vertices"] == 200
    assert graph["n_edges"] == 599
    assert sum(graph["in_degrees"]) == graph["n_edges"]

    csv = log.to_csv()
    assert csv.splitlines()[0] == "id,parent_id,birth_time"
    assert csv.splitlines()[1] == "1,,0"


def test_generators_and_distributions():
    graph = cbpsim.generate_pam(m=2, delta=1.0, n=5000, seed=3)
    assert graph["n_vertices"] == 5000
    assert graph["n_edges"] == 9999

    hist = [0] * (max(graph["in_degrees"]) + 1)
    for d in graph["in_degrees"]:
        hist[d] += 1
    empirical = cbpsim.empirical_distribution(hist)
    analytic = cbpsim.pam_closed_form(2, 1.0, cbpsim.default_truncation_pam(2, 1.0))
    tv = cbpsim.tv_distance(
        empirical["values"], analytic["values"], analytic["tail_mass"]
    )
    assert 0.0 <= tv <= 0.1

    rrg = cbpsim.rrg_closed_form(1, 20)
    assert rrg["values"][3] == pytest.approx(2.0 ** -4)

    identical = cbpsim.tv_distance([0.5, 0.5], [0.5, 0.5])
    assert identical == 0.0


def test_limiting_distribution_matches_closed_form():
    spec = cbpsim.BirthProcessSpec(cbpsim.RateSequence.affine(1.0, 1.0))
    numeric = cbpsim.limiting_distribution(spec, m=2, K=20)
    closed = cbpsim.pam_closed_form(2, 0.0, 20)
    for a, b in zip(numeric["values"], closed["values"]):
        assert a == pytest.approx(b, abs=1e-7)
    assert numeric["provenance"] == "quadrature"


def test_run_experiment_json_round_trip():
    config = {
        "model": {"kind": "pam", "m": 2, "delta": 0.0},
        "n_vertices": 4000,
        "replicas": 2,
        "seed": 99,
        "workers": 1,
        "comparisons": [
            {"check": "tv", "reference": "pam_closed_form", "tolerance": 0.1}
        ],
    }
    report = json.loads(cbpsim.run_experiment(json.dumps(config)))
    assert report["pass"] is True
    assert report["config"]["seed"] == 99
    assert report["tv_distance"] < 0.1
    assert report["alpha_star"] == pytest.approx(2.0)
