import json
import math

import pytest

import beliefsim as bs


def test_worked_scoring_example():
    w = [0.2, 0.7, 0.5]
    assert bs.pe_score(w, [0.6, 1.0, 0.8]) == pytest.approx(1.22, abs=1e-12)
    assert bs.pe_score(w, [1.2, 0.3, 0.4]) == pytest.approx(0.65, abs=1e-12)
    movies = {
        "Movie_A": [0.6, 1.0, 0.8],
        "Movie_B": [1.2, 0.3, 0.4],
        "Movie_C": [0.5, 0.8, 0.9],
    }
    assert bs.mr_recommend(w, movies) == "Movie_A"
    assert bs.pe_compare(w, movies["Movie_A"], movies["Movie_B"]) == "Yes"


def test_feedback_and_counting():
    assert bs.gn_feedback([3, 2, 1], [1, 2, 3]) == (1, 2)
    assert bs.gn_state_count(3, 5) == 60
    assert bs.gn_state_count(4, 10) == 5040
    assert bs.cd_eval("OR(AND(x0,x1),x2)", 3, [0, 0, 1]) == 1


def test_belief_filtering_matches_hypothesis_counting():
    instance = json.loads(bs.make_instance("gn", seed=7, gn_digits=3, gn_symbols=4))
    task = bs.task(instance)
    belief = task.uniform_belief()
    members = task.full_hypothesis_set()
    action = 5
    obs = task.evaluate(task.true_state, action)
    belief = task.bayes_update(belief, action, obs)
    members = task.filter_consistent(members, action, obs)
    # uniform over the surviving set, zero elsewhere
    for state, p in enumerate(belief):
        expect = 1.0 / len(members) if state in set(members) else 0.0
        assert p == pytest.approx(expect, abs=1e-12)
    assert task.potential(belief) == pytest.approx(math.log(len(members)), abs=1e-9)
    assert task.informativeness(belief, action) >= 0.0


def test_advantage_surface():
    deltas = bs.td_errors([0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0], gamma=1.0)
    assert deltas == [0.0, 0.0, 1.0]
    assert bs.gae(deltas, 1.0, 1.0, 0) == pytest.approx(1.0)
    assert bs.truncated_gae([1.0, -1.0, -1.0, -1.0], 1.0, 1.0, 0, 1) == pytest.approx(1.0)
    pre, tail = bs.geometric_sums(0, 2, 13)
    assert (pre, tail) == (2.0, 10.0)
    assert bs.inversion_threshold(0, 2, 13) == pytest.approx(0.2, abs=1e-12)


def test_trap_constants_and_rules():
    assert bs.compute_bbar(0.5, 1.0) == pytest.approx(5.386294361119891, abs=1e-12)
    assert bs.hitting_time_bound(1.0, 10.0, 1.0, 0.0) == 5
    assert bs.detect_btr_entry([2.0, 2.0, 2.0, 2.0, 2.0]) == 3
    assert bs.detect_btr_entry([5.0, 4.0, 3.0, 2.0, 1.0]) is None
    assert bs.t3_check([5.0, 0.0, 0.0, 0.0], k=3, delta_min=1.0, t=4)
    assert bs.cd_stall_rule([100, 40, 40, 40, 40], k=3)
    assert not bs.pe_sim_drop_rule([-0.1, 0.0], k=2)
    assert bs.streak_unknown_rule(["Unknown"] * 5, k=5)


def test_run_experiment(tmp_path):
    config = {
        "environment": {"task": "gn", "gn_digits": 3, "gn_symbols": 5},
        "agent": {"policy": {"kind": "infogain_softmax", "temperature": 0.3}},
        "horizon": 10,
        "rollouts": 20,
        "seed": 11,
        "output_dir": str(tmp_path / "out"),
    }
    summary = bs.run(config)
    assert summary["rollouts"] == 20
    assert summary["success_rate"] == 1.0  # exact-Bayes infogain agent solves GN(3,5)
    for name in ("trajectories.jsonl", "advantage.csv", "constants.json", "summary.csv"):
        assert (tmp_path / "out" / name).exists()
    record = json.loads((tmp_path / "out" / "trajectories.jsonl").read_text().splitlines()[0])
    assert record["success"] is True
    assert len(record["turns"]) <= 10


def test_verify_suite_roundtrip():
    assert "formula-golden" in bs.verify_suite_names()
    ok, name, details = bs.run_verify_suite("formula-golden")
    assert ok and name == "formula-golden"
