import json

import numpy as np
import pytest

from multigoal import GridMap, Scenario, State, save_scenario
from multigoal.cli import EXIT_OK, EXIT_PLANNER_FAILURE, EXIT_USAGE, main


@pytest.fixture
def scenario_file(tmp_path):
    grid = GridMap(np.zeros((32, 32), dtype=bool))
    sc = Scenario(
        map=grid,
        origin=State(3.5, 3.5),
        goals=(State(27.5, 5.5), State(15.5, 27.5)),
        name="cli",
    )
    path = tmp_path / "scenario.json"
    save_scenario(sc, path)
    return path


@pytest.fixture
def sealed_scenario_file(tmp_path):
    occ = np.zeros((16, 16), dtype=bool)
    occ[4, 10:16] = True
    occ[8, 10:16] = True
    occ[4:9, 10] = True
    sc = Scenario(
        map=GridMap(occ), origin=State(1.5, 1.5), goals=(State(13.5, 6.5),), name="sealed"
    )
    path = tmp_path / "sealed.json"
    save_scenario(sc, path)
    return path


def plan_args(scenario_file, out, **extra):
    args = [
        "plan",
        "--scenario",
        str(scenario_file),
        "--out",
        str(out),
        "--seed",
        "3",
        "--step",
        "4",
        "--goal-radius",
        "4",
    ]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


class TestPlan:
    def test_success_exit_zero(self, scenario_file, tmp_path):
        out = tmp_path / "result.json"
        code = main(plan_args(scenario_file, out, provider="oracle", region_radius=4))
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["success"] is True
        assert doc["order"][0] == 0 and doc["order"][-1] == 0
        assert "wall_time" not in doc

    def test_planner_failure_exit_one(self, sealed_scenario_file, tmp_path):
        out = tmp_path / "result.json"
        code = main(
            plan_args(sealed_scenario_file, out, provider="euclidean", budget=150)
            + ["--goal-radius", "1", "--step", "2"]
        )
        assert code == EXIT_PLANNER_FAILURE
        assert json.loads(out.read_text())["success"] is False

    def test_byte_identical_result_under_same_seed(self, scenario_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(plan_args(scenario_file, a, provider="oracle", region_radius=4)) == EXIT_OK
        assert main(plan_args(scenario_file, b, provider="oracle", region_radius=4)) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_flag_exit_two(self, scenario_file, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["plan", "--scenario", str(scenario_file), "--nope"])
        assert exc.value.code == EXIT_USAGE

    def test_missing_scenario_is_runtime_failure(self, tmp_path):
        code = main(plan_args(tmp_path / "missing.json", tmp_path / "r.json"))
        assert code == EXIT_PLANNER_FAILURE


class TestBench:
    def test_two_planner_spec_produces_rows(self, scenario_file, tmp_path):
        spec = {
            "scenarios": [str(scenario_file)],
            "planners": [
                {"name": "guided", "provider": "oracle", "region_radius": 4},
                {"name": "euclid", "provider": "euclidean"},
            ],
            "trials": 2,
            "budget": 2000,
            "seed": 1,
            "step": 4.0,
            "goal_radius": 4.0,
            "include_reference": True,
            "reference_budget": 1500,
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        out_dir = tmp_path / "out"
        assert main(["bench", "--spec", str(spec_path), "--out", str(out_dir)]) == EXIT_OK
        lines = (out_dir / "results.csv").read_text().splitlines()
        assert len(lines) == 1 + 2 + 1  # header + two planners + reference
        assert (out_dir / "timings.csv").exists()
        assert (out_dir / "raw.jsonl").exists()

    def test_bench_results_byte_identical(self, scenario_file, tmp_path):
        spec = {
            "scenarios": [str(scenario_file)],
            "planners": [{"name": "euclid", "provider": "euclidean"}],
            "trials": 2,
            "budget": 1500,
            "seed": 4,
            "step": 4.0,
            "goal_radius": 4.0,
            "include_reference": False,
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        assert main(["bench", "--spec", str(spec_path), "--out", str(tmp_path / "o1")]) == EXIT_OK
        assert main(["bench", "--spec", str(spec_path), "--out", str(tmp_path / "o2")]) == EXIT_OK
        assert (tmp_path / "o1/results.csv").read_bytes() == (tmp_path / "o2/results.csv").read_bytes()


class TestRenderAndGraphDump:
    def test_render_after_plan(self, scenario_file, tmp_path):
        result = tmp_path / "r.json"
        assert main(plan_args(scenario_file, result, provider="oracle", region_radius=4)) == EXIT_OK
        svg = tmp_path / "r.svg"
        code = main(
            ["render", "--scenario", str(scenario_file), "--result", str(result), "--out", str(svg)]
        )
        assert code == EXIT_OK
        text = svg.read_text()
        assert text.startswith("<svg") and "<polyline" in text
        assert text.count("<image") == 3  # map + region + guideline overlays

    def test_render_euclidean_has_no_overlays(self, scenario_file, tmp_path):
        result = tmp_path / "r.json"
        assert main(plan_args(scenario_file, result, provider="euclidean")) == EXIT_OK
        svg = tmp_path / "r.svg"
        assert (
            main(
                [
                    "render",
                    "--scenario",
                    str(scenario_file),
                    "--result",
                    str(result),
                    "--out",
                    str(svg),
                ]
            )
            == EXIT_OK
        )
        assert svg.read_text().count("<image") == 1

    def test_graph_dump(self, scenario_file, tmp_path):
        out = tmp_path / "g.json"
        code = main(
            [
                "graph-dump",
                "--scenario",
                str(scenario_file),
                "--provider",
                "euclidean",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert len(doc["vertices"]) == 3
        assert len(doc["weights"]) == 3
        assert doc["weights"][0][0] == 0.0


class TestGenDataset:
    def test_generates_layout(self, tmp_path):
        cfg = {
            "map_size": 32,
            "rect_count": [1, 3],
            "rect_size": [4, 8],
            "pair_count": 2,
            "region_radius": 3,
            "guide_radius": 1,
            "seed": 5,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out = tmp_path / "data"
        code = main(
            ["gen-dataset", "--config", str(cfg_path), "--out", str(out), "--maps", "2"]
        )
        assert code == EXIT_OK
        assert len(list((out / "maps").glob("*.png"))) == 4
        labels = json.loads((out / "labels.json").read_text())
        assert len(labels["samples"]) == 4

    def test_byte_identical_labels(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "map_size": 32,
                    "rect_count": [1, 2],
                    "rect_size": [4, 8],
                    "pair_count": 1,
                    "region_radius": 3,
                    "guide_radius": 1,
                    "seed": 8,
                }
            )
        )
        for name in ("d1", "d2"):
            assert (
                main(
                    [
                        "gen-dataset",
                        "--config",
                        str(cfg_path),
                        "--out",
                        str(tmp_path / name),
                        "--maps",
                        "2",
                    ]
                )
                == EXIT_OK
            )
        assert (tmp_path / "d1/labels.json").read_bytes() == (tmp_path / "d2/labels.json").read_bytes()


class TestVersion:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "multigoal" in capsys.readouterr().out
