import json
import subprocess
import sys

import numpy as np
import pytest

from epecnash.cli import main
from epecnash.generators import matching_pennies_game, split_interval_game
from epecnash.serialize import (
    dumps,
    energy_from_dict,
    energy_to_dict,
    game_from_dict,
    game_to_dict,
)
from epecnash.algorithms import full_enumeration
from epecnash.generators import GenConfig, gen_energy


def _write_game(path, game):
    path.write_text(dumps(game_to_dict(game)))


class TestSerialization:
    def test_energy_round_trip(self):
        inst = gen_energy(GenConfig(seed=5))
        data = json.loads(dumps(energy_to_dict(inst)))
        again = energy_from_dict(data)
        assert dumps(energy_to_dict(again)) == dumps(energy_to_dict(inst))

    def test_game_round_trip_preserves_solutions(self):
        game = split_interval_game(flipped=True)
        data = json.loads(dumps(game_to_dict(game)))
        again = game_from_dict(data)
        first = full_enumeration(game)
        second = full_enumeration(again)
        assert first.status == second.status == "PNE"
        assert second.profile.mean(1)[0] == pytest.approx(
            first.profile.mean(1)[0], abs=1e-9
        )


class TestCli:
    def test_no_equilibrium_exit_code(self, tmp_path):
        inst = tmp_path / "game.json"
        out = tmp_path / "result.json"
        _write_game(inst, split_interval_game())
        code = main(["solve", "--in", str(inst), "--algorithm", "full", "--out", str(out)])
        assert code == 2
        assert json.loads(out.read_text())["status"] == "NoEquilibrium"

    def test_pure_vs_full_on_matching_pennies(self, tmp_path):
        inst = tmp_path / "game.json"
        _write_game(inst, matching_pennies_game())
        out_pure = tmp_path / "pure.json"
        assert main(["solve", "--in", str(inst), "--algorithm", "pure", "--out", str(out_pure)]) == 2
        out_full = tmp_path / "full.json"
        assert main(["solve", "--in", str(inst), "--algorithm", "full", "--out", str(out_full)]) == 0
        data = json.loads(out_full.read_text())
        assert data["status"] == "MNE"
        for leader in data["leaders"]:
            probs = sorted(e["probability"] for e in leader["support"])
            assert probs == pytest.approx([0.5, 0.5], abs=1e-6)

    def test_round_trip_generate_solve_validate_report(self, tmp_path):
        inst = tmp_path / "inst.json"
        res = tmp_path / "res.json"
        rep = tmp_path / "rep.json"
        csvf = tmp_path / "rep.csv"
        assert main(["generate", "--seed", "11", "--countries", "2",
                     "--followers", "2", "--out", str(inst)]) == 0
        assert main(["solve", "--in", str(inst), "--algorithm", "inner",
                     "--strategy", "rseq", "--k", "1", "--out", str(res)]) == 0
        assert main(["validate", "--in", str(inst), "--result", str(res)]) == 0
        assert main(["report", "--in", str(inst), "--result", str(res),
                     "--out", str(rep), "--csv", str(csvf)]) == 0
        data = json.loads(rep.read_text())
        assert data["total_emission"] > 0
        assert csvf.read_text().startswith("country,")

    def test_twenty_seeded_round_trips(self, tmp_path):
        # generate -> solve -> validate for 20 small seeded instances
        for seed in range(200, 220):
            inst = tmp_path / f"i{seed}.json"
            res = tmp_path / f"r{seed}.json"
            assert main(["generate", "--seed", str(seed), "--countries", "2",
                         "--followers", "2", "--followers-min", "1",
                         "--out", str(inst)]) == 0
            code = main(["solve", "--in", str(inst), "--algorithm", "full",
                         "--timelimit", "60", "--out", str(res)])
            assert code in (0, 2), seed
            if code == 0:
                assert main(["validate", "--in", str(inst), "--result", str(res)]) == 0, seed

    def test_tampered_probabilities_fail_validation(self, tmp_path):
        inst = tmp_path / "game.json"
        res = tmp_path / "res.json"
        _write_game(inst, matching_pennies_game())
        assert main(["solve", "--in", str(inst), "--algorithm", "full", "--out", str(res)]) == 0
        data = json.loads(res.read_text())
        data["leaders"][0]["support"][0]["probability"] = 0.6
        res.write_text(json.dumps(data))
        assert main(["validate", "--in", str(inst), "--result", str(res)]) == 4

    def test_solve_deterministic_bytes(self, tmp_path):
        inst = tmp_path / "inst.json"
        assert main(["generate", "--seed", "21", "--countries", "2",
                     "--followers", "2", "--out", str(inst)]) == 0
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert main(["solve", "--in", str(inst), "--algorithm", "full",
                         "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_bad_input_exit_code(self, tmp_path):
        missing = tmp_path / "missing.json"
        out = tmp_path / "out.json"
        assert main(["solve", "--in", str(missing), "--out", str(out)]) == 4
        junk = tmp_path / "junk.json"
        junk.write_text('{"kind": "nonsense"}')
        assert main(["solve", "--in", str(junk), "--out", str(out)]) == 4

    def test_console_entry_point(self, tmp_path):
        inst = tmp_path / "inst.json"
        proc = subprocess.run(
            [sys.executable, "-m", "epecnash.cli", "generate", "--seed", "1",
             "--countries", "2", "--followers", "1", "--out", str(inst)],
            capture_output=True,
        )
        assert proc.returncode == 0
        assert json.loads(inst.read_text())["kind"] == "energy"

    def test_timelimit_exit_code(self, tmp_path):
        inst = tmp_path / "inst.json"
        out = tmp_path / "out.json"
        assert main(["generate", "--seed", "31", "--countries", "2",
                     "--followers", "3", "--out", str(inst)]) == 0
        code = main(["solve", "--in", str(inst), "--timelimit", "1e-5",
                     "--out", str(out)])
        assert code == 3
        assert json.loads(out.read_text())["status"] == "TimeLimit"
