import csv
import json
import math

import pytest

from qdsoliton.cli import main
from qdsoliton.config import DEFAULT_TOLERANCES, parse_config
from qdsoliton.errors import ConfigError
from qdsoliton.runner import COLUMNS, evaluate, format_value, manifest_path, run
from qdsoliton.scattering import resonance_energies_upto
from qdsoliton.units import Barrier


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestParseConfig:
    def test_minimal_soliton_verify(self):
        cfg = parse_config('{"command": "soliton-verify"}')
        assert cfg.context.unit_label == "natural"
        assert cfg.tolerances["grid_points"] == 2048
        assert cfg.particle.energy == 0.5
        assert cfg.output_path == "soliton-verify.csv"

    def test_defaults(self):
        cfg = parse_config('{"command": "scatter", "barrier": {"width": 1, "height": 0.5},'
                           ' "particle": {"energy": 1}}')
        assert cfg.tolerances == DEFAULT_TOLERANCES
        assert cfg.barrier == Barrier(1.0, 0.5)

    def test_steps_one(self):
        doc = {"command": "sweep", "barrier": {"width": 1, "height": 1},
               "sweep": {"parameter": "energy", "start": 1, "stop": 2, "steps": 1}}
        with pytest.raises(ConfigError) as exc:
            parse_config(json.dumps(doc))
        assert any("sweep.steps" in p for p in exc.value.problems)

    def test_unknown_key_suggestion(self):
        with pytest.raises(ConfigError) as exc:
            parse_config('{"command": "scatter", "barier": {"width": 1, "height": 1}}')
        assert any("'barier'" in p and "'barrier'" in p for p in exc.value.problems)

    def test_all_problems_reported(self):
        doc = {"command": "tunnel-time", "barrier": {"width": -1, "height": "x", "wdth": 2},
               "sweep": {"parameter": "mass", "start": 2, "stop": 1, "steps": 5},
               "tolerances": {"resonance": 0}}
        with pytest.raises(ConfigError) as exc:
            parse_config(json.dumps(doc))
        text = " | ".join(exc.value.problems)
        for fragment in ("barrier.width", "barrier.height", "'wdth'", "sweep.parameter",
                         "sweep.start", "tolerances.resonance"):
            assert fragment in text

    def test_parse_error_has_line(self):
        with pytest.raises(ConfigError) as exc:
            parse_config('{\n "command": "scatter",\n oops\n}')
        assert "line 3" in str(exc.value)

    def test_command_mismatch(self):
        with pytest.raises(ConfigError):
            parse_config('{"command": "flux"}', command="scatter")

    def test_natural_units_fixed(self):
        with pytest.raises(ConfigError):
            parse_config('{"command": "soliton-verify", "context": {"units": "natural", "hbar": 2}}')

    def test_si_context(self):
        cfg = parse_config('{"command": "soliton-verify", "context": {"units": "SI"},'
                           ' "particle": {"energy": 1e-19}}')
        assert cfg.context.unit_label == "SI"
        assert cfg.context.hbar == pytest.approx(1.054571817e-34)

    def test_sweep_values_end_exactly(self):
        doc = {"command": "sweep", "barrier": {"width": 1, "height": 1},
               "sweep": {"parameter": "energy", "start": 1.1, "stop": 10, "steps": 101}}
        values = parse_config(json.dumps(doc)).sweep_axis.values()
        assert len(values) == 101 and values[0] == 1.1 and values[-1] == 10.0


class TestRows:
    def test_format_value(self):
        assert format_value(0.1) == "0.1"
        assert format_value(1 / 3) == "0.3333333333333333"
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(float("inf")) == ""
        assert float(format_value(math.pi)) == math.pi

    def test_out_of_domain_rows(self, tmp_path):
        doc = {"command": "tunnel-time", "barrier": {"width": 1.0, "height": 1.0},
               "sweep": {"parameter": "energy", "start": 1.1, "stop": 10.0, "steps": 11},
               "output": str(tmp_path / "tt.csv")}
        manifest = run(parse_config(json.dumps(doc)))
        rows = read_csv(tmp_path / "tt.csv")
        assert list(rows[0]) == COLUMNS["tunnel-time"]
        bad = [r for r in rows if r["status"] == "out_of_domain"]
        assert bad, "expected some out-of-domain points"
        for r in bad:
            assert r["tau_paper"] == "" and r["t3"] == ""
            assert abs(float(r["arccos_arg"])) > 1
            assert r["T_oracle"] != ""
        assert manifest.flagged_rows == len(bad)
        assert manifest.row_count == 11

    def test_compare_free(self, tmp_path):
        doc = {"command": "compare", "barrier": {"width": 2.0, "height": 0.0},
               "particle": {"energy": 0.5}, "output": str(tmp_path / "c.csv")}
        run(parse_config(json.dumps(doc)))
        (row,) = read_csv(tmp_path / "c.csv")
        assert float(row["tau_paper"]) == 0.0
        assert float(row["tau_wigner"]) == pytest.approx(2.0, abs=1e-8)
        assert float(row["T_oracle"]) == pytest.approx(1.0, abs=1e-14)
        assert row["agree"] == "true"

    def test_resonance_sweep_counts(self):
        # a is chosen so the n = 1 root lands exactly on the grid point E = 5.5
        v0, target = 1.0, 5.5
        a = math.pi / (math.sqrt(2 * target) - math.sqrt(2 * (target - v0)))
        doc = {"command": "sweep", "barrier": {"width": a, "height": v0},
               "sweep": {"parameter": "energy", "start": 1.0 + 9.0 / 100, "stop": 10.0, "steps": 100}}
        cfg = parse_config(json.dumps(doc))
        rows = evaluate(cfg)
        assert any(r["energy"] == target for r in rows)
        flagged = [r for r in rows if r["resonant"]]
        roots = resonance_energies_upto(Barrier(a, v0), 10.0)
        roots_in_range = [e for _, e in roots if rows[0]["energy"] <= e <= 10.0]
        # every flagged row sits on a root found by the bisection oracle
        for r in flagged:
            assert any(abs(r["energy"] - e) < 1e-9 for e in roots_in_range)
        assert len(flagged) == 1
        # and every root is bracketed by a change of floor((k1 - k2) a / pi)
        crossings = sum(
            math.floor(r0["phase_over_pi"] + 1e-12) != math.floor(r1["phase_over_pi"] + 1e-12)
            for r0, r1 in zip(rows, rows[1:])
        )
        assert crossings == len(roots_in_range)

    def test_flux_rows(self, tmp_path):
        doc = {"command": "flux", "barrier": {"width": 1.0, "height": 0.375},
               "particle": {"energy": 0.5}, "output": str(tmp_path / "f.json")}
        run(parse_config(json.dumps(doc)))
        (row,) = json.loads((tmp_path / "f.json").read_text())
        assert row["p1"] == 1.0 and row["p2"] == 0.5
        assert row["n"] == 1 and row["residual"] == pytest.approx(0.0, abs=1e-14)
        assert row["flux"] == math.pi
        assert row["flux_conventional"] == pytest.approx(math.pi)

    def test_scatter_singular_row(self):
        cfg = parse_config(json.dumps({"command": "scatter", "barrier": {"width": math.pi / 2, "height": 0.1},
                                       "particle": {"energy": 0.5}}))
        (row,) = evaluate(cfg)
        assert row["status"] == "singular" and row["rho3"] is None

    def test_soliton_verify_row(self):
        (row,) = evaluate(parse_config('{"command": "soliton-verify"}'))
        assert row["status"] == "ok"
        assert 3.5 <= row["continuity_ratio"] <= 4.5
        assert row["q_max_deviation"] < 1e-6


class TestCli:
    def sweep_doc(self, tmp_path):
        return {"command": "compare", "barrier": {"width": 1.5, "height": 1.0},
                "sweep": {"parameter": "energy", "start": 0.2, "stop": 10.0, "steps": 40}}

    def test_deterministic_serial_vs_parallel(self, tmp_path):
        cfg = write(tmp_path, self.sweep_doc(tmp_path))
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["compare", "--config", str(cfg), "--output", str(out1)])
        main(["compare", "--config", str(cfg), "--output", str(out2), "--jobs", "4"])
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_output_and_manifest(self, tmp_path):
        cfg = write(tmp_path, self.sweep_doc(tmp_path))
        out = tmp_path / "r.json"
        code = main(["compare", "--config", str(cfg), "--output", str(out), "--format", "json"])
        rows = json.loads(out.read_text())
        manifest = json.loads(manifest_path(out).read_text())
        assert len(rows) == 40 == manifest["row_count"]
        flagged = sum(r["status"] != "ok" for r in rows)
        assert manifest["flagged_rows"] == flagged
        assert code == (3 if flagged else 0)
        assert manifest["config"]["command"] == "compare"

    def test_exit_codes(self, tmp_path):
        assert main(["soliton-verify", "--output", str(tmp_path / "s.csv")]) == 0
        bad = write(tmp_path, {"command": "scatter", "barier": {}})
        assert main(["scatter", "--config", str(bad)]) == 1
        assert main(["scatter", "--config", str(tmp_path / "missing.json")]) == 2
        good = write(tmp_path, {"command": "soliton-verify"}, "g.json")
        assert main(["soliton-verify", "--config", str(good),
                     "--output", str(tmp_path / "nodir" / "x.csv")]) == 2

    def test_flagged_exit(self, tmp_path):
        doc = {"command": "tunnel-time", "barrier": {"width": 1.0, "height": 1.0},
               "sweep": {"parameter": "energy", "start": 1.1, "stop": 10.0, "steps": 11}}
        cfg = write(tmp_path, doc)
        assert main(["tunnel-time", "--config", str(cfg), "--output", str(tmp_path / "t.csv")]) == 3
        assert (tmp_path / "t.csv").exists()
