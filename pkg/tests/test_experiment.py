import csv
import io
import json
import math
from dataclasses import replace

import numpy as np
import pytest

from contrastive_moments import cli
from contrastive_moments.experiment import (
    TRIAL_FIELDS,
    SweepConfig,
    TrialRecord,
    compare_mean_cov,
    median_by,
    records_to_csv,
    run_cell,
    run_trial,
    sweep_dimension,
    sweep_epsilon,
    sweep_grid,
    trial_seed,
    verify_lemmas,
)
from contrastive_moments.density1d import DensityModel
from contrastive_moments.sampler import make_instance

SMALL = SweepConfig(N=20_000, d=5, trials=2, epsilon=0.01)


class TestConfig:
    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            SweepConfig(trials=0)

    def test_rejects_family(self):
        with pytest.raises(ValueError):
            SweepConfig(family="cauchy")

    def test_rejects_alpha(self):
        with pytest.raises(ValueError):
            SweepConfig(alpha1=0.1)

    @pytest.mark.parametrize("fam,expected", [("gaussian", (-3.0, 3.0)), ("laplace", (-3.0, 3.0)), ("uniform", (-1.5, 1.5))])
    def test_grid_defaults(self, fam, expected):
        assert SweepConfig(family=fam).grid_range() == expected

    def test_band_set(self):
        assert SweepConfig().band_set()[0] == (-0.5, 0.5)
        assert all(-0.8 <= a < b <= 0.8 for a, b in SweepConfig(family="uniform").band_set())
        assert SweepConfig(bands=((0.0, 1.0),)).band_set() == ((0.0, 1.0),)

    def test_compare_defaults(self):
        assert SweepConfig().compare_axis()[0] == -2.0
        assert SweepConfig(family="uniform").compare_axis()[0] == -0.5


class TestTrial:
    def test_identity_example(self):
        cfg = SweepConfig(affine_mode="identity")
        rec = run_cell(cfg, -0.5, 0.5, 10, 1)
        assert rec.ok
        assert rec.sin_theta_cov <= 0.2

    def test_deterministic(self):
        assert run_cell(SMALL, -1.0, 0.5, 5, 3) == run_cell(SMALL, -1.0, 0.5, 5, 3)

    def test_record_invariants(self):
        rec = run_cell(SMALL, -1.0, 0.5, 5, 3)
        for name in ("sin_theta_mean1", "sin_theta_mean2", "sin_theta_cov", "sin_theta_selected"):
            assert 0.0 <= getattr(rec, name) <= 1.0
        assert rec.selected_kind in ("mean1", "mean2", "cov")
        assert rec.sin_theta_selected == getattr(rec, f"sin_theta_{rec.selected_kind}")
        assert rec.elapsed_ms == 0.0

    def test_timing_flag(self):
        assert run_cell(replace(SMALL, timing=True), -1.0, 0.5, 5, 3).elapsed_ms > 0

    def test_inadmissible_skipped(self):
        rec = run_cell(SweepConfig(epsilon=0.1), 2.0, 3.0, 5, 0)
        assert rec.status == "skipped: epsilon-check"
        assert math.isnan(rec.sin_theta_selected)

    def test_failure_recorded(self):
        inst = make_instance(DensityModel.gaussian(), -0.5, 0.5, 5, 0.01)
        rec = run_trial(inst, 3, SMALL, 0)  # too few rows to whiten
        assert rec.status.startswith("failed: ValueError")

    def test_trial_seed(self):
        s = trial_seed(0, 1, 2)
        assert s == trial_seed(0, 1, 2)
        assert 0 <= s < 2**63
        assert len({trial_seed(0, c, t) for c in range(5) for t in range(5)}) == 25


class TestCsv:
    def test_header_and_precision(self):
        rec = run_cell(SMALL, -1.0, 0.5, 5, 3)
        text = records_to_csv([rec])
        rows = list(csv.reader(io.StringIO(text)))
        assert tuple(rows[0]) == TRIAL_FIELDS
        row = dict(zip(rows[0], rows[1]))
        assert float(row["sin_theta_selected"]) == rec.sin_theta_selected
        assert "\r" not in text

    def test_median_by(self):
        recs = [
            TrialRecord("gaussian", 0, 1, 5, 10, -0.1, -0.2, -0.1, "identity", s, sin_theta_selected=v)
            for s, v in enumerate([0.3, 0.1, 0.2])
        ]
        recs.append(replace(recs[0], status="failed: x", sin_theta_selected=0.9))
        assert median_by(recs, lambda r: r.d) == {5: pytest.approx(0.2)}


class TestSweeps:
    def test_grid(self, tmp_path):
        cfg = replace(SMALL, trials=1, grid_lo=-1.0, grid_hi=1.0, grid_step=1.0, out=str(tmp_path))
        res = sweep_grid(cfg)
        assert {(s["a"], s["b"]) for s in res.summary} == {(-1.0, 0.0), (-1.0, 1.0), (0.0, 1.0)}
        assert (tmp_path / "grid.svg").read_text().startswith("<svg")
        assert (tmp_path / "grid_trials.csv").exists()

    def test_grid_workers_match_serial(self):
        cfg = replace(SMALL, trials=1, grid_lo=-1.0, grid_hi=1.0, grid_step=1.0)
        serial = sweep_grid(cfg).records
        pooled = sweep_grid(replace(cfg, workers=2)).records
        assert records_to_csv(serial) == records_to_csv(pooled)

    def test_dimension(self, tmp_path):
        res = sweep_dimension(replace(SMALL, dims=(3, 6), bands=((-0.5, 0.5),), out=str(tmp_path)))
        assert [s["d"] for s in res.summary] == [3, 6]
        assert len(res.records) == 4

    def test_epsilon(self):
        res = sweep_epsilon(replace(SMALL, trials=1, masses=(0.1, 0.4), centers=(0.0, 0.5)))
        assert [s["mass"] for s in res.summary] == [0.1, 0.4]
        assert res.summary[0]["inv_mass"] == pytest.approx(10)
        assert len(res.records) == 4

    def test_compare(self, tmp_path):
        res = compare_mean_cov(replace(SMALL, trials=1, b_values=(0.5, 2.0), out=str(tmp_path)))
        assert [s["b"] for s in res.summary] == [0.5, 2.0]
        assert "covariance" in (tmp_path / "compare.svg").read_text()

    @pytest.mark.slow
    def test_compare_shape(self):
        # contrastive mean fails near a + b = 0 and wins far from it
        cfg = SweepConfig(trials=3, b_values=(1.9, 2.0, 2.1, -1.0, 0.5))
        rows = {s["b"]: s for s in compare_mean_cov(cfg).summary}
        near = [rows[b] for b in (1.9, 2.0, 2.1)]
        assert np.median([r["median_cov"] for r in near]) < np.median([r["median_best_mean"] for r in near])
        far = [rows[b] for b in (-1.0, 0.5)]
        assert all(r["median_best_mean"] < r["median_cov"] for r in far)

    def test_near_edge_band_is_harder(self):
        cfg = SweepConfig(trials=3, epsilon=0.001)
        center = sweep_grid(replace(cfg, grid_lo=-0.5, grid_hi=0.5, grid_step=1.0)).summary[0]
        edge = [run_cell(cfg, 2.5, 2.9, cfg.d, trial_seed(0, 0, t)) for t in range(3)]
        assert all(r.ok for r in edge)
        assert center["median_sin_theta"] <= np.median([r.sin_theta_selected for r in edge])


class TestVerifyLemmas:
    def test_all_pass(self):
        reports = verify_lemmas()
        assert len(reports) >= 30
        failed = [r.lemma_id for r in reports if not r.verdict]
        assert failed == []


class TestCli:
    def test_read_config(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("# comment\nfamily = laplace\nsamples=1000  # inline\ndims = 3,4\nbands=-1:0.5\n\n")
        assert cli.read_config(path) == {"family": "laplace", "N": 1000, "dims": (3, 4), "bands": ((-1.0, 0.5),)}

    def test_read_config_unknown(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("colour = red\n")
        with pytest.raises(ValueError, match="unknown key"):
            cli.read_config(path)

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("seed = 4\ndim = 7\n")
        args = cli.build_parser().parse_args(["recover", "--config", str(path), "--seed", "9"])
        cfg = cli.config_from_args(args)
        assert (cfg.seed, cfg.d) == (9, 7)

    @pytest.mark.parametrize("fmt,name", [("csv", "dataset.csv"), ("bin", "dataset.cmds")])
    def test_generate_then_recover(self, tmp_path, fmt, name, capsys):
        base = ["--samples", "20000", "--dim", "4", "--seed", "2", "--out", str(tmp_path), "--epsilon", "0.01"]
        assert cli.main(["generate", "--format", fmt, *base]) == 0
        meta = json.loads((tmp_path / "dataset.json").read_text())
        assert cli.main(["recover", "--input", str(tmp_path / name), "--out", str(tmp_path)]) == 0
        out = json.loads((tmp_path / "recovery.json").read_text())
        n = np.array(meta["normal_input_coords"])
        c = np.array(out["normal_input_coords"])
        assert abs(n @ c) > 0.95

    def test_recover_fresh_sample(self, tmp_path, capsys):
        code = cli.main(["recover", "--samples", "20000", "--dim", "4", "--out", str(tmp_path)])
        assert code == 0
        assert "ok:" in capsys.readouterr().out
        assert (tmp_path / "recover.csv").read_text().startswith("family,a,b,")

    def test_verify_lemmas(self, tmp_path, capsys):
        assert cli.main(["verify-lemmas", "--out", str(tmp_path)]) == 0
        data = json.loads((tmp_path / "lemmas.json").read_text())
        assert all(r["verdict"] for r in data)
        assert "FAIL" not in capsys.readouterr().out
