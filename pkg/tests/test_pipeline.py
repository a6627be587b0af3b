"""Configuration handling, staged runs, caching, CLI exit codes."""

from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from cowordmap.cli import main
from cowordmap.errors import ConfigError
from cowordmap.pipeline import ARTIFACTS, PipelineConfig, run, run_stage


def micro_config(micro_dir, out, **extra) -> PipelineConfig:
    values = {
        "input": str(micro_dir),
        "out": str(out),
        "top": 20,
        "factors": 5,
    }
    values.update(extra)
    return PipelineConfig.build(values)


def artifact_bytes(out):
    return {name: (out / name).read_bytes() for name in ARTIFACTS}


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig.build({"input": "x"})
        assert config.criterion == "obsexp"
        assert config.cos_threshold == 0.1
        assert config.cooc_threshold == 1.0
        assert config.suppression == 0.1
        assert config.top == 30
        assert config.factors == "kaiser"
        assert config.layout == "fr"
        assert config.seed == 42

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown configuration key"):
            PipelineConfig.build({"input": "x", "colour": "red"})

    def test_file_parsing_with_comments(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# a comment\ninput = corpus/  # trailing comment\ntop = 10\n"
            "rotate = false\nfactors = kaiser\n",
            encoding="utf-8",
        )
        config = PipelineConfig.from_file(path)
        assert config.input == "corpus/"
        assert config.top == 10
        assert config.rotate is False

    def test_file_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("nonsense = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match=":1"):
            PipelineConfig.from_file(path)

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("input = a\nseed = 1\n", encoding="utf-8")
        config = PipelineConfig.from_file(path, {"seed": 99})
        assert config.seed == 99

    def test_min_score_replaces_top(self):
        config = PipelineConfig.build({"input": "x", "min_score": 2.0})
        assert config.top is None
        assert config.min_score == 2.0

    def test_top_and_min_score_conflict(self):
        with pytest.raises(ConfigError, match="not both"):
            PipelineConfig.build({"input": "x", "top": 5, "min_score": 2.0})

    def test_invalid_choice_lists_valid_values(self):
        with pytest.raises(ConfigError, match="freq, tfidf, chi2, obsexp"):
            PipelineConfig.build({"input": "x", "criterion": "idf"})

    def test_missing_input(self):
        with pytest.raises(ConfigError, match="input"):
            PipelineConfig.build({})

    def test_bad_boolean_in_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("input = x\nrotate = perhaps\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="boolean"):
            PipelineConfig.from_file(path)


class TestRun:
    def test_produces_all_artifacts(self, micro_dir, tmp_path):
        result = run(micro_config(micro_dir, tmp_path / "out"))
        for name in ARTIFACTS:
            assert (tmp_path / "out" / name).exists(), name
        assert set(result.stages.values()) == {"computed"}
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["corpus"]["documents"] == 8
        assert report["selection"]["selected"] == 20
        assert report["factors"]["retained"] == 5

    def test_byte_identical_across_fresh_runs(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        run(micro_config(micro_dir, out))
        first = artifact_bytes(out)
        shutil.rmtree(out)
        run(micro_config(micro_dir, out))
        assert artifact_bytes(out) == first

    def test_cached_rerun_identical_and_reported(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        run(micro_config(micro_dir, out))
        first = artifact_bytes(out)
        result = run(micro_config(micro_dir, out))
        assert set(result.stages.values()) == {"cached"}
        assert artifact_bytes(out) == first

    def test_seed_change_recomputes_only_map_and_render(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        run(micro_config(micro_dir, out))
        before = artifact_bytes(out)
        result = run(micro_config(micro_dir, out, seed=7))
        assert result.stages == {
            "ingest": "cached", "terms": "cached", "cooc": "cached",
            "factors": "cached", "map": "computed", "render": "computed",
        }
        after = artifact_bytes(out)
        unchanged = [
            "matrix.csv", "terms.csv", "expected.csv", "loadings.csv",
            "coocc.dat", "factors.net",
        ]
        for name in unchanged:
            assert after[name] == before[name], name
        assert after["map.net"] != before["map.net"]

    def test_input_change_invalidates_ingest(self, micro_dir, tmp_path):
        corpus = tmp_path / "corpus"
        shutil.copytree(micro_dir, corpus)
        out = tmp_path / "out"
        run(micro_config(corpus, out))
        (corpus / "d1.txt").write_text("impact factor impact factor", encoding="utf-8")
        result = run(micro_config(corpus, out))
        assert result.stages["ingest"] == "computed"

    def test_threads_do_not_change_artifacts(self, micro_dir, tmp_path):
        out1, out8 = tmp_path / "t1", tmp_path / "t8"
        run(micro_config(micro_dir, out1, threads=1))
        run(micro_config(micro_dir, out8, threads=8))
        a, b = artifact_bytes(out1), artifact_bytes(out8)
        for name in ARTIFACTS:
            if name == "report.json":
                continue  # echoes the differing out/threads settings
            assert a[name] == b[name], name

    def test_ratio_cells_configuration(self, micro_dir, tmp_path):
        config = micro_config(
            micro_dir, tmp_path / "out",
            criterion="obsexp", cells="obsexp", factors=5,
        )
        result = run(config)
        assert result.report["factors"]["retained"] == 5

    def test_q_mode(self, micro_dir, tmp_path):
        config = micro_config(micro_dir, tmp_path / "out", mode="Q", factors=3)
        run(config)
        loadings = (tmp_path / "out" / "loadings.csv").read_text().splitlines()
        assert loadings[0] == "variable,factor_1,factor_2,factor_3,communality"
        # variables are documents (those still covered by the selected terms)
        assert 3 <= len(loadings) - 1 <= 8
        assert all(line.split(",")[0].endswith(".txt") for line in loadings[1:])

    def test_cooc_map(self, micro_dir, tmp_path):
        config = micro_config(micro_dir, tmp_path / "out", map="cooc")
        result = run(config)
        assert result.report["map"]["kind"] == "cooc"

    def test_kk_layout(self, micro_dir, tmp_path):
        config = micro_config(micro_dir, tmp_path / "out", layout="kk", top=10)
        run(config)
        assert (tmp_path / "out" / "map.net").exists()

    def test_stopword_and_synonym_files(self, micro_dir, tmp_path):
        stop = tmp_path / "stop.txt"
        stop.write_text("the\nof\na\nimpact\n", encoding="utf-8")
        syn = tmp_path / "syn.txt"
        syn.write_text("journals\tjournal\n", encoding="utf-8")
        config = micro_config(
            micro_dir, tmp_path / "out",
            stopword_file=str(stop), synonym_file=str(syn),
            criterion="freq", top=10,
        )
        result = run_stage(config, "terms")
        terms = (tmp_path / "out" / "terms.csv").read_text()
        assert "impact" not in terms.splitlines()[1:][0:]  # stopworded away
        assert "\nimpact," not in terms
        assert "journals," not in terms  # merged into the canonical form
        assert result.stages["terms"] == "computed"


class TestSubcommands:
    def test_terms_prefix_only(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        result = run_stage(micro_config(micro_dir, out), "terms")
        assert (out / "terms.csv").exists()
        assert (out / "matrix.csv").exists()
        assert (out / "report.json").exists()
        assert not (out / "map.net").exists()
        assert set(result.stages) == {"ingest", "terms"}

    def test_terms_after_ingest_adds_terms_csv_only(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        run_stage(micro_config(micro_dir, out), "ingest")
        assert (out / "matrix.csv").exists() and (out / "expected.csv").exists()
        before = {p.name for p in out.iterdir()}
        result = run_stage(micro_config(micro_dir, out), "terms")
        assert result.stages["ingest"] == "cached"
        assert result.stages["terms"] == "computed"
        added = {p.name for p in out.iterdir()} - before
        assert added == {"terms.csv"}

    def test_render_prefix_includes_factors_and_map(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        result = run_stage(micro_config(micro_dir, out), "render")
        assert (out / "map.svg").exists()
        assert (out / "factors.net").exists()
        assert not (out / "coocc.dat").exists()
        assert set(result.stages) == {"ingest", "terms", "factors", "map", "render"}

    def test_unknown_subcommand(self, micro_dir, tmp_path):
        with pytest.raises(ConfigError, match="unknown subcommand"):
            run_stage(micro_config(micro_dir, tmp_path / "out"), "animate")

    def test_corrupted_cached_matrix_names_stage(self, micro_dir, tmp_path):
        out = tmp_path / "out"
        run_stage(micro_config(micro_dir, out), "ingest")
        (out / "matrix.csv").write_text("oops", encoding="utf-8")
        # cache says valid but the artifact is broken: instructive error
        from cowordmap.errors import DataError

        with pytest.raises(DataError, match="rerun the ingest stage"):
            run_stage(micro_config(micro_dir, out), "terms")


class TestCli:
    def test_run_exit_zero(self, micro_dir, micro_cfg, tmp_path, capsys):
        code = main([
            "run", "--config", str(micro_cfg), "--input", str(micro_dir),
            "--out", str(tmp_path / "out"),
        ])
        assert code == 0
        assert (tmp_path / "out" / "map.svg").exists()

    def test_invalid_criterion_exits_one_and_lists_values(self, capsys):
        code = main(["run", "--input", "x", "--criterion", "idf"])
        assert code == 1
        err = capsys.readouterr().err
        assert "freq" in err and "obsexp" in err

    def test_missing_input_dir_exits_three(self, tmp_path, capsys):
        code = main([
            "run", "--input", str(tmp_path / "absent"), "--out", str(tmp_path / "o"),
        ])
        assert code == 3
        assert "absent" in capsys.readouterr().err

    def test_empty_corpus_exits_two(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        code = main(["run", "--input", str(empty), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "empty corpus" in capsys.readouterr().err

    def test_no_input_exits_one(self, capsys):
        assert main(["run"]) == 1

    def test_subcommand_required(self, capsys):
        assert main([]) == 1

    def test_factors_flag_accepts_kaiser_and_int(self, micro_dir, tmp_path):
        code = main([
            "terms", "--input", str(micro_dir), "--out", str(tmp_path / "a"),
            "--factors", "kaiser",
        ])
        assert code == 0
        code = main([
            "terms", "--input", str(micro_dir), "--out", str(tmp_path / "b"),
            "--factors", "nope",
        ])
        assert code == 1

    def test_top_and_min_score_mutually_exclusive(self, capsys):
        code = main(["run", "--input", "x", "--top", "5", "--min-score", "1.0"])
        assert code == 1

    def test_ratio_cells_flag_combination(self, micro_dir, tmp_path):
        code = main([
            "run", "--input", str(micro_dir), "--out", str(tmp_path / "out"),
            "--criterion", "obsexp", "--top", "75", "--cells", "obsexp",
            "--factors", "5",
        ])
        assert code == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["config"]["cells"] == "obsexp"
        assert report["factors"]["retained"] == 5

    def test_module_entry_point(self, micro_dir, tmp_path):
        proc = subprocess.run(
            [
                sys.executable, "-m", "cowordmap", "run",
                "--input", str(micro_dir), "--out", str(tmp_path / "out"),
                "--top", "15", "--factors", "4",
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "out" / "report.json").exists()
