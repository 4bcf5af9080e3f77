import json

import numpy as np
import pytest
import yaml
from click.testing import CliRunner

from termnet.cli import main
from termnet.config import load_pipeline_config
from termnet.embedding import load_binary
from termnet.vocab import Vocabulary


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args, **kw):
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    assert result.exit_code == 0, result.output
    return result


def run_pipeline(runner, tmp_path, records, out_name="model.bin",
                 train_args=()):
    paths = {
        "corpus": tmp_path / "corpus.txt",
        "phrased": tmp_path / "phrased.txt",
        "clean": tmp_path / "clean.txt",
        "vocab": tmp_path / "vocab.txt",
        "model": tmp_path / out_name,
    }
    run_ok(runner, ["ingest", str(records), str(paths["corpus"])])
    run_ok(runner, ["phrase", str(paths["corpus"]), str(paths["phrased"]),
                    "--algo", "stat", "--t1", "5", "--t2", "2.5"])
    run_ok(runner, ["denoise", str(paths["phrased"]), str(paths["clean"]),
                    "--vocab-out", str(paths["vocab"])])
    run_ok(runner, ["train", str(paths["clean"]), str(paths["model"]),
                    "--dim", "16", "--epochs", "2", "--window", "5",
                    "--seed", "11", *train_args])
    return paths


class TestInitConfig:
    def test_emitted_config_loads_strictly(self, runner, tmp_path):
        path = tmp_path / "pipeline.yaml"
        run_ok(runner, ["init-config", str(path)])
        config = load_pipeline_config(path)
        assert config.train.downsample_d == 0.0039
        assert config.train.window == 10
        assert config.train.dim == 300
        assert config.phrasing.delta == 2.0
        assert config.denoise.min_count == 2

    def test_stdout_mode(self, runner):
        result = run_ok(runner, ["init-config"])
        parsed = yaml.safe_load(result.output)
        assert parsed["train"]["negatives"] == 5

    def test_unknown_keys_rejected(self, runner, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("train:\n  dim: 8\n  warp: 9\n")
        corpus = tmp_path / "c.txt"
        corpus.write_text("a b\n")
        result = runner.invoke(main, ["train", str(corpus),
                                      str(tmp_path / "m.bin"),
                                      "--config", str(path)])
        assert result.exit_code != 0
        assert "warp" in result.output


class TestPipeline:
    def test_full_pipeline_and_query(self, runner, tmp_path,
                                     fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        vocab = Vocabulary.load(paths["vocab"])
        assert "heat_pump" in vocab  # phrase survived denoising

        result = run_ok(runner, ["query", "sim", "heat pump", "compressor",
                                 "--model", str(paths["model"])])
        body = json.loads(result.output)
        assert -1.0 <= body["relevance"] <= 1.0

        result = run_ok(runner, ["query", "neighbors", "heat_pump", "--k",
                                 "5", "--model", str(paths["model"])])
        assert len(json.loads(result.output)["neighbors"]) == 5

        result = run_ok(runner, ["query", "adjacency",
                                 "the heat pump and the compressor",
                                 "--model", str(paths["model"])])
        assert "heat_pump" in json.loads(result.output)["terms"]

        result = run_ok(runner, ["query", "tree", "heat_pump", "--breadth",
                                 "2", "--depth", "2",
                                 "--model", str(paths["model"])])
        tree = json.loads(result.output)
        assert tree["term"] == "heat_pump" and len(tree["children"]) == 2

    def test_pipeline_determinism_is_byte_identical(self, runner, tmp_path,
                                                    fixture_records_path):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        a = run_pipeline(runner, tmp_path / "a", fixture_records_path)
        b = run_pipeline(runner, tmp_path / "b", fixture_records_path)
        assert a["model"].read_bytes() == b["model"].read_bytes()
        assert a["vocab"].read_bytes() == b["vocab"].read_bytes()

    def test_stage_formats_compose(self, runner, tmp_path,
                                    fixture_records_path):
        # each stage's output parses as the next stage's input
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        for key in ("corpus", "phrased", "clean"):
            lines = paths[key].read_text().splitlines()
            assert lines and all(line == " ".join(line.split())
                                 for line in lines)
        terms, vectors = load_binary(paths["model"])
        assert len(terms) == vectors.shape[0] > 0

    def test_kind_filter(self, runner, tmp_path, fixture_records_path):
        kept = tmp_path / "kept.txt"
        everything = tmp_path / "all.txt"
        run_ok(runner, ["ingest", str(fixture_records_path), str(kept),
                        "--only-kind", "utility"])
        run_ok(runner, ["ingest", str(fixture_records_path), str(everything)])
        assert len(kept.read_text().splitlines()) < \
            len(everything.read_text().splitlines())

    def test_malformed_records_are_skipped_with_warning(self, runner,
                                                        tmp_path):
        bad = tmp_path / "records.jsonl"
        bad.write_text('{"id": "a", "title": "Pump.", "abstract": "Ok."}\n'
                       "{broken\n")
        out = tmp_path / "corpus.txt"
        result = run_ok(runner, ["ingest", str(bad), str(out)])
        assert out.read_text().splitlines() == ["pump", "ok"]

    def test_text_mode_bypasses_splitting(self, runner, tmp_path):
        raw = tmp_path / "plain.txt"
        raw.write_text("One sentence here\nAnother. with, punctuation\n")
        out = tmp_path / "corpus.txt"
        run_ok(runner, ["ingest", str(raw), str(out), "--format", "text"])
        assert out.read_text().splitlines() == [
            "one sentence here", "another with punctuation"]

    def test_tsv_format(self, runner, tmp_path):
        tsv = tmp_path / "records.tsv"
        tsv.write_text("p1\tPump title\tBody one.\n")
        out = tmp_path / "corpus.txt"
        run_ok(runner, ["ingest", str(tsv), str(out), "--format", "tsv"])
        assert out.read_text().splitlines() == ["pump title", "body one"]

    def test_epochs_zero_writes_seeded_initialization(self, runner, tmp_path):
        corpus = tmp_path / "c.txt"
        corpus.write_text("pump valve rotor\n" * 12)
        model = tmp_path / "m.bin"
        run_ok(runner, ["train", str(corpus), str(model), "--dim", "4",
                        "--epochs", "0", "--seed", "3", "--min-count", "1",
                        "--negatives", "1"])
        terms, vectors = load_binary(model)
        assert sorted(terms) == ["pump", "rotor", "valve"]
        assert np.abs(vectors).max() <= 0.5 / 4

    def test_glove_training_via_cli(self, runner, tmp_path,
                                    fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path,
                             train_args=("--algo", "glove"))
        terms, vectors = load_binary(paths["model"])
        assert np.isfinite(vectors).all()

    def test_rake_and_textrank_algorithms_run(self, runner, tmp_path,
                                              fixture_records_path):
        corpus = tmp_path / "c.txt"
        run_ok(runner, ["ingest", str(fixture_records_path), str(corpus)])
        for algo in ("textrank", "rake"):
            out = tmp_path / f"{algo}.txt"
            phrases = tmp_path / f"{algo}_phrases.txt"
            run_ok(runner, ["phrase", str(corpus), str(out), "--algo", algo,
                            "--phrases-out", str(phrases)])
            assert phrases.read_text().strip()


class TestEvalCommands:
    def test_coverage(self, runner, tmp_path, fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        dictionary = tmp_path / "dict.tsv"
        dictionary.write_text("thermo\theat pump\nthermo\tcompressor\n"
                              "absent\twarp drive\n")
        result = run_ok(runner, ["coverage", "--vocab", str(paths["vocab"]),
                                 "--dict", str(dictionary), "--json"])
        report = json.loads(result.output)
        assert report["per_category"]["thermo"] == 1.0
        assert report["per_category"]["absent"] == 0.0
        assert report["n_keywords"] == 3

    def test_bench(self, runner, tmp_path, fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        pairs = tmp_path / "pairs.tsv"
        pairs.write_text("heat pump\tcompressor\t8\n"
                         "heat pump\tlidar\t2\n"
                         "gas turbine\trotor\t7\n"
                         "warp drive\tpump\t5\n")
        result = run_ok(runner, ["bench", "--model", str(paths["model"]),
                                 "--pairs", str(pairs)])
        body = json.loads(result.output)
        assert body["n_scored"] == 3 and body["n_missing"] == 1
        assert -1.0 <= body["rho"] <= 1.0

    def test_alpha(self, runner, tmp_path):
        ratings = tmp_path / "ratings.csv"
        ratings.write_text("2,4,6,8,10\n1,4,5,9,9\n3,5,6,7,10\n")
        result = run_ok(runner, ["alpha", "--ratings", str(ratings)])
        body = json.loads(result.output)
        assert body["alpha"] == pytest.approx(42 / 43, abs=1e-12)
        assert body["raters"] == 3 and body["items"] == 5

    def test_sample_dist(self, runner, tmp_path, fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        args = ["sample-dist", "--model", str(paths["model"]),
                "--pairs", "500", "--seed", "9"]
        first = json.loads(run_ok(runner, args).output)
        second = json.loads(run_ok(runner, args).output)
        assert first == second
        assert sum(first["histogram"]) == 500


class TestFailureModes:
    def test_missing_input_file(self, runner, tmp_path):
        result = runner.invoke(main, ["ingest", str(tmp_path / "nope.jsonl"),
                                      str(tmp_path / "out.txt")])
        assert result.exit_code != 0

    def test_unknown_query_term_fails_nonzero(self, runner, tmp_path,
                                              fixture_records_path):
        paths = run_pipeline(runner, tmp_path, fixture_records_path)
        result = runner.invoke(main, ["query", "sim", "warp drive", "pump",
                                      "--model", str(paths["model"])])
        assert result.exit_code != 0
        assert "warp_drive" in result.output

    def test_train_on_empty_corpus_fails(self, runner, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        result = runner.invoke(main, ["train", str(empty),
                                      str(tmp_path / "m.bin")])
        assert result.exit_code != 0
