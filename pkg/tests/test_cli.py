import json

import pytest

from readgrade.cli import main


@pytest.fixture(scope="module")
def featurize_out(small_corpus_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("featurize")
    code = main([
        "featurize",
        "--manifest", str(small_corpus_dir / "manifest.json"),
        "--out", str(out),
    ])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def select_out(small_corpus_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("select")
    code = main([
        "select",
        "--manifest", str(small_corpus_dir / "manifest.json"),
        "--out", str(out),
    ])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def textonly_model(textonly_corpus_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("select_textonly")
    code = main([
        "select",
        "--manifest", str(textonly_corpus_dir / "manifest.json"),
        "--out", str(out),
    ])
    assert code == 0
    return out / "model.json"


class TestFeaturize:
    def test_outputs_exist(self, featurize_out):
        assert (featurize_out / "features.csv").exists()
        assert (featurize_out / "provenance.json").exists()
        assert (featurize_out / "run_config.json").exists()

    def test_row_count(self, featurize_out, small_corpus_dir):
        manifest = json.loads((small_corpus_dir / "manifest.json").read_text())
        lines = (featurize_out / "features.csv").read_text().splitlines()
        assert len(lines) == len(manifest["documents"]) + 1  # header

    def test_rerun_byte_identical(self, small_corpus_dir, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main([
                "featurize",
                "--manifest", str(small_corpus_dir / "manifest.json"),
                "--out", str(out),
            ]) == 0
        assert (out_a / "features.csv").read_bytes() == (out_b / "features.csv").read_bytes()
        assert (out_a / "provenance.json").read_bytes() == (out_b / "provenance.json").read_bytes()

    def test_jobs_flag_gives_same_output(self, small_corpus_dir, featurize_out, tmp_path):
        out = tmp_path / "jobs"
        assert main([
            "featurize",
            "--manifest", str(small_corpus_dir / "manifest.json"),
            "--out", str(out),
            "--jobs", "4",
        ]) == 0
        assert (out / "features.csv").read_bytes() == (featurize_out / "features.csv").read_bytes()

    def test_bad_manifest_nonzero_exit(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["featurize", "--manifest", str(missing), "--out", str(tmp_path / "o")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_corrupt_tree_file_names_document(self, tmp_path, capsys):
        import json as json_mod

        (tmp_path / "a.txt").write_text("One two.", encoding="utf-8")
        (tmp_path / "a.trees").write_text("(S (NP broken", encoding="utf-8")
        for name in ("stopwords", "pronouns", "abbreviations"):
            (tmp_path / f"{name}.txt").write_text("", encoding="utf-8")
        for name, body in (
            ("gept.tsv", "one\tgept1\n"),
            ("vq.tsv", "one\tvq3\n"),
            ("bnc.tsv", "#total\t10\none\t5\n"),
            ("google.tsv", "#total\t10\none\t5\n"),
            ("synsets.tsv", "one\t2\n"),
            ("patterns.tsv", "p\t1\tVP < VBD\n"),
        ):
            (tmp_path / name).write_text(body, encoding="utf-8")
        manifest = {
            "documents": [{"path": "a.txt", "grade": 1, "tree": "a.trees"}],
            "resources": {
                "stopwords": "stopwords.txt",
                "pronouns": "pronouns.txt",
                "abbreviations": "abbreviations.txt",
                "gept": "gept.tsv",
                "vq": "vq.tsv",
                "bnc": "bnc.tsv",
                "google": "google.tsv",
                "synsets": "synsets.tsv",
                "patterns": "patterns.tsv",
            },
        }
        (tmp_path / "manifest.json").write_text(json_mod.dumps(manifest), encoding="utf-8")
        code = main([
            "featurize",
            "--manifest", str(tmp_path / "manifest.json"),
            "--out", str(tmp_path / "out"),
        ])
        assert code == 1
        err = capsys.readouterr().err
        assert "document a" in err  # the failing document is named


class TestSelect:
    def test_outputs(self, select_out):
        assert (select_out / "model.json").exists()
        assert (select_out / "selection_trace.csv").exists()

    def test_model_schema(self, select_out):
        payload = json.loads((select_out / "model.json").read_text())
        for key in ("registryHash", "subset", "intercept", "coefficients",
                    "thresholds", "trainingMeta", "selectionTrace"):
            assert key in payload
        assert payload["trainingMeta"]["log_base"] == "e"
        assert list(payload["coefficients"]) == payload["subset"]

    def test_trace_has_all_row(self, select_out):
        lines = (select_out / "selection_trace.csv").read_text().splitlines()
        assert lines[-1].startswith("all,")

    def test_rerun_byte_identical(self, small_corpus_dir, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main([
                "select",
                "--manifest", str(small_corpus_dir / "manifest.json"),
                "--out", str(out),
            ]) == 0
        assert (out_a / "model.json").read_bytes() == (out_b / "model.json").read_bytes()
        assert (
            out_a / "selection_trace.csv"
        ).read_bytes() == (out_b / "selection_trace.csv").read_bytes()


class TestEvaluate:
    def test_all_four_table_shapes(self, small_corpus_dir, tmp_path):
        out = tmp_path / "eval"
        assert main([
            "evaluate",
            "--manifest", str(small_corpus_dir / "manifest.json"),
            "--out", str(out),
            "--reps", "1",
        ]) == 0
        per_category = (out / "per_category.csv").read_text().splitlines()
        assert len(per_category) == 10  # header + 9 category rows
        per_feature = (out / "per_feature.csv").read_text().splitlines()
        assert len(per_feature) == 48  # header + 47 features
        assert (out / "selection_trace.csv").exists()
        comparison = (out / "comparison.csv").read_text().splitlines()
        assert len(comparison) >= 5  # header + proposed + 3 classics
        report = (out / "report.md").read_text()
        for heading in ("Feature categories", "Individual features",
                        "Forward selection trace", "Estimator comparison"):
            assert heading in report


class TestScore:
    def test_matches_library_predict(self, small_corpus_dir, select_out, capsys):
        doc = small_corpus_dir / "docs" / "doc_g3_000.txt"
        tree = small_corpus_dir / "trees" / "doc_g3_000.trees"
        code = main([
            "score",
            "--model", str(select_out / "model.json"),
            "--doc", str(doc),
            "--resources", str(small_corpus_dir / "manifest.json"),
            "--tree", str(tree),
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert isinstance(payload["score"], float)
        assert payload["level"] in range(1, 7)
        contributions = sum(f["contribution"] for f in payload["features"])
        model = json.loads((select_out / "model.json").read_text())
        assert contributions == pytest.approx(payload["score"] - model["intercept"], abs=1e-9)

    def test_missing_tree_for_tree_model_errors(self, small_corpus_dir, select_out, capsys):
        model = json.loads((select_out / "model.json").read_text())
        if not any(
            f in model["subset"]
            for f in ("tree_height", "np", "vp", "sbar", "pp",
                      "grammar1", "grammar2", "grammar3", "grammar4", "grammar5", "grammar6")
        ):
            pytest.skip("selected model does not use tree features")
        doc = small_corpus_dir / "docs" / "doc_g3_000.txt"
        code = main([
            "score",
            "--model", str(select_out / "model.json"),
            "--doc", str(doc),
            "--resources", str(small_corpus_dir / "manifest.json"),
        ])
        assert code == 1
        assert "missing required features" in capsys.readouterr().err

    def test_textonly_model_scores_bare_text(self, textonly_corpus_dir, textonly_model, capsys):
        doc = textonly_corpus_dir / "docs" / "doc_g5_002.txt"
        code = main([
            "score",
            "--model", str(textonly_model),
            "--doc", str(doc),
            "--resources", str(textonly_corpus_dir / "manifest.json"),
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["level"] in range(1, 7)
