import json

import numpy as np
import pytest

from repvec.cli import main
from repvec.evaluation import parse_tsv
from repvec.weights import load_weights


@pytest.fixture
def synth(tmp_path):
    out = tmp_path / "s"
    assert main(["synth", "--classes", "3", "--instances", "12", "--dim", "20",
                 "--seed", "7", "--out-dir", str(out)]) == 0
    return out


def _io(synth):
    return ["--embeddings", str(synth / "embeddings.txt"), "--ontology", str(synth / "ontology.json")]


def test_synth_deterministic(tmp_path, synth):
    again = tmp_path / "again"
    main(["synth", "--classes", "3", "--instances", "12", "--dim", "20", "--seed", "7",
          "--out-dir", str(again)])
    for name in ("embeddings.txt", "ontology.json", "truth.json"):
        assert (synth / name).read_bytes() == (again / name).read_bytes()


def test_synth_rejects_zero_classes(tmp_path, capsys):
    assert main(["synth", "--classes", "0", "--out-dir", str(tmp_path / "x")]) == 2
    assert "usage" in capsys.readouterr().err


def test_train_reports_dataset_size(tmp_path, synth, capsys):
    out = tmp_path / "w.json"
    assert main(["train", *_io(synth), "--out", str(out), "--seed", "7"]) == 0
    err = capsys.readouterr().err
    assert "examples: 60" in err
    wv = load_weights(out)
    assert wv.w.sum() == pytest.approx(1.0)


def test_missing_ontology_is_usage_error(tmp_path, synth):
    with pytest.raises(SystemExit) as exc:
        main(["train", "--embeddings", str(synth / "embeddings.txt"), "--out", str(tmp_path / "w")])
    assert exc.value.code == 2


def test_unresolvable_label_names_class(tmp_path, synth, capsys):
    onto = json.loads((synth / "ontology.json").read_text())
    onto["classes"][1]["label"] = "nosuchlabel"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(onto))
    code = main(["train", "--embeddings", str(synth / "embeddings.txt"), "--ontology", str(bad),
                 "--out", str(tmp_path / "w.json")])
    assert code == 1
    err = capsys.readouterr().err
    assert "nosuchlabel" in err and "[ontology]" in err


def test_derive(tmp_path, synth):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"weights": [1, 1, 1, 1, 1], "meta": {}}))
    out, cand = tmp_path / "y.tsv", tmp_path / "c.tsv"
    assert main(["derive", *_io(synth), "--weights", str(w), "--out", str(out),
                 "--candidates-out", str(cand)]) == 0
    ys = [line.split("\t") for line in out.read_text().splitlines()]
    cs = [line.split("\t") for line in cand.read_text().splitlines()]
    assert [y[0] for y in ys] == ["class0", "class1", "class2"]
    assert len(cs) == 15
    c = np.array([[float(v) for v in row[2:]] for row in cs[:5]])
    np.testing.assert_allclose([float(v) for v in ys[0][1:]], c.mean(axis=0), atol=1e-12)
    first = out.read_bytes()
    main(["derive", *_io(synth), "--weights", str(w), "--out", str(out)])
    assert out.read_bytes() == first


def test_derive_single_instance_class(tmp_path):
    (tmp_path / "e.txt").write_text("judge 1 0\nmagistrate 0.25 0.75\n")
    (tmp_path / "o.json").write_text(json.dumps(
        {"classes": [{"label": "judge", "instances": ["magistrate"]}]}))
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"weights": [0.1, 0.2, 0.3, 0.2, 0.2]}))
    out = tmp_path / "y.tsv"
    assert main(["derive", "--embeddings", str(tmp_path / "e.txt"), "--ontology",
                 str(tmp_path / "o.json"), "--weights", str(w), "--out", str(out)]) == 0
    assert out.read_text() == "judge\t0.25\t0.75\n"


def test_evaluate(tmp_path, synth):
    out, js = tmp_path / "r.tsv", tmp_path / "r.json"
    assert main(["evaluate", *_io(synth), "--protocol", "insample", "--out", str(out),
                 "--json-out", str(js)]) == 0
    report = parse_tsv(out.read_text())
    assert len(report.rows) == 3
    assert out.read_text().splitlines()[-1].startswith("MEAN\t")
    doc = json.loads(js.read_text())
    assert doc["protocol"] == "insample" and len(doc["rows"]) == 3


def test_evaluate_with_fixed_weights(tmp_path, synth, capsys):
    w = tmp_path / "w.json"
    main(["train", *_io(synth), "--out", str(w)])
    capsys.readouterr()
    assert main(["evaluate", *_io(synth), "--weights", str(w)]) == 0
    assert capsys.readouterr().out.startswith("class\tdist_mean")


def test_loco_single_class_fails(tmp_path, capsys):
    (tmp_path / "e.txt").write_text("judge 1 0\nmagistrate 0.25 0.75\n")
    (tmp_path / "o.json").write_text(json.dumps(
        {"classes": [{"label": "judge", "instances": ["magistrate"]}]}))
    code = main(["evaluate", "--embeddings", str(tmp_path / "e.txt"), "--ontology",
                 str(tmp_path / "o.json"), "--protocol", "loco"])
    assert code == 1
    assert "least 2 classes" in capsys.readouterr().err
