import json
import shutil
import subprocess
import sys

import pytest

from morphkit import data
from morphkit.cli import run_command, tokenize


def run_cli(args, stdin=""):
    proc = subprocess.run(
        [sys.executable, "-m", "morphkit.cli", *args],
        input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture(scope="module")
def model_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "small.txt"
    rc, _, err = run_cli(["train",
                          "--corpus", str(data.path(data.MINICORPUS_SMALL)),
                          "--out", str(path)])
    assert rc == 0, err
    return str(path)


def test_analyze_word_winde():
    rc, out, _ = run_cli(["analyze", "--word", "Winde"])
    assert rc == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) == 12
    assert "Winde\twinden\tVER SIN IMP\twinden" in lines
    assert "Winde\tWind\tSUB DAT SIN MAS\tWind" in lines


def test_usage_error_exits_1():
    rc, _, err = run_cli(["analyze", "--no-such-flag"])
    assert rc == 1
    rc, _, _ = run_cli(["frobnicate"])
    assert rc == 1


def test_data_error_exits_2(tmp_path):
    rc, _, err = run_cli(["analyze", "--word", "Haus",
                          "--lexicon", str(tmp_path / "missing.txt")])
    assert rc == 2


def test_tag_empty_input_exits_2(model_path):
    rc, _, err = run_cli(["tag", "--model", model_path], stdin="")
    assert rc == 2
    assert "empty corpus" in err


def test_tokenize_table2_sentence():
    assert tokenize("Ich meine meine Frau.") == \
        [["Ich", "meine", "meine", "Frau", "."]]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_abbreviation_blocks_split():
    sentences = tokenize("Dr. Müller kam.")
    assert sentences == [["Dr.", "Müller", "kam", "."]]


def test_tokenize_two_sentences():
    sentences = tokenize("Der Wind weht. Die Winde wehen!")
    assert sentences == [["Der", "Wind", "weht", "."],
                         ["Die", "Winde", "wehen", "!"]]


def test_tokenize_number_keeps_period():
    assert tokenize("Kapitel 3.5 folgt.") == \
        [["Kapitel", "3.5", "folgt", "."]]


def test_export_then_fullform_analysis_matches(tmp_path):
    export = tmp_path / "ff.txt"
    rc, _, err = run_cli(["export", "--out", str(export)])
    assert rc == 0
    assert "405" in err
    rc, via_table, _ = run_cli(["analyze", "--fullform", str(export),
                                "--word", "Häuser", "--json"])
    rc2, via_rules, _ = run_cli(["analyze", "--word", "Häuser", "--json"])
    assert rc == rc2 == 0
    assert via_table == via_rules
    payload = json.loads(via_rules)
    assert {a["tag"] for a in payload["analyses"]} == {
        "SUB NOM PLU NEU", "SUB GEN PLU NEU", "SUB AKK PLU NEU"}


def test_tag_table2(model_path):
    rc, out, _ = run_cli(["tag", "--model", model_path],
                         stdin="Ich meine meine Frau.\n")
    assert rc == 0
    assert out == ("Ich\tPRO PER\nmeine\tVER\nmeine\tPOS ATT\n"
                   "Frau\tSUB\n.\tSZE\n\n")


def test_tag_then_lemmatize_equals_with_tagger(model_path):
    text = "Ich meine meine Frau. Der Wind weht."
    rc, tagged, _ = run_cli(["tag", "--model", model_path], stdin=text)
    assert rc == 0
    rc, piped, _ = run_cli(["lemmatize", "--model", model_path],
                           stdin=tagged)
    assert rc == 0
    rc, combined, _ = run_cli(["lemmatize", "--model", model_path,
                               "--with-tagger"], stdin=text)
    assert rc == 0
    assert piped == combined
    assert "meine\tVER\tmeinen\tRESOLVED" in piped
    assert "meine\tPOS ATT\tmein\tRESOLVED" in piped


def test_sentence_isolation_in_pipeline(model_path):
    rc, pair, _ = run_cli(["tag", "--model", model_path],
                          stdin="Das Haus ist alt. Ich meine meine Frau.\n")
    rc2, alone, _ = run_cli(["tag", "--model", model_path],
                            stdin="Ich meine meine Frau.\n")
    assert rc == rc2 == 0
    assert pair.split("\n\n")[1].strip() == alone.strip()


def test_pipeline_determinism(model_path, tmp_path):
    model2 = tmp_path / "model2.txt"
    rc, _, _ = run_cli(["train",
                        "--corpus", str(data.path(data.MINICORPUS_SMALL)),
                        "--out", str(model2)])
    assert rc == 0
    assert open(model_path, "rb").read() == model2.read_bytes()
    text = "Ich meine meine Frau. Die Winde wehen."
    runs = set()
    for _ in range(2):
        rc, out, _ = run_cli(["lemmatize", "--model", model_path,
                              "--with-tagger"], stdin=text)
        assert rc == 0
        runs.add(out)
    assert len(runs) == 1


def test_generate_cli():
    rc, out, _ = run_cli(["generate", "--lemma", "Haus", "--pos", "SUB"])
    assert rc == 0
    assert "Häuser\tSUB NOM PLU NEU" in out.splitlines()


def test_lexicon_add_then_analyze(tmp_path):
    lexicon_copy = tmp_path / "lex.txt"
    shutil.copy(data.path(data.LEXICON), lexicon_copy)
    rc, out, err = run_cli(["lexicon-add", "--lexicon", str(lexicon_copy),
                            "--lemma", "Tisch", "--pos", "SUB",
                            "--paradigm", "n_mas_e"])
    assert rc == 0, err
    assert out.strip() == "Tisch|SUB|n_mas_e"
    rc, out, _ = run_cli(["analyze", "--lexicon", str(lexicon_copy),
                          "--word", "Tisches"])
    assert rc == 0
    assert "Tisches\tTisch\tSUB GEN SIN MAS\tTisch" in out


def test_lexicon_add_duplicate_exits_2(tmp_path):
    lexicon_copy = tmp_path / "lex.txt"
    shutil.copy(data.path(data.LEXICON), lexicon_copy)
    rc, _, err = run_cli(["lexicon-add", "--lexicon", str(lexicon_copy),
                          "--lemma", "Wind", "--pos", "SUB",
                          "--paradigm", "n_mas_e"])
    assert rc == 2


def test_eval_report(model_path):
    rc, out, err = run_cli(["eval", "--model", model_path,
                            "--gold", str(data.path(data.MINICORPUS_SMALL))])
    assert rc == 0, err
    lines = dict(l.split("\t")[:2] for l in out.splitlines()
                 if "\t" in l and not l.startswith("confusion"))
    assert lines["tags-small-inventory"] == "51"
    assert float(lines["tagging-accuracy"]) >= 0.9
    assert int(lines["tokens"]) == 47
    rc2, out2, _ = run_cli(["eval", "--model", model_path,
                            "--gold", str(data.path(data.MINICORPUS_SMALL))])
    assert out2 == out


@pytest.fixture(scope="module")
def large_model_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("model") / "large.txt"
    rc, _, err = run_cli(["train", "--tagset", "large",
                          "--corpus", str(data.path(data.MINICORPUS_LARGE)),
                          "--out", str(path)])
    assert rc == 0, err
    return str(path)


def test_large_mode_pipeline(large_model_path):
    rc, out, _ = run_cli(["tag", "--model", large_model_path,
                          "--tagset", "large"],
                         stdin="Ich meine meine Frau.\n")
    assert rc == 0
    assert out.splitlines()[:4] == [
        "Ich\tPRO PER NOM SIN 1PE",
        "meine\tVER SIN 1PE PRÄ",
        "meine\tPOS ATT AKK SIN FEM",
        "Frau\tSUB AKK SIN FEM",
    ]
    rc, out, _ = run_cli(["lemmatize", "--model", large_model_path,
                          "--tagset", "large", "--with-tagger"],
                         stdin="Ich meine meine Frau.\n")
    assert rc == 0
    assert "meine\tVER SIN 1PE PRÄ\tmeinen\tRESOLVED" in out
    assert "meine\tPOS ATT AKK SIN FEM\tmein\tRESOLVED" in out


def test_tagset_flag_must_match_model(large_model_path):
    rc, _, err = run_cli(["tag", "--model", large_model_path,
                          "--tagset", "small"], stdin="x\n")
    assert rc == 2
    assert "LARGE" in err


def test_run_command_in_process(capsys):
    rc = run_command(["analyze", "--word", "Wind"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "Wind\tWind\tSUB NOM SIN MAS\tWind" in out
