import subprocess
import sys

import pytest

from auternary import cli, files
from auternary.classify import ALMOST_UNIVERSAL, Verdict
from auternary.coset import normalize_lattice, normalize_polynomial
from auternary.errors import GiveUp, ParseError
from auternary.generate import generate_instances
from auternary.spectrum import spectrum

TRIANGULAR_TEXT = """\
# smallest interesting polynomial instance
form = polynomial
quadratic = 4 0 0 4 0 4
linear = 4 4 4
"""

DIAG_2_2_18_TEXT = """\
form = lattice
gram = 2 0 0 2 0 18
w = 1 1 0
"""


def test_parse_polynomial_and_lattice():
    src = files.parse_instance(TRIANGULAR_TEXT)
    assert src.form == "polynomial"
    assert src.quadratic == (4, 0, 0, 4, 0, 4)
    assert src.linear == (4, 4, 4)
    assert src.constant is None

    src = files.parse_instance(DIAG_2_2_18_TEXT)
    assert src.form == "lattice"
    assert src.gram == (2, 0, 0, 2, 0, 18)
    assert src.w == (1, 1, 0)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("form lattice\n", "expected 'key = value'"),
        ("form = lattice\nshape = 1\n", "unknown key 'shape'"),
        ("form = lattice\nw = 1 1 0\nw = 1 0 0\n", "duplicate key 'w' (first on line 2)"),
        ("form = banana\n", "form must be 'polynomial' or 'lattice'"),
        ("form = lattice\ngram = 2 0 0 2 0\nw = 1 1 0\n", "'gram' needs 6 integer(s), got 5"),
        ("form = lattice\ngram = 2 0 0 2 0 x\nw = 1 1 0\n", "'gram' values must be integers"),
        ("gram = 2 0 0 2 0 18\nw = 1 1 0\n", "missing 'form"),
        (
            "form = lattice\ngram = 2 0 0 2 0 18\nw = 1 1 0\nlinear = 1 1 1\n",
            "key 'linear' does not belong to the lattice schema",
        ),
        ("form = polynomial\nquadratic = 4 0 0 4 0 4\n", "missing required key 'linear'"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=None) as err:
        files.parse_instance(text, origin="bad.txt")
    assert fragment in str(err.value)
    assert str(err.value).startswith("bad.txt")


def test_parse_error_names_the_line():
    with pytest.raises(ParseError) as err:
        files.parse_instance("form = lattice\n\n# note\njunk\n", origin="f.txt")
    assert str(err.value).startswith("f.txt:4:")


def test_render_parse_build_round_trip():
    for inst in [
        normalize_polynomial((4, 0, 0, 4, 0, 4), (4, 4, 4)),
        normalize_lattice((4, 0, 2, 4, 2, 6), (0, 1, 0)),
    ]:
        text = files.render_instance(inst, comment="round trip")
        again = files.build_instance(files.parse_instance(text))
        assert again == inst


def test_build_instance_matches_direct_normalization():
    src = files.parse_instance(TRIANGULAR_TEXT)
    assert files.build_instance(src) == normalize_polynomial((4, 0, 0, 4, 0, 4), (4, 4, 4))


def full_report():
    src = files.parse_instance(DIAG_2_2_18_TEXT)
    inst = files.build_instance(src)
    from auternary.classify import evaluate

    verdict = evaluate(inst)
    spec = spectrum(inst, 300)
    return files.build_report(src, inst=inst, verdict=verdict, spec=spec)


def test_report_shape_and_machine_round_trip():
    report = full_report()
    assert list(report) == ["format", "instance", "invariants", "verdict", "spectrum"]
    assert report["format"] == files.REPORT_FORMAT
    assert report["instance"]["gram"] == [2, 0, 0, 2, 0, 18]
    assert report["invariants"]["alpha"] == 1
    assert report["verdict"]["status"] == "NotAlmostUniversal"
    assert report["spectrum"]["exception_count"] == len(report["spectrum"]["exceptions"])

    blob = files.render_machine(report)
    assert files.render_machine(files.parse_machine(blob)) == blob


def test_text_rendering_mentions_the_essentials():
    text = files.render_text(full_report())
    assert "instance: gram = 2 0 0 2 0 18" in text
    assert "alpha=1" in text
    assert "verdict: NotAlmostUniversal" in text
    assert "odd_local_universal [p=3] -> False" in text
    assert "spectrum to 300:" in text
    assert "(first 20 of" in text  # this instance misses far more than 20 targets
    assert "largest gap between exceptions:" in text


def test_polynomial_echo_serializes_the_source():
    src = files.parse_instance(TRIANGULAR_TEXT)
    inst = files.build_instance(src)
    report = files.build_report(src, inst=inst)
    echo = report["instance"]["source"]
    assert echo == {
        "form": "polynomial",
        "quadratic": [4, 0, 0, 4, 0, 4],
        "linear": [4, 4, 4],
        "constant": 0,
    }
    assert "from polynomial: quadratic = 4 0 0 4 0 4" in files.render_text(report)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_cli_classify_text_and_machine(tmp_path, capsys):
    path = write(tmp_path, "tri.txt", TRIANGULAR_TEXT)
    assert cli.main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "verdict: AlmostUniversal via clause 3a" in out

    assert cli.main(["classify", path, "--format", "machine"]) == 0
    report = files.parse_machine(capsys.readouterr().out)
    assert report["verdict"]["clause"] == "3a"
    assert report["invariants"]["alpha"] == 3


def test_cli_classify_invalid_instance(tmp_path, capsys):
    path = write(tmp_path, "odd.txt", "form = lattice\ngram = 6 0 0 6 0 6\nw = 1 1 0\n")
    assert cli.main(["classify", path]) == 2
    out = capsys.readouterr().out
    assert "AssumptionViolated" in out


def test_cli_classify_parse_and_io_errors(tmp_path, capsys):
    path = write(tmp_path, "junk.txt", "form = lattice\ngram = 1 2\nw = 1 1 0\n")
    assert cli.main(["classify", path]) == 4
    assert "parse error:" in capsys.readouterr().err
    assert cli.main(["classify", str(tmp_path / "missing.txt")]) == 4
    assert "parse error:" in capsys.readouterr().err


def test_cli_classify_budget_exhaustion(tmp_path, capsys):
    path = write(tmp_path, "shell.txt", "form = lattice\ngram = 2 0 0 2 0 64\nw = 1 1 0\n")
    assert cli.main(["classify", path, "--enum-budget", "0"]) == 3
    out = capsys.readouterr().out
    assert "Inconclusive" in out


def test_cli_enumerate(tmp_path, capsys):
    path = write(tmp_path, "d.txt", DIAG_2_2_18_TEXT)
    assert cli.main(["enumerate", path, "--bound", "100"]) == 0
    out = capsys.readouterr().out
    assert "spectrum to 100:" in out

    assert cli.main(["enumerate", path, "--bound", "0"]) == 4
    assert "--bound must be positive" in capsys.readouterr().err


def test_cli_enumerate_accepts_lenient_instances(tmp_path, capsys):
    path = write(tmp_path, "odd.txt", "form = lattice\ngram = 6 0 0 6 0 6\nw = 1 1 0\n")
    assert cli.main(["enumerate", path, "--bound", "50", "--format", "machine"]) == 0
    report = files.parse_machine(capsys.readouterr().out)
    assert report["invariants"]["norm_odd_content"] == 3


def test_cli_verify_consistent(tmp_path, capsys):
    path = write(tmp_path, "tri.txt", TRIANGULAR_TEXT)
    assert cli.main(["verify", path, "--bound", "2000"]) == 0
    out = capsys.readouterr().out
    assert "[ok] AlmostUniversal: no exceptions in (1000, 2000]" in out
    assert "verify: CONSISTENT" in out


def test_cli_verify_spinor_branch(tmp_path, capsys):
    path = write(tmp_path, "sp.txt", "form = lattice\ngram = 10 8 0 10 2 10\nw = 1 1 0\n")
    assert cli.main(["verify", path, "--bound", "4000"]) == 0
    out = capsys.readouterr().out
    assert "spinor progression:" in out
    assert "confirmed misses" in out
    assert "verify: CONSISTENT" in out


def test_cli_verify_flags_a_wrong_verdict(tmp_path, capsys, monkeypatch):
    # force the classifier to lie about an instance with infinitely many
    # exceptions; verify must notice and exit 1
    fake = Verdict(ALMOST_UNIVERSAL, "3a", ())
    monkeypatch.setattr(cli, "evaluate", lambda inst, cfg=None: fake)
    path = write(tmp_path, "d.txt", DIAG_2_2_18_TEXT)
    assert cli.main(["verify", path, "--bound", "600"]) == 1
    captured = capsys.readouterr()
    assert "verify: INCONSISTENT" in captured.out
    assert "classifier said AlmostUniversal" in captured.err


def test_cli_generate_round_trip(tmp_path, capsys):
    out_dir = tmp_path / "corpus"
    assert cli.main(["generate", "--count", "3", "--seed", "7", "--out", str(out_dir)]) == 0
    paths = capsys.readouterr().out.splitlines()
    assert len(paths) == 3
    texts = []
    for p in paths:
        src = files.read_instance(p)
        inst = files.build_instance(src)
        assert inst.norm_odd_content == 1 and inst.alpha >= 1
        with open(p, encoding="utf-8") as fh:
            texts.append(fh.read())
    # same seed, same bytes
    assert cli.main(["generate", "--count", "3", "--seed", "7", "--out", str(out_dir)]) == 0
    capsys.readouterr()
    for p, old in zip(paths, texts):
        with open(p, encoding="utf-8") as fh:
            assert fh.read() == old


def test_cli_generate_gives_up(tmp_path, capsys):
    rc = cli.main(
        ["generate", "--count", "5", "--seed", "1", "--entry-bound", "1",
         "--max-rejects", "50", "--out", str(tmp_path)]
    )
    assert rc == 3
    assert "resource limit:" in capsys.readouterr().err


def test_cli_generate_rejects_bad_count(capsys):
    assert cli.main(["generate", "--count", "0"]) == 4
    assert "--count must be positive" in capsys.readouterr().err


def test_cli_usage_errors(capsys):
    assert cli.main([]) == 4
    capsys.readouterr()
    assert cli.main(["frobnicate"]) == 4
    capsys.readouterr()
    assert cli.main(["--help"]) == 0
    assert "classify" in capsys.readouterr().out


def test_generate_instances_deterministic():
    a = generate_instances(5, seed=3)
    b = generate_instances(5, seed=3)
    assert a == b
    with pytest.raises(ValueError):
        generate_instances(0, seed=1)
    with pytest.raises(ValueError):
        generate_instances(1, seed=1, entry_bound=0)
    with pytest.raises(GiveUp):
        generate_instances(3, seed=1, entry_bound=1, max_rejects=25)


def test_module_entrypoint_smoke(tmp_path):
    path = write(tmp_path, "tri.txt", TRIANGULAR_TEXT)
    proc = subprocess.run(
        [sys.executable, "-m", "auternary", "classify", str(path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "AlmostUniversal" in proc.stdout
