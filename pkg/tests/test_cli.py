"""Command-line interface: every subcommand, output shape, exit codes."""

import pytest

from fmtlab import cli, families
from fmtlab.structures import read_structure, write_structure


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, G in [
        ("w5", families.wheel(5)),
        ("c5", families.cycle(5)),
        ("c6", families.cycle(6)),
        ("k3", families.clique(3)),
        ("k4", families.clique(4)),
    ]:
        p = tmp_path / f"{name}.fmt"
        write_structure(G, p)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def test_gen_writes_file(tmp_path, capsys):
    out = tmp_path / "d5.fmt"
    code, stdout, _ = run(capsys, "gen", "dn:5", "-o", str(out))
    assert code == 0 and stdout == ""
    G = read_structure(out)
    assert G.n == 12 and len(G.edges) == 30


def test_gen_prints_to_stdout(capsys):
    code, stdout, _ = run(capsys, "gen", "cycle:4")
    assert code == 0
    assert stdout.startswith("graph 4")
    assert "edge" in stdout


def test_gen_bad_family_is_a_usage_error(capsys):
    code, _, stderr = run(capsys, "gen", "heptagram:9")
    assert code == 2
    assert "error" in stderr


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def test_eval_builtin_formula(files, capsys):
    code, stdout, _ = run(capsys, "eval", "-f", "phi_bouquet",
                          "-s", files["w5"])
    assert (code, stdout) == (0, "true\n")
    code, stdout, _ = run(capsys, "eval", "-f", "phi_bouquet",
                          "-s", files["c5"])
    assert (code, stdout) == (1, "false\n")


def test_eval_formula_from_file(files, tmp_path, capsys):
    f = tmp_path / "q.fo"
    f.write_text("(exists x (exists y (rel E x y)))\n")
    code, stdout, _ = run(capsys, "eval", "-f", str(f), "-s", files["c5"])
    assert (code, stdout) == (0, "true\n")


def test_eval_missing_structure_file(capsys):
    code, _, stderr = run(capsys, "eval", "-f", "phi_bouquet",
                          "-s", "/does/not/exist")
    assert code == 2 and "error" in stderr


def test_eval_unparsable_formula(files, tmp_path, capsys):
    f = tmp_path / "bad.fo"
    f.write_text("(((")
    code, _, stderr = run(capsys, "eval", "-f", str(f), "-s", files["c5"])
    assert code == 2 and "error" in stderr


# ---------------------------------------------------------------------------
# hom
# ---------------------------------------------------------------------------

def test_hom_exists(files, capsys):
    code, stdout, _ = run(capsys, "hom", "-A", files["c5"],
                          "-B", files["k3"], "--exists")
    assert (code, stdout) == (0, "exists: true\n")
    code, stdout, _ = run(capsys, "hom", "-A", files["k3"],
                          "-B", files["c5"], "--exists")
    assert (code, stdout) == (1, "exists: false\n")


def test_hom_count(files, capsys):
    code, stdout, _ = run(capsys, "hom", "-A", files["k3"],
                          "-B", files["k3"], "--count")
    assert (code, stdout) == (0, "homs: 6\n")


def test_hom_count_zero_exits_one(files, capsys):
    code, stdout, _ = run(capsys, "hom", "-A", files["c5"],
                          "-B", files["k3"], "--count",
                          "--require", "injective")
    assert (code, stdout) == (1, "homs: 0\n")


def test_hom_all_lists_maps(files, capsys):
    code, stdout, _ = run(capsys, "hom", "-A", files["c5"],
                          "-B", files["c5"], "--all",
                          "--require", "embedding")
    assert code == 0
    lines = stdout.splitlines()
    hom_lines = [l for l in lines if l.startswith("hom ")]
    assert len(hom_lines) == 10                 # dihedral symmetries of C5
    assert "homs: 10" in lines
    assert "all-embedding: true" in lines
    assert lines == sorted(lines[:10]) + lines[10:]


def test_hom_require_filters_existence(files, capsys):
    code, stdout, _ = run(capsys, "hom", "-A", files["c6"],
                          "-B", files["k3"], "--exists",
                          "--require", "embedding")
    assert (code, stdout) == (1, "exists: false\n")


# ---------------------------------------------------------------------------
# minor / chrom
# ---------------------------------------------------------------------------

def test_minor_builtin_pattern(files, capsys):
    code, stdout, _ = run(capsys, "minor", "-G", files["w5"], "-H", "k4")
    assert (code, stdout) == (0, "minor: true\n")
    code, stdout, _ = run(capsys, "minor", "-G", files["c5"], "-H", "k4")
    assert (code, stdout) == (1, "minor: false\n")


def test_minor_pattern_from_file(files, capsys):
    code, stdout, _ = run(capsys, "minor", "-G", files["w5"],
                          "-H", files["k4"])
    assert (code, stdout) == (0, "minor: true\n")


def test_chrom(files, capsys):
    code, stdout, _ = run(capsys, "chrom", "-G", files["w5"])
    assert (code, stdout) == (0, "4\n")
    code, stdout, _ = run(capsys, "chrom", "-G", files["c6"])
    assert (code, stdout) == (0, "2\n")


# ---------------------------------------------------------------------------
# bottleneck
# ---------------------------------------------------------------------------

def test_bottleneck_found(files, capsys):
    code, stdout, _ = run(capsys, "bottleneck", "-G", files["w5"],
                          "-r", "1", "-m", "2")
    assert code == 0
    lines = stdout.splitlines()
    assert lines[0].startswith("S:")
    assert lines[1] == "A: 1 3"
    assert lines[2] == "complete: true"


def test_bottleneck_none(files, capsys):
    code, stdout, _ = run(capsys, "bottleneck", "-G", files["k3"],
                          "-r", "2", "-m", "3")
    assert (code, stdout) == (1, "none\n")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_passing_suite(capsys):
    code, stdout, _ = run(capsys, "verify", "lemma-3-2")
    assert code == 0
    assert "lemma-3-2: PASS" in stdout
    assert "FAIL" not in stdout


def test_verify_failing_suite_lists_witnesses(capsys):
    code, stdout, _ = run(capsys, "verify", "thm-5-8-witnesses")
    assert code == 1
    assert "FAIL thm-5-8-witnesses hom D_4 -> K_4 exists" in stdout
    assert stdout.rstrip().endswith("thm-5-8-witnesses: FAIL (1062 checks, 4 failures)")


def test_verify_unknown_suite(capsys):
    code, _, stderr = run(capsys, "verify", "nope")
    assert code == 2
    assert "unknown suite" in stderr


def test_verify_accepts_jobs(capsys):
    code, stdout, _ = run(capsys, "verify", "lemma-5-2-injective",
                          "--jobs", "2")
    assert code == 0 and "PASS" in stdout


# ---------------------------------------------------------------------------
# top-level argument handling
# ---------------------------------------------------------------------------

def test_no_arguments_is_usage_error(capsys):
    assert run(capsys)[0] == 2


def test_unknown_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_budget_exhaustion_exits_one(files, capsys, monkeypatch):
    from fmtlab import solver

    def exhausted(*a, **k):
        raise solver.BudgetExceededError(10 ** 8, 0)
    monkeypatch.setattr("fmtlab.minors.has_minor", exhausted)
    code, _, stderr = run(capsys, "minor", "-G", files["w5"], "-H", "k4")
    assert code == 1
    assert "budget" in stderr.lower()
