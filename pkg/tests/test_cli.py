import random

from wazz.cli import main
from wazz.automata import SemiringTag, automaton_to_text
from wazz.zigzag import parse_zigzag

from genrandom import lifted_pair

HALF_LOOP = """\
semiring qplus
alphabet a
states 1
output 1/2
trans a
1/2
state 1
"""

SWAP = """\
semiring qplus
alphabet a
states 2
output 1/2 1/2
trans a
0 1/2
1/2 0
state 1 0
"""

SWAP_BAD = SWAP.replace("output 1/2 1/2", "output 1/2 1")

PCA_LOOP = HALF_LOOP.replace("semiring qplus", "semiring pca")


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestTrace:
    def test_trace_table(self, tmp_path, capsys):
        path = write(tmp_path, "a.wa", HALF_LOOP)
        assert main(["trace", path, "--depth", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out == ["eps 1/2", "a 1/4", "aa 1/8"]

    def test_state_index(self, tmp_path, capsys):
        path = write(tmp_path, "b.wa", SWAP)
        assert main(["trace", path, "--state-index", "2", "--depth", "1"]) == 0
        assert capsys.readouterr().out.splitlines() == ["eps 1/2", "a 1/4"]


class TestEquiv:
    def test_equivalent(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP)
        assert main(["equiv", a, b]) == 0
        assert "EQUIVALENT" in capsys.readouterr().out

    def test_not_equivalent(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP_BAD)
        assert main(["equiv", a, b]) == 1
        assert "NOT EQUIVALENT, separating word: a" in capsys.readouterr().out

    def test_tag_mismatch_is_usage_error(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", PCA_LOOP)
        assert main(["equiv", a, b]) == 2
        assert "semiring mismatch" in capsys.readouterr().err

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = write(tmp_path, "bad.wa", "semiring nope\n")
        assert main(["equiv", bad, bad]) == 2
        err = capsys.readouterr().err
        assert "bad.wa:1" in err


class TestZigzagVerify:
    def test_zigzag_then_verify(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP)
        out = str(tmp_path / "w.zz")
        assert main(["zigzag", a, b, "-o", out]) == 0
        assert main(["verify", out]) == 0
        assert "VALID" in capsys.readouterr().out

    def test_zigzag_pca_pipeline(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", PCA_LOOP)
        out = str(tmp_path / "w.zz")
        assert main(["zigzag", a, a, "-o", out]) == 0
        witness = parse_zigzag((tmp_path / "w.zz").read_text(), "w.zz")
        assert len(witness.nodes) == 5
        assert main(["verify", out]) == 0

    def test_zigzag_not_equivalent(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP_BAD)
        assert main(["zigzag", a, b]) == 1

    def test_verify_catches_tampering(self, tmp_path, capsys):
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP)
        out = str(tmp_path / "w.zz")
        main(["zigzag", a, b, "-o", out])
        text = (tmp_path / "w.zz").read_text()
        tampered = text.replace("at 1 1 1 0", "at 1 1 0 1")
        (tmp_path / "w.zz").write_text(tampered)
        assert main(["verify", out]) == 1
        assert "INVALID" in capsys.readouterr().out

    def test_roundtrip_through_cli_files(self, tmp_path):
        rng = random.Random("cli-roundtrip")
        for tag in (SemiringTag.NAT, SemiringTag.UNIT, SemiringTag.PCA):
            aut1, x1, aut2, x2 = lifted_pair(rng, tag, 2, 1, ("a", "b"))
            a = write(tmp_path, f"{tag.value}-1.wa", automaton_to_text(aut1, x1))
            b = write(tmp_path, f"{tag.value}-2.wa", automaton_to_text(aut2, x2))
            out = str(tmp_path / f"{tag.value}.zz")
            assert main(["zigzag", a, b, "-o", out]) == 0
            assert main(["verify", out]) == 0


class TestHilbert:
    def test_staircase(self, tmp_path, capsys):
        cone = write(tmp_path, "cone.txt", "2 2\n1 0\n-1 1\n")
        assert main(["hilbert", cone]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["1 0", "1 1"]


class TestPolytope:
    SIMPLEX_H = "hrep 2\nineq -1 0 0\nineq 0 -1 0\nineq 1 1 1\n"

    def test_h_to_v(self, tmp_path, capsys):
        h = write(tmp_path, "s.hrep", self.SIMPLEX_H)
        assert main(["polytope", "tovertices", h]) == 0
        out = capsys.readouterr().out
        assert "point 0 0" in out and "point 1 0" in out and "point 0 1" in out

    def test_empty(self, tmp_path, capsys):
        h = write(tmp_path, "e.hrep", "hrep 1\nineq -1 -1\nineq 1 0\n")
        assert main(["polytope", "tovertices", h]) == 1
        assert "empty" in capsys.readouterr().out

    def test_v_to_h_roundtrip(self, tmp_path, capsys):
        h = write(tmp_path, "s.hrep", self.SIMPLEX_H)
        main(["polytope", "tovertices", h])
        vtext = capsys.readouterr().out
        v = write(tmp_path, "s.vrep", vtext)
        assert main(["polytope", "tofacets", v]) == 0
        htext = capsys.readouterr().out
        assert htext.startswith("hrep 2")
        assert len(htext.strip().splitlines()) == 4  # three facets survive


class TestGauge:
    def test_simplex_value(self, tmp_path, capsys):
        p = write(tmp_path, "d2.pca", "pca 2\ngen 1 0\ngen 0 1\n")
        assert main(["gauge", p, "1/2", "1/4"]) == 0
        assert capsys.readouterr().out.strip() == "3/4"

    def test_pyramid_value(self, tmp_path, capsys):
        p = write(tmp_path, "pyr.pca", "pca 2\ngen 1/2 0\ngen 0 1\n")
        assert main(["gauge", p, "1", "1"]) == 0
        assert capsys.readouterr().out.strip() == "3"

    def test_infinite(self, tmp_path, capsys):
        p = write(tmp_path, "d1.pca", "pca 1\ngen 1\n")
        assert main(["gauge", p, "-1"]) == 0
        assert capsys.readouterr().out.strip() == "inf"

    def test_usage_error(self, tmp_path, capsys):
        p = write(tmp_path, "d1.pca", "pca 1\ngen 1\n")
        assert main(["gauge", p, "1", "2"]) == 2


class TestTraceDefaults:
    def test_default_depth_is_state_count(self, tmp_path, capsys):
        path = write(tmp_path, "b.wa", SWAP)
        assert main(["trace", path]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3  # eps, a, aa for 2 states over one letter


class TestCrossProcessDeterminism:
    def test_witness_bytes_stable_under_hash_seeds(self, tmp_path):
        import subprocess, sys
        a = write(tmp_path, "a.wa", HALF_LOOP)
        b = write(tmp_path, "b.wa", SWAP)
        outputs = set()
        for seed in ("0", "1", "2"):
            out = tmp_path / f"w{seed}.zz"
            env = {"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"}
            subprocess.run([sys.executable, "-m", "wazz.cli", "zigzag", a, b,
                            "-o", str(out)], check=True, env=env,
                           capture_output=True)
            outputs.add(out.read_bytes())
        assert len(outputs) == 1
