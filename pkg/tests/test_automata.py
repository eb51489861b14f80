import random
from fractions import Fraction as F

import pytest

from wazz.automata import (NotEquivalent, SemiringTag, WeightedAutomaton,
                           automaton_to_text, equivalent, extend_scalars,
                           pair_submodule, parse_automaton, separating_word,
                           step, trace)
from wazz.formats import ParseError
from wazz.linalg import Mat, unit, vector, zeros

from genrandom import lifted_pair, rand_automaton, rand_config

T = SemiringTag


def half_loop():
    """1 state, out 1/2, a-loop of weight 1/2."""
    return WeightedAutomaton(tag=T.QPLUS, n=1, alphabet=("a",),
                             out=vector(["1/2"]), trans=(Mat([["1/2"]]),))


def swap_pair():
    """2 states, out (1/2,1/2), a swaps the states with weight 1/2."""
    return WeightedAutomaton(tag=T.QPLUS, n=2, alphabet=("a",),
                             out=vector(["1/2", "1/2"]),
                             trans=(Mat([[0, "1/2"], ["1/2", 0]]),))


class TestStepTrace:
    def test_scalar_step(self):
        aut = half_loop()
        assert step(aut, vector([1]), "a") == vector(["1/2"])

    def test_zero_config(self):
        assert step(swap_pair(), zeros(2), "a") == zeros(2)

    def test_identity_matrix(self):
        aut = WeightedAutomaton(tag=T.Q, n=2, alphabet=("a",),
                                out=vector([1, 0]), trans=(Mat.identity(2),))
        x = vector(["2/3", 5])
        assert step(aut, x, "a") == x

    def test_unknown_symbol(self):
        with pytest.raises(ValueError):
            step(half_loop(), vector([1]), "b")

    def test_trace_halving(self):
        aut = WeightedAutomaton(tag=T.QPLUS, n=1, alphabet=("a",),
                                out=vector([1]), trans=(Mat([["1/2"]]),))
        tr = trace(aut, vector([1]), 2)
        assert tr[()] == 1
        assert tr[("a",)] == F(1, 2)
        assert tr[("a", "a")] == F(1, 4)

    def test_trace_zero_cases(self):
        aut = swap_pair()
        assert all(v == 0 for _, v in trace(aut, zeros(2), 3).items())
        dead = WeightedAutomaton(tag=T.QPLUS, n=2, alphabet=("a",),
                                 out=zeros(2), trans=aut.trans)
        assert all(v == 0 for _, v in trace(dead, vector([1, 0]), 3).items())


class TestPairing:
    def test_identical_automata(self):
        aut = swap_pair()
        basis, paired = pair_submodule(aut, unit(2, 0), aut, unit(2, 0))
        for g in basis:
            assert g[:2] == g[2:]  # the diagonal
        assert paired.tag is T.Q

    def test_worked_pair(self):
        basis, paired = pair_submodule(half_loop(), vector([1]), swap_pair(), unit(2, 0))
        assert basis == [vector([1, 1, 0]), vector(["1/2", 0, "1/2"])]
        tr = trace(paired, vector([1, 1, 0]), 3)
        assert tr == trace(half_loop(), vector([1]), 3)
        assert tr == trace(swap_pair(), unit(2, 0), 3)

    def test_tampered_output(self):
        bad = WeightedAutomaton(tag=T.QPLUS, n=2, alphabet=("a",),
                                out=vector(["1/2", 1]), trans=swap_pair().trans)
        with pytest.raises(NotEquivalent):
            pair_submodule(half_loop(), vector([1]), bad, unit(2, 0))


class TestEquivalent:
    def test_worked_pair_true(self):
        # oracle: traces to depth n1+n2 agree
        d = 3
        assert trace(half_loop(), vector([1]), d) == trace(swap_pair(), unit(2, 0), d)
        res = equivalent(half_loop(), vector([1]), swap_pair(), unit(2, 0))
        assert res.equivalent and res.basis

    def test_self_equivalence(self):
        aut = swap_pair()
        assert equivalent(aut, unit(2, 0), aut, unit(2, 0)).equivalent

    def test_output_mismatch_word_epsilon(self):
        one = WeightedAutomaton(tag=T.NAT, n=1, alphabet=("a",),
                                out=vector([1]), trans=(Mat([[0]]),))
        zero = WeightedAutomaton(tag=T.NAT, n=1, alphabet=("a",),
                                 out=vector([0]), trans=(Mat([[0]]),))
        res = equivalent(one, vector([1]), zero, vector([1]))
        assert not res.equivalent and res.word == ()

    def test_tampered_pair_word_a(self):
        bad = WeightedAutomaton(tag=T.QPLUS, n=2, alphabet=("a",),
                                out=vector(["1/2", 1]), trans=swap_pair().trans)
        res = equivalent(half_loop(), vector([1]), bad, unit(2, 0))
        assert not res.equivalent and res.word == ("a",)

    @pytest.mark.parametrize("tag", list(T))
    def test_matches_depth_oracle(self, tag):
        rng = random.Random("oracle-" + tag.value)
        for i in range(60):
            alphabet = ("a", "b")[: rng.randint(1, 2)]
            if i % 2:
                n1 = rng.randint(1, 3)
                aut1 = rand_automaton(rng, tag, n1, alphabet)
                n2 = rng.randint(1, 3)
                aut2 = rand_automaton(rng, tag, n2, alphabet)
                x1 = rand_config(rng, tag, n1)
                x2 = rand_config(rng, tag, n2)
            else:
                aut1, x1, aut2, x2 = lifted_pair(rng, tag, rng.randint(1, 2),
                                                 rng.randint(0, 2), alphabet)
            depth = aut1.n + aut2.n
            oracle = trace(aut1, x1, depth) == trace(aut2, x2, depth)
            res = equivalent(aut1, x1, aut2, x2)
            assert res.equivalent == oracle
            if not res.equivalent:
                d = len(res.word)
                assert trace(aut1, x1, d)[res.word] != trace(aut2, x2, d)[res.word]

    def test_lifted_pairs_always_equivalent(self):
        rng = random.Random(71)
        for tag in T:
            for _ in range(10):
                aut1, x1, aut2, x2 = lifted_pair(rng, tag, rng.randint(1, 2),
                                                 rng.randint(1, 2), ("a", "b"))
                assert equivalent(aut1, x1, aut2, x2).equivalent


class TestExtendScalars:
    def test_tag_map(self):
        rng = random.Random(73)
        for tag, target in [(T.NAT, T.INT), (T.QPLUS, T.Q), (T.RPLUS, T.REAL),
                            (T.UNIT, T.REAL), (T.PCA, T.REAL)]:
            aut = rand_automaton(rng, tag, 2, ("a",))
            ext = extend_scalars(aut)
            assert ext.tag is target
            assert ext.out == aut.out and ext.trans == aut.trans
            assert extend_scalars(ext).tag is target  # idempotent on completions
            x = rand_config(rng, tag, 2)
            assert trace(ext, x, 4) == trace(aut, x, 4)


class TestCubicTupleFormer:
    """Membership identities of the cubic tuple former on finite sets."""

    def _member(self, scalar_ok, carrier, element):
        o, parts = element
        return scalar_ok(o) and all(p in carrier for p in parts)

    def test_intersection_identity(self):
        rng = random.Random(79)
        sub, ring = T.QPLUS, T.Q
        for _ in range(200):
            universe = [vector([rng.randint(-2, 2)]) for _ in range(6)]
            x_set = set(rng.sample(universe, 3))
            y_set = set(rng.sample(universe, 3))
            o = F(rng.randint(-2, 2), rng.randint(1, 2))
            parts = tuple(rng.choice(universe) for _ in range(2))
            elem = (o, parts)
            lhs = (self._member(ring.scalar_ok, x_set, elem)
                   and self._member(sub.scalar_ok, y_set, elem))
            rhs = self._member(sub.scalar_ok, x_set & y_set, elem)
            assert lhs == rhs

    def test_projection_preimage_identity(self):
        rng = random.Random(83)
        sub, ring = T.QPLUS, T.Q
        for _ in range(200):
            pool1 = [vector([rng.randint(-2, 2)]) for _ in range(4)]
            pool2 = [vector([rng.randint(-2, 2)]) for _ in range(4)]
            y1 = set(rng.sample(pool1, 2))
            y2 = set(rng.sample(pool2, 2))
            o = F(rng.randint(-2, 2), rng.randint(1, 2))
            pairs = tuple((rng.choice(pool1), rng.choice(pool2)) for _ in range(2))
            elem1 = (o, tuple(p[0] for p in pairs))
            elem2 = (o, tuple(p[1] for p in pairs))
            lhs = (self._member(sub.scalar_ok, y1, elem1)
                   and self._member(sub.scalar_ok, y2, elem2))
            rhs = self._member(sub.scalar_ok, set((a, b) for a in y1 for b in y2),
                               (o, pairs))
            assert lhs == rhs


class TestFileFormat:
    SAMPLE = """\
# a two-state machine
semiring qplus
alphabet a
states 2
output 1/2 1/2
trans a
0 1/2
1/2 0
state 1 0
"""

    def test_parse(self):
        aut, state = parse_automaton(self.SAMPLE, "sample.wa")
        assert aut == swap_pair()
        assert state == vector([1, 0])

    def test_roundtrip(self):
        rng = random.Random(89)
        for tag in T:
            aut = rand_automaton(rng, tag, rng.randint(1, 3), ("a", "b"))
            x = rand_config(rng, tag, aut.n)
            text = automaton_to_text(aut, x)
            aut2, x2 = parse_automaton(text)
            assert aut2 == aut and x2 == x
            assert automaton_to_text(aut2, x2) == text

    def test_column_convention(self):
        text = ("semiring q\nalphabet a\nstates 2\noutput 1 0\n"
                "trans a\n0 1\n0 0\n")
        aut, _ = parse_automaton(text)
        # row 1 of the file is the image of e_1, stored as column 1
        assert aut.mat("a").col(0) == vector([0, 1])

    @pytest.mark.parametrize("mutation, lineno", [
        ("semiring foo", 1),
        ("alphabet a a", 2),
        ("states x", 3),
        ("output 1/2", 4),
        ("output 1/2 0.5", 4),
    ])
    def test_errors_carry_line_numbers(self, mutation, lineno):
        lines = self.SAMPLE.splitlines()
        lines[lineno] = mutation  # line 0 is the comment
        with pytest.raises(ParseError) as err:
            parse_automaton("\n".join(lines), "bad.wa")
        assert err.value.source == "bad.wa"
        assert err.value.line == lineno + 1

    def test_tag_violation(self):
        text = ("semiring nat\nalphabet a\nstates 1\noutput 1\ntrans a\n1/2\n")
        with pytest.raises(ParseError) as err:
            parse_automaton(text)
        assert err.value.line == 6

    def test_missing_block(self):
        text = "semiring q\nalphabet a b\nstates 1\noutput 1\ntrans a\n0\n"
        with pytest.raises(ParseError):
            parse_automaton(text)


class TestTraceNaturality:
    def test_paired_traces_match(self):
        rng = random.Random(97)
        for tag in (T.NAT, T.QPLUS, T.UNIT, T.PCA):
            for _ in range(10):
                aut1, x1, aut2, x2 = lifted_pair(rng, tag, rng.randint(1, 2),
                                                 rng.randint(0, 2), ("a", "b"))
                basis, paired = pair_submodule(aut1, x1, aut2, x2)
                depth = aut1.n + aut2.n
                tr = trace(paired, tuple(x1) + tuple(x2), depth)
                assert tr == trace(aut1, x1, depth)
                assert tr == trace(aut2, x2, depth)
