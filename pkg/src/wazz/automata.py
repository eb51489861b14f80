"""Weighted automata on free finitely generated carriers.

An automaton is the structure map of a coalgebra on S^n (or Delta^n for the
subconvex tags): an output functional plus one transition matrix per letter,
with c_a(e_j) stored as column j.  Words act by left matrix products, so the
weight of w = a1..ak from configuration x is out . (M_ak ... M_a1 x).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .formats import LineReader, ParseError, fmt_rat, fmt_vec, parse_rat
from .linalg import Mat, closure_under_maps, is_integral, vdot, vector, zeros


class SemiringTag(Enum):
    NAT = "nat"
    INT = "int"
    QPLUS = "qplus"
    Q = "q"
    RPLUS = "rplus"
    REAL = "real"
    UNIT = "unit"
    PCA = "pca"

    @property
    def integral(self):
        return self in (SemiringTag.NAT, SemiringTag.INT)

    @property
    def nonneg(self):
        return self in (SemiringTag.NAT, SemiringTag.QPLUS, SemiringTag.RPLUS,
                        SemiringTag.UNIT, SemiringTag.PCA)

    @property
    def completion(self):
        """The ring completion the tag embeds into (an exactly representable
        stand-in for the reals in the RPLUS/UNIT/PCA cases)."""
        return _COMPLETION[self]

    @property
    def closure_ring(self):
        return "Z" if self.completion is SemiringTag.INT else "Q"

    def scalar_ok(self, q):
        if self.integral and not (isinstance(q, int) or q.denominator == 1):
            return False
        if self.nonneg and q < 0:
            return False
        if self in (SemiringTag.UNIT, SemiringTag.PCA) and not 0 <= q <= 1:
            return False
        return True


_COMPLETION = {
    SemiringTag.NAT: SemiringTag.INT,
    SemiringTag.INT: SemiringTag.INT,
    SemiringTag.QPLUS: SemiringTag.Q,
    SemiringTag.Q: SemiringTag.Q,
    SemiringTag.RPLUS: SemiringTag.REAL,
    SemiringTag.REAL: SemiringTag.REAL,
    SemiringTag.UNIT: SemiringTag.REAL,
    SemiringTag.PCA: SemiringTag.REAL,
}


class NotEquivalent(Exception):
    """Raised where equal traces are a precondition and they are not equal."""

    def __init__(self, message="traces differ", word=None):
        super().__init__(message)
        self.word = word


@dataclass(frozen=True)
class WeightedAutomaton:
    tag: SemiringTag
    n: int
    alphabet: tuple
    out: tuple
    trans: tuple  # one n x n Mat per alphabet symbol, same order

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "out", vector(self.out))
        object.__setattr__(self, "trans", tuple(self.trans))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        if len(self.out) != self.n:
            raise ValueError("output vector has wrong length")
        if len(self.trans) != len(self.alphabet):
            raise ValueError("one transition matrix per symbol required")
        for m in self.trans:
            if m.nrows != self.n or m.ncols != self.n:
                raise ValueError("transition matrix has wrong shape")
        for q in self.out:
            if not self.tag.scalar_ok(q):
                raise ValueError(f"output entry {fmt_rat(q)} violates tag {self.tag.value}")
        for m in self.trans:
            for row in m.rows:
                for q in row:
                    if self.tag.integral and not (isinstance(q, int) or q.denominator == 1):
                        raise ValueError(f"entry {fmt_rat(q)} violates tag {self.tag.value}")
                    if self.tag.nonneg and q < 0:
                        raise ValueError(f"entry {fmt_rat(q)} violates tag {self.tag.value}")
        if self.tag is SemiringTag.UNIT:
            for m in self.trans:
                for j in range(self.n):
                    if sum(m.col(j)) > 1:
                        raise ValueError("column sums must stay within 1 for unit tag")
        if self.tag is SemiringTag.PCA:
            for j in range(self.n):
                total = self.out[j] + sum(sum(m.col(j)) for m in self.trans)
                if total > 1:
                    raise ValueError(
                        f"state {j + 1}: output plus transition mass exceeds 1")

    def mat(self, symbol):
        try:
            return self.trans[self.alphabet.index(symbol)]
        except ValueError:
            raise ValueError(f"unknown symbol {symbol!r}") from None


@dataclass
class Trace:
    """Word weights up to a fixed depth."""

    depth: int
    values: dict

    def __getitem__(self, word):
        return self.values[tuple(word)]

    def items(self):
        return sorted(self.values.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __eq__(self, other):
        return (isinstance(other, Trace) and self.depth == other.depth
                and self.values == other.values)


def step(aut, x, symbol):
    """One transition: M_symbol applied to the configuration."""
    if len(x) != aut.n:
        raise ValueError("configuration has wrong length")
    return aut.mat(symbol).apply(x)


def trace(aut, x, depth):
    """All word weights out . c_w(x) for |w| <= depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    x = vector(x)
    values = {(): vdot(aut.out, x)}
    frontier = [((), x)]
    for _ in range(depth):
        nxt = []
        for word, v in frontier:
            for a in aut.alphabet:
                w = word + (a,)
                image = aut.mat(a).apply(v)
                values[w] = vdot(aut.out, image)
                nxt.append((w, image))
        frontier = nxt
    return Trace(depth, values)


def separating_word(aut1, x1, aut2, x2, maxlen):
    """Shortest word (alphabet-order tie break) where the weights differ."""
    frontier = [((), vector(x1), vector(x2))]
    while frontier:
        nxt = []
        for word, v1, v2 in frontier:
            if vdot(aut1.out, v1) != vdot(aut2.out, v2):
                return word
            if len(word) < maxlen:
                for a in aut1.alphabet:
                    nxt.append((word + (a,), aut1.mat(a).apply(v1), aut2.mat(a).apply(v2)))
        frontier = nxt
    return None


def _check_compatible(aut1, aut2):
    if aut1.tag is not aut2.tag:
        raise ValueError("automata have different semiring tags")
    if aut1.alphabet != aut2.alphabet:
        raise ValueError("automata have different alphabets")


def pair_submodule(aut1, x1, aut2, x2):
    """Closure of the paired configuration orbit, with the common coalgebra.

    Returns (generators of Z over the ring completion, d), where Z is the
    submodule generated by all word images of (x1, x2) under the paired
    transitions, and d restricts both output functionals (they agree on Z).
    Raises NotEquivalent if they do not agree on some generator, which
    happens exactly when the traces differ.
    """
    _check_compatible(aut1, aut2)
    if len(x1) != aut1.n or len(x2) != aut2.n:
        raise ValueError("configuration has wrong length")
    completion = aut1.tag.completion
    maps = [Mat.block_diag(aut1.mat(a), aut2.mat(a)) for a in aut1.alphabet]
    start = tuple(x1) + tuple(x2)
    basis = closure_under_maps(start, maps, aut1.tag.closure_ring)
    difference = vector(aut1.out) + tuple(-q for q in vector(aut2.out))
    for g in basis:
        if vdot(difference, g) != 0:
            raise NotEquivalent("output functionals differ on the pair closure")
    paired = WeightedAutomaton(
        tag=completion,
        n=aut1.n + aut2.n,
        alphabet=aut1.alphabet,
        out=vector(aut1.out) + zeros(aut2.n),
        trans=tuple(maps),
    )
    return [vector(g) for g in basis], paired


@dataclass(frozen=True)
class EquivResult:
    equivalent: bool
    basis: tuple = None       # pair-closure generators when equivalent
    word: tuple = None        # separating word otherwise

    def __bool__(self):
        return self.equivalent


def equivalent(aut1, x1, aut2, x2):
    """Exact trace-equivalence decision with a checkable certificate."""
    _check_compatible(aut1, aut2)
    try:
        basis, _ = pair_submodule(aut1, x1, aut2, x2)
    except NotEquivalent:
        word = separating_word(aut1, x1, aut2, x2, aut1.n + aut2.n)
        if word is None:
            raise AssertionError("closure rejected but no separating word found")
        return EquivResult(False, word=word)
    return EquivResult(True, basis=tuple(basis))


def extend_scalars(aut):
    """The same matrices read over the ring completion of the tag."""
    return WeightedAutomaton(tag=aut.tag.completion, n=aut.n,
                             alphabet=aut.alphabet, out=aut.out, trans=aut.trans)


# ---------------------------------------------------------------------------
# file format


def parse_automaton(text, source="<automaton>"):
    """Strict parser for the line-oriented automaton format.

    Returns (automaton, state) where state is the optional distinguished
    configuration carried by the file (None when absent).
    """
    r = LineReader(text, source)
    toks = r.next_keyword("semiring")
    if len(toks) != 1:
        r.error("expected exactly one semiring tag")
    try:
        tag = SemiringTag(toks[0])
    except ValueError:
        r.error(f"unknown semiring {toks[0]!r}")
    alphabet = tuple(r.next_keyword("alphabet"))
    if not alphabet:
        r.error("alphabet must not be empty")
    if len(set(alphabet)) != len(alphabet):
        r.error("duplicate alphabet symbols")
    toks = r.next_keyword("states")
    if len(toks) != 1:
        r.error("expected exactly one state count")
    n = r.parse_int(toks[0], minimum=1)
    out = r.parse_rats(r.next_keyword("output"), n)
    for q in out:
        if not tag.scalar_ok(q):
            r.error(f"output entry {fmt_rat(q)} violates tag {tag.value}")
    trans = {}
    state = None
    while r:
        toks = r.next_tokens()
        if toks[0] == "trans":
            if len(toks) != 2:
                r.error("expected: trans <symbol>")
            sym = toks[1]
            if sym not in alphabet:
                r.error(f"unknown symbol {sym!r}")
            if sym in trans:
                r.error(f"duplicate transition block for {sym!r}")
            rows = []
            for _ in range(n):
                row = r.next_rat_row(n)
                for q in row:
                    if tag.integral and q.denominator != 1:
                        r.error(f"entry {fmt_rat(q)} must be an integer")
                    if tag.nonneg and q < 0:
                        r.error(f"entry {fmt_rat(q)} must be nonnegative")
                rows.append(row)
            # file rows are images of basis vectors; columns internally
            trans[sym] = Mat(rows).transpose()
        elif toks[0] == "state":
            if state is not None:
                r.error("duplicate state line")
            state = r.parse_rats(toks[1:], n)
        else:
            r.error(f"unexpected directive {toks[0]!r}")
    missing = [a for a in alphabet if a not in trans]
    if missing:
        r.error(f"missing transition block for {missing[0]!r}")
    try:
        aut = WeightedAutomaton(tag=tag, n=n, alphabet=alphabet, out=out,
                                trans=tuple(trans[a] for a in alphabet))
    except ValueError as exc:
        raise ParseError(source, r.last_line, str(exc)) from None
    return aut, state


def automaton_to_text(aut, state=None):
    lines = [f"semiring {aut.tag.value}",
             "alphabet " + " ".join(aut.alphabet),
             f"states {aut.n}",
             "output " + fmt_vec(aut.out)]
    for a in aut.alphabet:
        lines.append(f"trans {a}")
        m = aut.mat(a).transpose()  # rows back to images of basis vectors
        for row in m.rows:
            lines.append(fmt_vec(row))
    if state is not None:
        lines.append("state " + fmt_vec(state))
    return "\n".join(lines) + "\n"
