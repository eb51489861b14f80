"""Zig-zag equivalence witnesses: construction and independent verification.

A witness is a chain of coalgebra nodes connected by morphisms, alternating
between source nodes (outgoing arrows, carrying a relating element) and sink
nodes (incoming arrows, which must have free carriers).  The verifier
re-checks every claim from the witness data alone: carrier memberships by
exact LP / lattice / monoid tests, morphism squares by matrix identities,
and the relating chain by direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .automata import (NotEquivalent, SemiringTag, pair_submodule,
                       separating_word)
from .formats import LineReader, fmt_rat, fmt_vec
from .hilbert import nat_restriction, qplus_restriction_by_scaling
from .linalg import (Lattice, Mat, as_int_vec, closure_under_maps, hnf,
                     is_integral, is_nonneg, lattice_member, rref, solve, unit,
                     vdot, vector, zeros)
from .pca import LinearCoalgebra, pyramid_extension, reduce_invariant_set
from .polyhedra import (PRODUCT, SCALED, INFINITY, PcaPolytope, cone_member,
                        cone_restriction, gauge, pca_member, simplex_restriction)

FREE_MODULE = "FREE_MODULE"
GENERATED_MODULE = "GENERATED_MODULE"
FREE_PCA = "FREE_PCA"
GENERATED_PCA = "GENERATED_PCA"

KINDS = (FREE_MODULE, GENERATED_MODULE, FREE_PCA, GENERATED_PCA)
CUBIC = "cubic"
GHAT = "ghat"


@dataclass(frozen=True)
class ZigZagNode:
    """A coalgebra node: carrier kind and generators, plus the structure map
    acting on ambient coordinates."""

    kind: str
    dim: int
    generators: tuple
    out: tuple
    trans: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(vector(g) for g in self.generators))
        object.__setattr__(self, "out", vector(self.out))
        object.__setattr__(self, "trans", tuple(self.trans))
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        for g in self.generators:
            if len(g) != self.dim:
                raise ValueError("generator of wrong dimension")
        if len(self.out) != self.dim:
            raise ValueError("output functional of wrong dimension")
        for m in self.trans:
            if m.nrows != self.dim or m.ncols != self.dim:
                raise ValueError("transition matrix of wrong shape")

    @property
    def is_pca(self):
        return self.kind in (FREE_PCA, GENERATED_PCA)

    @property
    def is_free(self):
        return self.kind in (FREE_MODULE, FREE_PCA)


@dataclass(frozen=True)
class Morphism:
    src: int
    dst: int
    matrix: Mat


@dataclass(frozen=True)
class ZigZag:
    functor: str
    tag: SemiringTag
    alphabet: tuple
    nodes: tuple
    morphisms: tuple
    relating: tuple      # ((node index, element), ...) at source nodes
    endpoints: tuple     # (x1 at node 0, x2 at the last node)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        object.__setattr__(self, "relating",
                           tuple((i, vector(v)) for i, v in self.relating))
        x1, x2 = self.endpoints
        object.__setattr__(self, "endpoints", (vector(x1), vector(x2)))

    def relating_at(self, index):
        for i, v in self.relating:
            if i == index:
                return v
        return None


# ---------------------------------------------------------------------------
# construction


_CUBIC_TAGS = (SemiringTag.NAT, SemiringTag.INT, SemiringTag.QPLUS, SemiringTag.Q,
               SemiringTag.RPLUS, SemiringTag.REAL, SemiringTag.UNIT)


def _projections(n1, n2):
    p1 = Mat([unit(n1 + n2, i) for i in range(n1)], ncols=n1 + n2)
    p2 = Mat([unit(n1 + n2, n1 + i) for i in range(n2)], ncols=n1 + n2)
    return p1, p2


def _endpoint_node(aut, pca):
    kind = FREE_PCA if pca else FREE_MODULE
    return ZigZagNode(kind=kind, dim=aut.n,
                      generators=tuple(unit(aut.n, i) for i in range(aut.n)),
                      out=aut.out, trans=aut.trans)


def cubic_zigzag(aut1, x1, aut2, x2):
    """Span witness for the cubic functor tags: both endpoints receive a
    projection from the restricted pair closure.

    The middle carrier is Z ∩ (S^n1 x S^n2), with generators computed per
    tag: the N-monoid generators (Hilbert) for NAT, the module basis itself
    for the ring tags, cone generators for the nonnegative field tags, and
    the product-of-simplices vertices for the unit interval.
    """
    if aut1.tag not in _CUBIC_TAGS:
        raise ValueError(f"tag {aut1.tag.value} is not a cubic-pipeline tag")
    try:
        basis, paired = pair_submodule(aut1, x1, aut2, x2)
    except NotEquivalent:
        word = separating_word(aut1, x1, aut2, x2, aut1.n + aut2.n)
        raise NotEquivalent("traces differ", word=word) from None
    tag = aut1.tag
    n1, n2, m = aut1.n, aut2.n, aut1.n + aut2.n
    if tag is SemiringTag.NAT:
        lat = hnf([as_int_vec(g) for g in basis], dim=m) if basis else Lattice(m, ())
        gens = [vector(g) for g in nat_restriction(lat)]
        middle_kind = GENERATED_MODULE
    elif tag in (SemiringTag.INT, SemiringTag.Q, SemiringTag.REAL):
        gens = list(basis)
        middle_kind = GENERATED_MODULE
    elif tag is SemiringTag.QPLUS:
        gens = [vector(g) for g in qplus_restriction_by_scaling(basis)]
        middle_kind = GENERATED_MODULE
    elif tag is SemiringTag.RPLUS:
        gens = cone_restriction(basis)
        middle_kind = GENERATED_MODULE
    else:  # UNIT
        gens = list(simplex_restriction(basis, PRODUCT, n1, n2).generators)
        middle_kind = GENERATED_PCA
    pca = tag is SemiringTag.UNIT
    middle = ZigZagNode(kind=middle_kind, dim=m, generators=tuple(gens),
                        out=paired.out, trans=paired.trans)
    p1, p2 = _projections(n1, n2)
    return ZigZag(
        functor=CUBIC, tag=tag, alphabet=aut1.alphabet,
        nodes=(_endpoint_node(aut1, pca), middle, _endpoint_node(aut2, pca)),
        morphisms=(Morphism(1, 0, p1), Morphism(1, 2, p2)),
        relating=((1, tuple(x1) + tuple(x2)),),
        endpoints=(x1, x2),
    )


def ghat_zigzag(aut1, x1, aut2, x2):
    """Five-node witness for the subconvex functor.

    Pipeline: quotient away invariant zero-output coordinates on both sides,
    pair the quotients over the rationals, restrict the pair space to the
    doubled simplex (the span's middle node), hull each projection with the
    simplex, and enlarge those hulls to free pyramids.
    """
    if aut1.tag is not SemiringTag.PCA or aut2.tag is not SemiringTag.PCA:
        raise ValueError("both automata must carry the subconvex tag")
    if aut1.alphabet != aut2.alphabet:
        raise ValueError("automata have different alphabets")
    word = separating_word(aut1, x1, aut2, x2, aut1.n + aut2.n)
    if word is not None:
        raise NotEquivalent("traces differ", word=word)
    alphabet = aut1.alphabet
    _, q1, psi1 = reduce_invariant_set(aut1)
    _, q2, psi2 = reduce_invariant_set(aut2)
    y1, y2 = psi1.apply(x1), psi2.apply(x2)
    k1, k2, m = q1.n, q2.n, q1.n + q2.n
    maps = [Mat.block_diag(q1.mat(a), q2.mat(a)) for a in alphabet]
    zbasis = closure_under_maps(tuple(y1) + tuple(y2), maps, "Q")
    mid_poly = simplex_restriction(zbasis, SCALED, k1, k2)
    middle = ZigZagNode(kind=GENERATED_PCA, dim=m, generators=mid_poly.generators,
                        out=vector(q1.out) + zeros(k2), trans=tuple(maps))
    p1, p2 = _projections(k1, k2)
    free_nodes = []
    for q, proj in ((q1, p1), (q2, p2)):
        hull = list(unit(q.n, i) for i in range(q.n))
        for g in mid_poly.generators:
            img = proj.apply(g)
            if any(img) and img not in hull:
                hull.append(img)
        coalg = LinearCoalgebra(n=q.n, alphabet=alphabet, out=q.out, trans=q.trans)
        cert = pyramid_extension(PcaPolytope(q.n, tuple(hull)), coalg)
        free_nodes.append(ZigZagNode(kind=FREE_PCA, dim=q.n,
                                     generators=cert.generators,
                                     out=q.out, trans=q.trans))
    return ZigZag(
        functor=GHAT, tag=SemiringTag.PCA, alphabet=alphabet,
        nodes=(_endpoint_node(aut1, True), free_nodes[0], middle,
               free_nodes[1], _endpoint_node(aut2, True)),
        morphisms=(Morphism(0, 1, psi1), Morphism(2, 1, p1),
                   Morphism(2, 3, p2), Morphism(4, 3, psi2)),
        relating=((0, x1), (2, tuple(y1) + tuple(y2)), (4, x2)),
        endpoints=(x1, x2),
    )


# ---------------------------------------------------------------------------
# verification


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    valid: bool
    checks: list

    def failures(self):
        return [c for c in self.checks if not c.ok]


def _nat_monoid_member(gens, v):
    """v in the N-span of nonnegative integer generators (memoized descent)."""
    if not (is_integral(v) and is_nonneg(v)):
        return False
    gens = sorted({as_int_vec(g) for g in gens if any(g)},
                  key=lambda g: -sum(g))
    target = as_int_vec(v)
    memo = {}

    def descend(t):
        if not any(t):
            return True
        if t in memo:
            return memo[t]
        memo[t] = False  # cut cycles; gens are nonzero so none occur
        for g in gens:
            if all(a <= b for a, b in zip(g, t)):
                if descend(tuple(b - a for a, b in zip(g, t))):
                    memo[t] = True
                    break
        return memo[t]

    return descend(target)


def _carrier_member(tag, node, v):
    """Membership of v in the algebra spanned by the node's generators."""
    if node.is_pca:
        if not is_nonneg(v):
            return False
        if not all(is_nonneg(g) for g in node.generators):
            return False  # malformed carrier; node-kind reports the cause
        return pca_member(PcaPolytope(node.dim, node.generators), v)
    gens = node.generators
    if node.kind == FREE_MODULE:
        if not gens:
            return all(a == 0 for a in v)
        coords = solve(Mat.from_cols(gens, nrows=node.dim), v)
        if coords is None:
            return False
        back = Mat.from_cols(gens, nrows=node.dim).apply(coords)
        return back == vector(v) and all(tag.scalar_ok(c) for c in coords)
    # generated module, by tag
    if tag is SemiringTag.NAT:
        if not all(is_integral(g) and is_nonneg(g) for g in gens):
            return False
        return _nat_monoid_member(gens, v)
    if tag is SemiringTag.INT:
        if not all(is_integral(g) for g in gens):
            return False
        if not is_integral(v):
            return False
        lat = hnf([as_int_vec(g) for g in gens], dim=node.dim) if gens else Lattice(node.dim, ())
        return lattice_member(v, lat)
    if tag in (SemiringTag.QPLUS, SemiringTag.RPLUS):
        return cone_member(gens, v)
    if tag in (SemiringTag.Q, SemiringTag.REAL):
        if not gens:
            return all(a == 0 for a in v)
        mat = Mat.from_cols(gens, nrows=node.dim)
        coords = solve(mat, v)
        return coords is not None and mat.apply(coords) == vector(v)
    return False


def _kind_ok(node):
    gens = node.generators
    if node.is_pca and not all(is_nonneg(g) for g in gens):
        return False, "generators must be nonnegative"
    if node.is_free:
        if gens:
            _, _, rank = rref(Mat(gens, ncols=node.dim))
            if rank != len(gens):
                return False, "generators are linearly dependent"
        if node.kind == FREE_PCA and len(gens) != node.dim:
            return False, "free subconvex carrier needs dim-many generators"
    return True, ""


def _coalgebra_self_map_ok(z, node):
    """The structure map sends every generator into the functor at the carrier."""
    if node.is_pca and not all(is_nonneg(g) for g in node.generators):
        return False, "carrier generators must be nonnegative"
    poly = PcaPolytope(node.dim, node.generators) if node.is_pca else None
    for g in node.generators:
        o = vdot(node.out, g)
        if z.functor == GHAT:
            if o < 0:
                return False, f"negative output weight at generator {fmt_vec(g)}"
            total = o
            for m in node.trans:
                gg = gauge(poly, m.apply(g))
                if gg is INFINITY:
                    return False, f"letter image of {fmt_vec(g)} leaves the carrier cone"
                total += gg
            if total > 1:
                return False, f"budget {fmt_rat(total)} exceeds 1 at generator {fmt_vec(g)}"
        else:
            if not z.tag.scalar_ok(o):
                return False, f"output weight {fmt_rat(o)} outside the semiring"
            for m in node.trans:
                if not _carrier_member(z.tag, node, m.apply(g)):
                    return False, f"transition image of {fmt_vec(g)} leaves the carrier"
    return True, ""


def verify_zigzag(z):
    """Re-check a witness from its stated data; every failure is reported."""
    checks = []

    def add(name, ok, detail=""):
        checks.append(CheckResult(name, bool(ok), detail))
        return bool(ok)

    nodes = z.nodes
    n = len(nodes)
    shape_ok = n >= 3 and n % 2 == 1
    incoming = {i: [] for i in range(n)}
    outgoing = {i: [] for i in range(n)}
    seen_edges = set()
    for k, mor in enumerate(z.morphisms):
        if not (0 <= mor.src < n and 0 <= mor.dst < n and abs(mor.src - mor.dst) == 1):
            shape_ok = False
            continue
        seen_edges.add((min(mor.src, mor.dst), max(mor.src, mor.dst)))
        outgoing[mor.src].append(k)
        incoming[mor.dst].append(k)
        expect_rows = nodes[mor.dst].dim
        expect_cols = nodes[mor.src].dim
        if mor.matrix.nrows != expect_rows or mor.matrix.ncols != expect_cols:
            shape_ok = False
    if len(seen_edges) != n - 1 or len(z.morphisms) != n - 1:
        shape_ok = False
    sources = [i for i in range(n) if outgoing[i] and not incoming[i]]
    sinks = [i for i in range(n) if incoming[i] and not outgoing[i]]
    if sorted(sources + sinks) != list(range(n)):
        shape_ok = False
    x1, x2 = z.endpoints
    if len(x1) != nodes[0].dim or len(x2) != nodes[-1].dim:
        shape_ok = False
    indices = [i for i, _ in z.relating]
    if len(set(indices)) != len(indices):
        shape_ok = False
    if z.functor == GHAT and z.tag is not SemiringTag.PCA:
        shape_ok = False
    if z.functor == CUBIC and z.tag is SemiringTag.PCA:
        shape_ok = False
    add("shape", shape_ok,
        "" if shape_ok else "not an alternating chain of adjacent morphisms")
    if not shape_ok:
        return Report(False, checks)

    for i, node in enumerate(nodes):
        ok, detail = _kind_ok(node)
        if ok and i in sinks and not node.is_free:
            ok, detail = False, "nodes with incoming arrows must be free"
        if ok and z.functor == GHAT and not node.is_pca:
            ok, detail = False, "subconvex witnesses need subconvex carriers"
        add(f"node-kind[{i}]", ok, detail)
        ok, detail = _coalgebra_self_map_ok(z, node)
        add(f"node-coalgebra[{i}]", ok, detail)

    for k, mor in enumerate(z.morphisms):
        src, dst = nodes[mor.src], nodes[mor.dst]
        carrier_ok, carrier_detail = True, ""
        for g in src.generators:
            if not _carrier_member(z.tag, dst, mor.matrix.apply(g)):
                carrier_ok = False
                carrier_detail = f"image of generator {fmt_vec(g)} not in target carrier"
                break
        add(f"morphism-carrier[{k}]", carrier_ok, carrier_detail)
        square_ok, square_detail = True, ""
        for g in src.generators:
            fg = mor.matrix.apply(g)
            if vdot(src.out, g) != vdot(dst.out, fg):
                square_ok = False
                square_detail = f"output weight changes along generator {fmt_vec(g)}"
                break
            for a_index in range(len(z.alphabet)):
                lhs = mor.matrix.apply(src.trans[a_index].apply(g))
                rhs = dst.trans[a_index].apply(fg)
                if lhs != rhs:
                    square_ok = False
                    square_detail = (f"letter {z.alphabet[a_index]!r} square fails "
                                     f"at generator {fmt_vec(g)}")
                    break
            if not square_ok:
                break
        add(f"morphism-square[{k}]", square_ok, square_detail)

    relating = dict(z.relating)
    for i in sources:
        present = i in relating and len(relating[i]) == nodes[i].dim
        detail = "" if present else "source node lacks a relating element"
        if present and not _carrier_member(z.tag, nodes[i], relating[i]):
            present, detail = False, "relating element outside the carrier"
        if present and i == 0 and relating[i] != vector(x1):
            present, detail = False, "left endpoint does not match its relating element"
        if present and i == n - 1 and relating[i] != vector(x2):
            present, detail = False, "right endpoint does not match its relating element"
        add(f"relating[{i}]", present, detail)
    for i in sinks:
        if i in relating:
            add(f"relating[{i}]", False, "sink nodes carry no relating element")

    for s in sinks:
        pushed = []
        ok, detail = True, ""
        for k in incoming[s]:
            mor = z.morphisms[k]
            zsrc = relating.get(mor.src)
            if zsrc is None:
                ok, detail = False, "missing relating element upstream"
                break
            pushed.append(mor.matrix.apply(zsrc))
        if ok and len(set(pushed)) > 1:
            ok, detail = False, "incoming relating images disagree"
        if ok and s == 0 and pushed and pushed[0] != vector(x1):
            ok, detail = False, "chain does not reach the left endpoint"
        if ok and s == n - 1 and pushed and pushed[0] != vector(x2):
            ok, detail = False, "chain does not reach the right endpoint"
        add(f"chain[{s}]", ok, detail)

    depth = nodes[0].dim + nodes[-1].dim
    tr1 = _raw_trace(nodes[0], x1, depth, z.alphabet)
    tr2 = _raw_trace(nodes[-1], x2, depth, z.alphabet)
    add("trace-agreement", tr1 == tr2,
        "" if tr1 == tr2 else "endpoint traces differ")

    return Report(all(c.ok for c in checks), checks)


def _raw_trace(node, x, depth, alphabet):
    values = {(): vdot(node.out, x)}
    frontier = [((), vector(x))]
    for _ in range(depth):
        nxt = []
        for word, v in frontier:
            for idx, a in enumerate(alphabet):
                image = node.trans[idx].apply(v)
                values[word + (a,)] = vdot(node.out, image)
                nxt.append((word + (a,), image))
        frontier = nxt
    return values


# ---------------------------------------------------------------------------
# witness file format


def zigzag_to_text(z):
    lines = [f"zigzag {z.functor} {z.tag.value}",
             "alphabet " + " ".join(z.alphabet),
             f"nodes {len(z.nodes)}"]
    for i, node in enumerate(z.nodes):
        lines.append(f"node {i} {node.kind} dim {node.dim} generators {len(node.generators)}")
        for g in node.generators:
            lines.append(fmt_vec(g))
        lines.append(("out " + fmt_vec(node.out)).rstrip())
        for a, m in zip(z.alphabet, node.trans):
            lines.append(f"trans {a}")
            for row in m.transpose().rows:
                lines.append(fmt_vec(row))
    lines.append(f"morphisms {len(z.morphisms)}")
    for mor in z.morphisms:
        lines.append(f"morphism {mor.src} {mor.dst}")
        for row in mor.matrix.transpose().rows:
            lines.append(fmt_vec(row))
    lines.append(f"relating {len(z.relating)}")
    for i, v in z.relating:
        lines.append((f"at {i} " + fmt_vec(v)).rstrip())
    lines.append(("left " + fmt_vec(z.endpoints[0])).rstrip())
    lines.append(("right " + fmt_vec(z.endpoints[1])).rstrip())
    return "\n".join(line for line in lines if line) + "\n"


def _parse_matrix_rows(r, nrows, ncols):
    if ncols == 0:
        # zero-width rows have no text representation; nothing to read
        return Mat([()] * nrows, ncols=0) if nrows else Mat((), ncols=0)
    rows = [r.next_rat_row(ncols) for _ in range(nrows)]
    return Mat(rows, ncols=ncols) if rows else Mat((), ncols=ncols)


def parse_zigzag(text, source="<witness>"):
    r = LineReader(text, source)
    toks = r.next_keyword("zigzag")
    if len(toks) != 2:
        r.error("expected: zigzag <functor> <tag>")
    functor = toks[0]
    if functor not in (CUBIC, GHAT):
        r.error(f"unknown functor {functor!r}")
    try:
        tag = SemiringTag(toks[1])
    except ValueError:
        r.error(f"unknown semiring {toks[1]!r}")
    alphabet = tuple(r.next_keyword("alphabet"))
    if len(set(alphabet)) != len(alphabet) or not alphabet:
        r.error("alphabet must be nonempty and distinct")
    toks = r.next_keyword("nodes")
    count = r.parse_int(toks[0], minimum=1) if len(toks) == 1 else r.error("expected a count")
    nodes = []
    for i in range(count):
        toks = r.next_keyword("node")
        if (len(toks) != 6 or toks[0] != str(i) or toks[2] != "dim"
                or toks[4] != "generators"):
            r.error(f"expected: node {i} <KIND> dim <d> generators <g>")
        kind = toks[1]
        if kind not in KINDS:
            r.error(f"unknown node kind {kind!r}")
        dim = r.parse_int(toks[3], minimum=0)
        ngens = r.parse_int(toks[5], minimum=0)
        gens = [r.next_rat_row(dim) for _ in range(ngens)]
        out = r.parse_rats(r.next_keyword("out"), dim)
        trans = []
        for a in alphabet:
            toks = r.next_keyword("trans")
            if toks != [a]:
                r.error(f"expected transition block for {a!r}")
            trans.append(_parse_matrix_rows(r, dim, dim).transpose())
        nodes.append(ZigZagNode(kind=kind, dim=dim, generators=tuple(gens),
                                out=out, trans=tuple(trans)))
    toks = r.next_keyword("morphisms")
    mcount = r.parse_int(toks[0], minimum=0) if len(toks) == 1 else r.error("expected a count")
    morphisms = []
    for _ in range(mcount):
        toks = r.next_keyword("morphism")
        if len(toks) != 2:
            r.error("expected: morphism <from> <to>")
        src = r.parse_int(toks[0], minimum=0)
        dst = r.parse_int(toks[1], minimum=0)
        if src >= count or dst >= count:
            r.error("morphism endpoint out of range")
        matrix = _parse_matrix_rows(r, nodes[src].dim, nodes[dst].dim).transpose()
        morphisms.append(Morphism(src, dst, matrix))
    toks = r.next_keyword("relating")
    rcount = r.parse_int(toks[0], minimum=0) if len(toks) == 1 else r.error("expected a count")
    relating = []
    for _ in range(rcount):
        toks = r.next_keyword("at")
        if not toks:
            r.error("expected: at <node> <element>")
        idx = r.parse_int(toks[0], minimum=0)
        if idx >= count:
            r.error("relating node out of range")
        relating.append((idx, r.parse_rats(toks[1:], nodes[idx].dim)))
    left = r.parse_rats(r.next_keyword("left"), nodes[0].dim)
    right = r.parse_rats(r.next_keyword("right"), nodes[-1].dim)
    if r:
        r.error("trailing input after witness")
    return ZigZag(functor=functor, tag=tag, alphabet=alphabet, nodes=tuple(nodes),
                  morphisms=tuple(morphisms), relating=tuple(relating),
                  endpoints=(left, right))
