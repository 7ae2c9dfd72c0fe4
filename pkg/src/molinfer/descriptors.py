"""Feature vectors of whole graphs and frequency vectors of fragments.

Two closely related countings live here.  The feature vector of a graph
collects the full descriptor list (vertex count, degree distribution,
diameter ratio, branch numbers, element/bond counts, hydrogen count),
each split into the part carried by the branch-subtree (internal) and
the part carried by the fringe trees (external).  The frequency vector
of a rooted fragment is the reduced form the enumeration search works
with: counts over elements, adjacency configurations, bond
configurations and degrees, split by backbone membership, including the
"fictitious" variants that pre-account for edges a fragment will
receive when it is joined into a larger tree.
"""

from __future__ import annotations

import collections
import decimal
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .chemgraph import (
    BranchDecomposition,
    ChemicalAlphabet,
    ChemicalGraph,
    NotATreeError,
    branch_decomposition,
    diameter_and_center,
)

MAX_DEGREE = 4


@dataclass(frozen=True)
class FeatureIndex:
    """Canonical key order for frequency vectors over one alphabet.

    Keys are ("el", a), ("ac", (a,b,m)), ("bc", (d1,d2,m)), ("dg", i) in
    that block order, each block in its alphabet order.
    """

    alphabet: ChemicalAlphabet = field(compare=False)
    keys: tuple[tuple, ...] = field(default=(), compare=True)

    @classmethod
    def for_alphabet(cls, alphabet: ChemicalAlphabet) -> "FeatureIndex":
        keys: list[tuple] = [("el", a) for a in alphabet.elements]
        keys += [("ac", g) for g in alphabet.gamma]
        keys += [("bc", b) for b in alphabet.bc]
        keys += [("dg", i) for i in alphabet.dg]
        return cls(alphabet=alphabet, keys=tuple(keys))

    @cached_property
    def pos(self) -> dict[tuple, int]:
        return {k: i for i, k in enumerate(self.keys)}

    @property
    def width(self) -> int:
        return len(self.keys)


@dataclass(frozen=True)
class FrequencyVector:
    """Paired nonnegative integer vectors over element/adjacency/bond/degree keys."""

    index: FeatureIndex = field(compare=False)
    w_in: tuple[int, ...] = ()
    w_ex: tuple[int, ...] = ()

    @classmethod
    def zero(cls, index: FeatureIndex) -> "FrequencyVector":
        z = (0,) * index.width
        return cls(index=index, w_in=z, w_ex=z)

    def get(self, part: str, kind: str, key) -> int:
        vec = self.w_in if part == "in" else self.w_ex
        return vec[self.index.pos[(kind, key)]]

    def add(self, other: "FrequencyVector") -> "FrequencyVector":
        return FrequencyVector(
            index=self.index,
            w_in=tuple(a + b for a, b in zip(self.w_in, other.w_in)),
            w_ex=tuple(a + b for a, b in zip(self.w_ex, other.w_ex)),
        )

    def sub(self, other: "FrequencyVector") -> "FrequencyVector":
        return FrequencyVector(
            index=self.index,
            w_in=tuple(a - b for a, b in zip(self.w_in, other.w_in)),
            w_ex=tuple(a - b for a, b in zip(self.w_ex, other.w_ex)),
        )

    def bump(self, part: str, kind: str, key, delta: int = 1) -> "FrequencyVector":
        """Return a copy with one entry changed by ``delta``."""
        i = self.index.pos[(kind, key)]
        if part == "in":
            w = list(self.w_in)
            w[i] += delta
            return FrequencyVector(index=self.index, w_in=tuple(w), w_ex=self.w_ex)
        w = list(self.w_ex)
        w[i] += delta
        return FrequencyVector(index=self.index, w_in=self.w_in, w_ex=tuple(w))

    def leq(self, other: "FrequencyVector") -> bool:
        return all(a <= b for a, b in zip(self.w_in, other.w_in)) and all(
            a <= b for a, b in zip(self.w_ex, other.w_ex)
        )

    def nonnegative(self) -> bool:
        return all(a >= 0 for a in self.w_in) and all(a >= 0 for a in self.w_ex)

    def sort_key(self) -> tuple:
        return (self.w_in, self.w_ex)

    def counts(self, part: str) -> dict[tuple, int]:
        """Nonzero entries of one part as a {key: count} dict."""
        vec = self.w_in if part == "in" else self.w_ex
        return {k: c for k, c in zip(self.index.keys, vec) if c}


@dataclass(frozen=True)
class RootedFragment:
    """A tree with up to three designated terminal vertices.

    ``r1 == r2`` gives a rooted fragment whose internal part is just the
    root.  Otherwise the internal vertices are those on paths between
    terminals (the backbone between r1 and r2, plus the path from r3 to
    it when r3 is set), and internal edges are the edges joining two
    internal vertices.
    """

    tree: ChemicalGraph
    r1: int
    r2: int
    r3: int | None = None

    @cached_property
    def backbone(self) -> tuple[int, ...]:
        """Vertices of the r1 -> r2 path, in order."""
        return _tree_path(self.tree, self.r1, self.r2)

    @property
    def backbone_length(self) -> int:
        return len(self.backbone) - 1

    @cached_property
    def v_in(self) -> frozenset[int]:
        verts = set(self.backbone)
        if self.r3 is not None and self.r3 not in verts:
            probe = _tree_path_to_set(self.tree, self.r3, verts)
            verts |= set(probe)
        return frozenset(verts)

    @cached_property
    def e_in(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (u, v) for u, v, _ in self.tree.edges if u in self.v_in and v in self.v_in
        )


def _tree_path(g: ChemicalGraph, a: int, b: int) -> tuple[int, ...]:
    if a == b:
        return (a,)
    parent: dict[int, int] = {a: a}
    stack = [a]
    while stack:
        u = stack.pop()
        for w, _ in g.adjacency[u]:
            if w not in parent:
                parent[w] = u
                if w == b:
                    stack = []
                    break
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return tuple(reversed(path))


def _tree_path_to_set(g: ChemicalGraph, a: int, targets: set[int]) -> tuple[int, ...]:
    """Path from ``a`` to the nearest vertex of ``targets``."""
    parent: dict[int, int] = {a: a}
    queue = collections.deque([a])
    hit = None
    while queue:
        u = queue.popleft()
        if u in targets:
            hit = u
            break
        for w, _ in g.adjacency[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    path = [hit]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return tuple(path)


def frequency_vector(
    frag: RootedFragment, index: FeatureIndex, extra_degree: dict[int, int] | None = None
) -> FrequencyVector:
    """Count a fragment into a frequency vector.

    ``extra_degree`` raises the counted degree of chosen vertices, which
    is how the fictitious forms are produced: the degree shift applies
    to the vertex's degree entry and to the degree side it contributes
    to every incident edge's bond configuration.  Degrees are measured
    in the fragment tree itself.
    """
    g = frag.tree
    al = index.alphabet
    extra = extra_degree or {}
    deg = [g.degree(v) + extra.get(v, 0) for v in range(g.n)]
    for v in range(g.n):
        if deg[v] > MAX_DEGREE:
            raise ValueError(f"vertex {v} degree {deg[v]} exceeds {MAX_DEGREE}")
    w_in = [0] * index.width
    w_ex = [0] * index.width
    pos = index.pos
    v_in = frag.v_in
    for v in range(g.n):
        target = w_in if v in v_in else w_ex
        target[pos[("el", g.labels[v])]] += 1
        if deg[v] >= 1:
            target[pos[("dg", deg[v])]] += 1
    e_in = frag.e_in
    for u, v, m in g.edges:
        target = w_in if (u, v) in e_in else w_ex
        gamma = al.gamma_key(g.labels[u], g.labels[v], m)
        if gamma not in al._gamma_set:
            raise ValueError(f"edge tuple {gamma} not admissible")
        target[pos[("ac", gamma)]] += 1
        mu = al.bc_key(deg[u], deg[v], m)
        if mu not in al._bc_set:
            raise ValueError(f"bond configuration {mu} not admissible")
        target[pos[("bc", mu)]] += 1
    return FrequencyVector(index=index, w_in=tuple(w_in), w_ex=tuple(w_ex))


_MODES = {"+1": 1, "+2": 2, "+3": 3, "<+1>": 1}


def fictitious_adjust(
    frag: RootedFragment, mode: str, index: FeatureIndex
) -> FrequencyVector:
    """Frequency vector of the fragment with a notionally raised terminal.

    Modes "+1", "+2", "+3" raise the degree of ``r1``; mode "<+1>"
    raises the degree of ``r3``.  Raising a degree beyond 4 is an error.
    """
    if mode not in _MODES:
        raise ValueError(f"unknown mode {mode!r}")
    vertex = frag.r3 if mode == "<+1>" else frag.r1
    if vertex is None:
        raise ValueError("mode <+1> requires a third terminal")
    p = _MODES[mode]
    if frag.tree.degree(vertex) + p > MAX_DEGREE:
        raise ValueError(
            f"degree {frag.tree.degree(vertex)}+{p} at vertex {vertex} exceeds {MAX_DEGREE}"
        )
    return frequency_vector(frag, index, extra_degree={vertex: p})


def graph_frequency_vector(
    g: ChemicalGraph, index: FeatureIndex, k: int = 2
) -> FrequencyVector:
    """Frequency vector of a whole tree, split by its k-branch-subtree.

    This is the target-vector form: internal entries count the
    branch-subtree, external entries count the fringe trees, and no
    fictitious adjustment applies because every edge is already real.
    """
    bd = branch_decomposition(g, k)
    al = index.alphabet
    w_in = [0] * index.width
    w_ex = [0] * index.width
    pos = index.pos
    for v in range(g.n):
        target = w_in if v in bd.v_in else w_ex
        target[pos[("el", g.labels[v])]] += 1
        d = g.degree(v)
        if d > MAX_DEGREE:
            raise ValueError(f"vertex {v} degree {d} exceeds {MAX_DEGREE}")
        if d >= 1:
            target[pos[("dg", d)]] += 1
    for u, v, m in g.edges:
        target = w_in if (u, v) in bd.e_in else w_ex
        target[pos[("ac", al.gamma_key(g.labels[u], g.labels[v], m))]] += 1
        target[pos[("bc", al.bc_key(g.degree(u), g.degree(v), m))]] += 1
    return FrequencyVector(index=index, w_in=tuple(w_in), w_ex=tuple(w_ex))


# ---------------------------------------------------------------------------
# whole-graph descriptors


@dataclass(frozen=True)
class FeatureVector:
    """The full descriptor list of one graph at branch parameter ``k``."""

    k: int
    n: int
    dg_in: tuple[int, int, int, int]
    dg_ex: tuple[int, int, int, int]
    dia_bar: Fraction
    bl_k: int
    bh_k: int
    ce_in: dict[str, int]
    ce_ex: dict[str, int]
    ms_bar: Fraction
    bd_in: tuple[int, int]
    bd_ex: tuple[int, int]
    ac_in: dict[tuple[str, str, int], int]
    ac_ex: dict[tuple[str, str, int], int]
    bc_in: dict[tuple[int, int, int], int]
    bc_ex: dict[tuple[int, int, int], int]
    n_H: int


def hydrogen_count(g: ChemicalGraph, alphabet: ChemicalAlphabet) -> int:
    """Hydrogens implied by valences: sum of valences minus twice the bond sum."""
    total = sum(alphabet.val[a] for a in g.labels) - 2 * sum(m for _, _, m in g.edges)
    if total < 0:
        raise ValueError(f"negative hydrogen count {total}: graph exceeds valences")
    return total


def feature_vector(g: ChemicalGraph, k: int, alphabet: ChemicalAlphabet) -> FeatureVector:
    """Compute every descriptor of a valid acyclic chemical graph."""
    if not g.is_tree():
        raise NotATreeError("descriptors require an acyclic connected graph")
    bd = branch_decomposition(g, k)
    dia, _ = diameter_and_center(g)
    dg_in = [0, 0, 0, 0]
    dg_ex = [0, 0, 0, 0]
    ce_in: dict[str, int] = {a: 0 for a in alphabet.elements}
    ce_ex: dict[str, int] = {a: 0 for a in alphabet.elements}
    for v in range(g.n):
        d = g.degree(v)
        if d > MAX_DEGREE:
            raise ValueError(f"vertex {v} degree {d} exceeds {MAX_DEGREE}")
        internal = v in bd.v_in
        if d >= 1:
            (dg_in if internal else dg_ex)[d - 1] += 1
        (ce_in if internal else ce_ex)[g.labels[v]] += 1
    ac_in = {gam: 0 for gam in alphabet.gamma}
    ac_ex = {gam: 0 for gam in alphabet.gamma}
    bc_in = {mu: 0 for mu in alphabet.bc}
    bc_ex = {mu: 0 for mu in alphabet.bc}
    for u, v, m in g.edges:
        internal = (u, v) in bd.e_in
        gam = alphabet.gamma_key(g.labels[u], g.labels[v], m)
        (ac_in if internal else ac_ex)[gam] += 1
        mu = alphabet.bc_key(g.degree(u), g.degree(v), m)
        (bc_in if internal else bc_ex)[mu] += 1
    bd_in = tuple(
        sum(c for (a, b, m), c in ac_in.items() if m == target) for target in (2, 3)
    )
    bd_ex = tuple(
        sum(c for (a, b, m), c in ac_ex.items() if m == target) for target in (2, 3)
    )
    n_h = sum(
        alphabet.val[a] * (ce_in[a] + ce_ex[a]) for a in alphabet.elements
    ) - sum(2 * m * (ac_in[gam] + ac_ex[gam]) for gam in alphabet.gamma for m in [gam[2]])
    if n_h < 0:
        raise ValueError(f"negative hydrogen count {n_h}")
    ms = sum(alphabet.mass10[a] * (ce_in[a] + ce_ex[a]) for a in alphabet.elements)
    return FeatureVector(
        k=k,
        n=g.n,
        dg_in=tuple(dg_in),
        dg_ex=tuple(dg_ex),
        dia_bar=Fraction(dia, g.n),
        bl_k=bd.bl_k,
        bh_k=bd.bh_k,
        ce_in=ce_in,
        ce_ex=ce_ex,
        ms_bar=Fraction(ms, g.n),
        bd_in=bd_in,
        bd_ex=bd_ex,
        ac_in=ac_in,
        ac_ex=ac_ex,
        bc_in=bc_in,
        bc_ex=bc_ex,
        n_H=n_h,
    )


# ---------------------------------------------------------------------------
# serialization


def feature_names(alphabet: ChemicalAlphabet) -> list[str]:
    """Column names of the serialized descriptor row, in canonical order."""
    names = ["n"]
    names += [f"dg_in_{i}" for i in (1, 2, 3, 4)]
    names += [f"dg_ex_{i}" for i in (1, 2, 3, 4)]
    names += ["dia_bar", "bl", "bh"]
    names += [f"ce_in_{a}" for a in alphabet.elements]
    names += [f"ce_ex_{a}" for a in alphabet.elements]
    names += ["ms_bar"]
    names += ["bd_in_2", "bd_in_3", "bd_ex_2", "bd_ex_3"]
    names += [f"ac_in_{a}_{b}_{m}" for a, b, m in alphabet.gamma]
    names += [f"ac_ex_{a}_{b}_{m}" for a, b, m in alphabet.gamma]
    names += [f"bc_in_{d1}_{d2}_{m}" for d1, d2, m in alphabet.bc]
    names += [f"bc_ex_{d1}_{d2}_{m}" for d1, d2, m in alphabet.bc]
    names += ["n_H"]
    return names


def _decimal6(x: Fraction) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        d = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
        return str(d.quantize(decimal.Decimal("0.000001")))


def feature_row(fv: FeatureVector, alphabet: ChemicalAlphabet) -> list[str]:
    """Serialize one feature vector; order matches :func:`feature_names`."""
    row: list[str] = [str(fv.n)]
    row += [str(c) for c in fv.dg_in]
    row += [str(c) for c in fv.dg_ex]
    row += [_decimal6(fv.dia_bar), str(fv.bl_k), str(fv.bh_k)]
    row += [str(fv.ce_in[a]) for a in alphabet.elements]
    row += [str(fv.ce_ex[a]) for a in alphabet.elements]
    row += [_decimal6(fv.ms_bar)]
    row += [str(c) for c in fv.bd_in + fv.bd_ex]
    row += [str(fv.ac_in[gam]) for gam in alphabet.gamma]
    row += [str(fv.ac_ex[gam]) for gam in alphabet.gamma]
    row += [str(fv.bc_in[mu]) for mu in alphabet.bc]
    row += [str(fv.bc_ex[mu]) for mu in alphabet.bc]
    row += [str(fv.n_H)]
    return row


def descriptor_count(alphabet: ChemicalAlphabet) -> int:
    """Width of the serialized descriptor row (the network input size)."""
    return len(feature_names(alphabet))


def features_csv(
    graphs: list[ChemicalGraph], k: int, alphabet: ChemicalAlphabet
) -> str:
    lines = [",".join(feature_names(alphabet))]
    for g in graphs:
        lines.append(",".join(feature_row(feature_vector(g, k, alphabet), alphabet)))
    return "\n".join(lines) + "\n"
