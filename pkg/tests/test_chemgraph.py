"""Tests for the graph data model and the branch-height machinery.

The branch analysis is checked against a second, deliberately naive
implementation that works straight from the definitions: all-pairs
distances, eccentricity centers, descendant sets for heights, and an
all-pairs scan for branch paths.
"""

from __future__ import annotations

import itertools
import random

import pytest

from molinfer.chemgraph import (
    ChemicalAlphabet,
    ChemicalGraph,
    GraphFormatError,
    branch_decomposition,
    canonical_form,
    diameter_and_center,
    parse_graph,
    parse_graphs,
    permuted,
    rooted_at_center,
    serialize_graph,
    tree_template,
    validate,
)

AL = ChemicalAlphabet.make()


def random_tree(rng: random.Random, n: int) -> ChemicalGraph:
    labels = [rng.choice(AL.elements) for _ in range(n)]
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, rng.randint(1, 3)))
    return ChemicalGraph.make(labels, edges)


# ---------------------------------------------------------------------------
# definitional oracle


def all_pairs_dist(g: ChemicalGraph) -> list[list[int]]:
    big = 10**9
    d = [[big] * g.n for _ in range(g.n)]
    for v in range(g.n):
        d[v][v] = 0
    for u, v, _ in g.edges:
        d[u][v] = d[v][u] = 1
    for k in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


class Oracle:
    """Direct-from-definition branch analysis of a tree."""

    def __init__(self, g: ChemicalGraph, k: int):
        self.g = g
        self.k = k
        self.dist = all_pairs_dist(g)
        ecc = [max(row) for row in self.dist]
        self.dia = max(ecc)
        best = min(ecc)
        self.centers = tuple(v for v in range(g.n) if ecc[v] == best)
        self.depth = [min(self.dist[c][v] for c in self.centers) for v in range(g.n)]
        self.parent: list[int | None] = [None] * g.n
        for v in range(g.n):
            if v in self.centers:
                continue
            for w, _ in g.adjacency[v]:
                if self.depth[w] == self.depth[v] - 1:
                    self.parent[v] = w
        self.children = [[] for _ in range(g.n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                self.children[p].append(v)
        self.desc = [self._descendants(v) for v in range(g.n)]
        self.height = [
            max(self.dist[v][w] for w in self.desc[v]) for v in range(g.n)
        ]
        self.leaf_branches = {
            v
            for v in range(g.n)
            if v not in self.centers and self.height[v] == k
        }
        self.nonleaf_branches = {
            v
            for v in range(g.n)
            if sum(1 for c in self.children[v] if self.height[c] >= k) >= 2
        }
        self.relevant = self.leaf_branches | self.nonleaf_branches | set(self.centers)
        self.e_in = self._branch_path_edges()
        self.v_in = {x for e in self.e_in for x in e}
        self.bl = len(self.leaf_branches)
        self.bh = self._branch_height()

    def _descendants(self, v: int) -> set[int]:
        out = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                out.add(c)
                stack.append(c)
        return out

    def _tree_path(self, u: int, v: int) -> list[int]:
        # path by greedy walk: step to the neighbor closer to the target
        path = [u]
        while path[-1] != v:
            cur = path[-1]
            nxt = next(
                w for w, _ in self.g.adjacency[cur] if self.dist[w][v] < self.dist[cur][v]
            )
            path.append(nxt)
        return path

    def _branch_path_edges(self) -> set[tuple[int, int]]:
        edges = set()
        for u, v in itertools.combinations(sorted(self.relevant), 2):
            path = self._tree_path(u, v)
            if any(x in self.relevant for x in path[1:-1]):
                continue
            for x, y in zip(path, path[1:]):
                edges.add((min(x, y), max(x, y)))
        return edges

    def _branch_height(self) -> int:
        best = 0
        for v in range(self.g.n):
            c = min(self.centers, key=lambda c: self.dist[c][v])
            path = self._tree_path(v, c)
            count = sum(
                1
                for x in path
                if x in (self.leaf_branches | self.nonleaf_branches)
                and x not in self.centers
            )
            best = max(best, count)
        return best


# ---------------------------------------------------------------------------
# parsing and validity


def test_parse_propane():
    g = parse_graph("3\nC C C\n1 2 1\n2 3 1\n", AL)
    assert g.n == 3
    assert g.edges == ((0, 1, 1), (1, 2, 1))
    assert validate(g, AL) == []


def test_parse_boundary_valence():
    g = parse_graph("2\nC O\n1 2 2\n", AL)
    assert validate(g, AL) == []
    assert g.beta(1) == 2


def test_parse_multiplicity_out_of_range():
    with pytest.raises(GraphFormatError):
        parse_graph("2\nC C\n1 2 4\n", AL)


def test_parse_unknown_element():
    with pytest.raises(GraphFormatError):
        parse_graph("2\nC Xx\n1 2 1\n", AL)


def test_parse_reports_line_numbers():
    try:
        parse_graph("3\nC C C\n1 2 1\n2 9 1\n", AL)
    except GraphFormatError as e:
        assert e.line == 4
    else:
        pytest.fail("expected a parse error")


def test_parse_multi_graph_blocks_and_comments():
    text = "# two graphs\n1\nC\n\n2\nC C  # ethane\n1 2 1\n"
    graphs = parse_graphs(text, AL)
    assert [g.n for g in graphs] == [1, 2]


def test_serialize_round_trip():
    rng = random.Random(7)
    for _ in range(25):
        g = random_tree(rng, rng.randint(1, 12))
        back = parse_graph(serialize_graph(g), AL)
        assert back == g


def test_validate_overflow_and_disconnect():
    g = ChemicalGraph.make(["C"] * 5, [(0, 1, 2), (0, 2, 1), (0, 3, 1), (0, 4, 1)])
    issues = validate(g, AL)
    assert any("exceeds valence" in s for s in issues)
    h = ChemicalGraph.make(["C"] * 4, [(0, 1, 1), (2, 3, 1)])
    issues = validate(h, AL)
    assert any("disconnected" in s for s in issues)


def test_validate_tuple_not_admissible():
    g = ChemicalGraph.make(["O", "O"], [(0, 1, 2)])
    issues = validate(g, AL)
    assert any("not admissible" in s for s in issues)


# ---------------------------------------------------------------------------
# alphabet invariants


def test_alphabet_order_and_codes():
    assert AL.elements == ("C", "N", "O")
    assert AL.mass10 == {"C": 120, "N": 140, "O": 159}
    assert AL.element_codes == {"C": 1, "N": 2, "O": 3}


def test_alphabet_gamma_proper():
    for a, b, m in AL.gamma:
        assert m <= min(AL.val[a], AL.val[b])
        assert m <= max(AL.val[a], AL.val[b]) - 1
    assert len(AL.gamma_lt) + len(AL.gamma_eq) == len(AL.gamma)


def test_alphabet_bc_exactly_ten():
    assert len(AL.bc) == 10
    for d1, d2, m in AL.bc:
        assert d1 <= d2 and max(d1, d2) + m <= 4
    # every admissible tuple is present
    want = {
        (d1, d2, m)
        for d1 in range(1, 5)
        for d2 in range(d1, 5)
        for m in range(1, 4)
        if max(d1, d2) + m <= 4
    }
    assert set(AL.bc) == want


# ---------------------------------------------------------------------------
# diameter and center


def test_center_examples():
    path3 = parse_graph("3\nC C C\n1 2 1\n2 3 1\n", AL)
    assert diameter_and_center(path3) == (2, (1,))
    edge = parse_graph("2\nC C\n1 2 1\n", AL)
    assert diameter_and_center(edge) == (1, (0, 1))
    spider = ChemicalGraph.make(
        ["C"] * 10,
        [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 4, 1), (4, 5, 1), (5, 6, 1),
         (0, 7, 1), (7, 8, 1), (8, 9, 1)],
    )
    assert diameter_and_center(spider) == (6, (0,))


def test_diameter_against_all_pairs():
    rng = random.Random(11)
    for _ in range(60):
        g = random_tree(rng, rng.randint(1, 50))
        dia, centers = diameter_and_center(g)
        orc = Oracle(g, 1)
        assert dia == orc.dia
        assert tuple(sorted(centers)) == orc.centers


# ---------------------------------------------------------------------------
# branch decomposition


def test_branch_path3():
    g = parse_graph("3\nC C C\n1 2 1\n2 3 1\n", AL)
    bd = branch_decomposition(g, 2)
    assert (bd.bl_k, bd.bh_k) == (0, 0)
    assert bd.v_in == frozenset()
    assert bd.v_ex == frozenset(range(3))
    assert len(bd.fringe_trees) == 1
    assert bd.fringe_trees[0].root == 1


def test_branch_spider():
    spider = ChemicalGraph.make(
        ["C"] * 10,
        [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 4, 1), (4, 5, 1), (5, 6, 1),
         (0, 7, 1), (7, 8, 1), (8, 9, 1)],
    )
    bd = branch_decomposition(spider, 2)
    assert bd.bl_k == 3 and bd.bh_k == 1
    assert bd.leaf_branches == frozenset({1, 4, 7})
    bd3 = branch_decomposition(spider, 3)
    assert bd3.bl_k == 0 and bd3.bh_k == 0


def test_branch_pair_center_edge_is_internal():
    # a path with 4 vertices has a center pair; the center edge is internal
    g = parse_graph("4\nC C C C\n1 2 1\n2 3 1\n3 4 1\n", AL)
    bd = branch_decomposition(g, 1)
    assert (1, 2) in bd.e_in
    assert 1 in bd.v_in and 2 in bd.v_in


def test_branch_against_oracle():
    rng = random.Random(40213)
    checked = 0
    while checked < 1000:
        n = rng.randint(1, 20)
        k = rng.choice([1, 2, 3])
        g = random_tree(rng, n)
        bd = branch_decomposition(g, k)
        orc = Oracle(g, k)
        assert bd.leaf_branches == frozenset(orc.leaf_branches), (n, k, g)
        assert bd.nonleaf_branches == frozenset(orc.nonleaf_branches), (n, k, g)
        assert bd.e_in == frozenset(orc.e_in), (n, k, g)
        assert bd.v_in == frozenset(orc.v_in), (n, k, g)
        assert bd.bl_k == orc.bl and bd.bh_k == orc.bh, (n, k, g)
        checked += 1


def test_branch_partitions_and_fringe_heights():
    rng = random.Random(5)
    for _ in range(200):
        g = random_tree(rng, rng.randint(1, 18))
        k = rng.choice([1, 2, 3])
        bd = branch_decomposition(g, k)
        assert bd.v_in | bd.v_ex == frozenset(range(g.n))
        assert not (bd.v_in & bd.v_ex)
        assert bd.e_in | bd.e_ex == {(u, v) for u, v, _ in g.edges}
        assert not (bd.e_in & bd.e_ex)
        covered = set()
        for ft in bd.fringe_trees:
            if bd.v_in:
                assert set(ft.vertices) & set(bd.v_in) == {ft.root}
                assert ft.height <= k
            assert not covered & set(ft.vertices)
            covered |= set(ft.vertices)
        assert covered == set(range(g.n))


def test_branch_tree_height_equals_bh():
    rng = random.Random(6)
    for _ in range(300):
        g = random_tree(rng, rng.randint(1, 18))
        k = rng.choice([1, 2])
        bd = branch_decomposition(g, k)
        parent = dict(bd.branch_tree)
        depth = {}

        def depth_of(v):
            if parent[v] is None:
                return 0
            if v not in depth:
                depth[v] = 1 + depth_of(parent[v])
            return depth[v]

        height = max((depth_of(v) for v in parent), default=0)
        assert height == bd.bh_k


def test_bl_bh_monotone_in_k():
    rng = random.Random(9)
    for _ in range(150):
        g = random_tree(rng, rng.randint(2, 18))
        values = [branch_decomposition(g, k) for k in (1, 2, 3)]
        for a, b in zip(values, values[1:]):
            assert a.bl_k >= b.bl_k
            assert a.bh_k >= b.bh_k


# ---------------------------------------------------------------------------
# templates


def test_template_examples():
    t = tree_template(3, 2, 2)
    assert (t.n, t.n_nonleaf) == (10, 4)
    t = tree_template(2, 2, 2)
    assert (t.n, t.n_nonleaf) == (7, 3)
    t = tree_template(1, 2, 0)
    assert (t.n, t.n_nonleaf) == (1, 0)


def test_template_formulas_small():
    for a in range(1, 5):
        for b in range(2, 5):
            for c in range(0, 6):
                n = a * (b**c - 1) // (b - 1) + 1
                if n > 200:
                    continue
                t = tree_template(a, b, c)
                assert t.n == n
                leaves = [v for v in range(1, t.n + 1) if not t.cld[v]]
                assert t.n_nonleaf == t.n - len(leaves)
                if c >= 1:
                    assert t.n_nonleaf == a * (b ** (c - 1) - 1) // (b - 1) + 1
                # every root-to-leaf path has length exactly c
                for leaf in leaves:
                    assert t.depth(leaf) == c
                # root fan-out a, interior fan-out b
                assert len(t.cld[1]) == (a if c >= 1 else 0)
                for v in range(2, t.n_nonleaf + 1):
                    assert len(t.cld[v]) == b
                # non-leaves are exactly the prefix 1..n_nonleaf
                for v in range(1, t.n + 1):
                    assert bool(t.cld[v]) == (v <= t.n_nonleaf)


def test_template_precedence_pairs():
    t = tree_template(3, 2, 2)
    pairs = set(t.p_prc)
    for j in range(2, t.n + 1):
        assert (t.prt[j], j) in pairs
    for v in range(1, t.n + 1):
        for x, y in zip(t.cld[v], t.cld[v][1:]):
            assert (x, y) in pairs
    # precedence pairs always point from a smaller to a larger index
    for i, j in t.p_prc:
        assert i < j


# ---------------------------------------------------------------------------
# canonical forms


def test_canonical_invariant_under_relabeling():
    rng = random.Random(21)
    for _ in range(80):
        g = random_tree(rng, rng.randint(1, 14))
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert canonical_form(g) == canonical_form(permuted(g, perm))


def test_canonical_separates_labelings():
    a = ChemicalGraph.make(["C", "C", "O"], [(0, 1, 1), (1, 2, 1)])
    b = ChemicalGraph.make(["C", "O", "C"], [(0, 1, 1), (1, 2, 1)])
    c = ChemicalGraph.make(["C", "C", "O"], [(0, 1, 2), (1, 2, 1)])
    forms = {canonical_form(x) for x in (a, b, c)}
    assert len(forms) == 3
    # a relabeled copy of `a` collides with it
    assert canonical_form(permuted(a, [2, 1, 0])) == canonical_form(a)


def test_rooted_view_heights():
    g = ChemicalGraph.make(
        ["C"] * 7,
        [(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1), (0, 5, 1), (5, 6, 1)],
    )
    view = rooted_at_center(g)
    orc = Oracle(g, 1)
    assert list(view.height) == orc.height
    assert list(view.depth) == orc.depth
