"""Labeled acyclic chemical graphs and branch-height tree analysis.

A chemical graph here is a hydrogen-suppressed tree whose vertices carry
element labels and whose edges carry bond multiplicities in [1, 3].  On
top of that data model this module provides the topological machinery the
rest of the package builds on: tree centers and vertex heights, the
k-branch vertices, the internal/external split induced by the union of
branch paths, fringe trees, the contracted branch tree, and the two
summary numbers ``bl_k`` (leaf-branch count) and ``bh_k`` (branch height).
"""

from __future__ import annotations

import collections
import math
from dataclasses import dataclass
from functools import cached_property

EPSILON = "eps"
"""Fictitious element label used by the MILP layer for unselected slots."""

_DEFAULT_MASS = {
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "P": 30.974,
    "S": 32.06,
    "Cl": 35.45,
}

_DEFAULT_VALENCE = {"C": 4, "N": 3, "O": 2, "F": 1, "P": 3, "S": 2, "Cl": 1}


class GraphFormatError(ValueError):
    """Graph text could not be parsed; carries the offending 1-based line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NotATreeError(ValueError):
    """An operation that requires a tree was given a non-tree graph."""


@dataclass(frozen=True)
class ChemicalAlphabet:
    """Element set with valences and masses plus the derived tuple sets.

    Fields
    ------
    elements:
        Element symbols ordered by ascending 10x-floored mass.
    val:
        Element symbol -> valence in [1, 4].
    mass10:
        Element symbol -> floor(10 * atomic mass).
    gamma_lt, gamma_eq:
        Adjacency-configuration tuples (a, b, m) with a strictly before b
        (resp. a == b) in element order; every tuple is proper:
        m <= min(val) and m <= max(val) - 1.
    bc:
        Bond-configuration tuples (d1, d2, m) with d1 <= d2 and
        max(d1, d2) + m <= 4 (exactly 10 tuples).
    dg:
        Tracked degree labels, always (1, 2, 3, 4).
    element_codes:
        Element symbol -> positive integer code; the fictitious element
        maps to 0.
    """

    elements: tuple[str, ...]
    val: dict[str, int]
    mass10: dict[str, int]
    gamma_lt: tuple[tuple[str, str, int], ...]
    gamma_eq: tuple[tuple[str, str, int], ...]
    bc: tuple[tuple[int, int, int], ...]
    dg: tuple[int, ...]
    element_codes: dict[str, int]

    @classmethod
    def make(
        cls,
        elements: tuple[str, ...] | list[str] = ("C", "O", "N"),
        valence: dict[str, int] | None = None,
        mass: dict[str, float] | None = None,
        gamma: list[tuple[str, str, int]] | None = None,
    ) -> "ChemicalAlphabet":
        """Build an alphabet, deriving every tuple set.

        When ``gamma`` is omitted, all proper adjacency-configuration
        tuples over the element set are generated.  A supplied ``gamma``
        is normalized into canonical element order and checked for
        properness.
        """
        val = dict(_DEFAULT_VALENCE)
        if valence:
            val.update(valence)
        masses = dict(_DEFAULT_MASS)
        if mass:
            masses.update(mass)
        for a in elements:
            if a not in val or a not in masses:
                raise ValueError(f"no valence/mass known for element {a!r}")
            if not 1 <= val[a] <= 4:
                raise ValueError(f"valence of {a!r} outside [1, 4]")
        mass10 = {a: math.floor(10 * masses[a]) for a in elements}
        ordering = tuple(sorted(elements, key=lambda a: (mass10[a], a)))
        index = {a: i for i, a in enumerate(ordering)}
        if gamma is None:
            tuples = []
            for i, a in enumerate(ordering):
                for b in ordering[i:]:
                    for m in (1, 2, 3):
                        if m <= min(val[a], val[b]) and m <= max(val[a], val[b]) - 1:
                            tuples.append((a, b, m))
        else:
            tuples = []
            for a, b, m in gamma:
                if a not in index or b not in index:
                    raise ValueError(f"adjacency tuple ({a},{b},{m}) uses unknown element")
                if index[a] > index[b]:
                    a, b = b, a
                if not (m <= min(val[a], val[b]) and m <= max(val[a], val[b]) - 1):
                    raise ValueError(f"adjacency tuple ({a},{b},{m}) is not proper")
                tuples.append((a, b, m))
            tuples = sorted(set(tuples), key=lambda g: (index[g[0]], index[g[1]], g[2]))
        gamma_lt = tuple(g for g in tuples if g[0] != g[1])
        gamma_eq = tuple(g for g in tuples if g[0] == g[1])
        bc = tuple(
            (d1, d2, m)
            for d1 in range(1, 5)
            for d2 in range(d1, 5)
            for m in (1, 2, 3)
            if d2 + m <= 4
        )
        codes = {a: i + 1 for i, a in enumerate(ordering)}
        return cls(
            elements=ordering,
            val={a: val[a] for a in ordering},
            mass10=mass10,
            gamma_lt=gamma_lt,
            gamma_eq=gamma_eq,
            bc=bc,
            dg=(1, 2, 3, 4),
            element_codes=codes,
        )

    @cached_property
    def gamma(self) -> tuple[tuple[str, str, int], ...]:
        """All adjacency-configuration tuples in canonical order."""
        index = {a: i for i, a in enumerate(self.elements)}
        return tuple(
            sorted(self.gamma_lt + self.gamma_eq, key=lambda g: (index[g[0]], index[g[1]], g[2]))
        )

    @cached_property
    def _gamma_set(self) -> frozenset[tuple[str, str, int]]:
        return frozenset(self.gamma)

    @cached_property
    def _bc_set(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(self.bc)

    def index(self, a: str) -> int:
        return self.elements.index(a)

    def gamma_key(self, a: str, b: str, m: int) -> tuple[str, str, int]:
        """Normalize an element pair with multiplicity into canonical order."""
        if self.index(a) > self.index(b):
            a, b = b, a
        return (a, b, m)

    def bc_key(self, d1: int, d2: int, m: int) -> tuple[int, int, int]:
        """Normalize a degree pair with multiplicity (smaller degree first)."""
        if d1 > d2:
            d1, d2 = d2, d1
        return (d1, d2, m)

    def in_gamma(self, a: str, b: str, m: int) -> bool:
        return self.gamma_key(a, b, m) in self._gamma_set

    def in_bc(self, d1: int, d2: int, m: int) -> bool:
        return self.bc_key(d1, d2, m) in self._bc_set


@dataclass(frozen=True)
class ChemicalGraph:
    """A vertex-labeled multigraph with bond multiplicities.

    ``labels[i]`` is the element of vertex ``i`` (0-based internally);
    ``edges`` holds ``(u, v, m)`` with ``u < v``.  Instances are
    immutable; construct through :meth:`make` which normalizes edge
    orientation and rejects malformed input.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]

    @classmethod
    def make(
        cls,
        labels: list[str] | tuple[str, ...],
        edges: list[tuple[int, int, int]] | tuple[tuple[int, int, int], ...],
    ) -> "ChemicalGraph":
        labels = tuple(labels)
        n = len(labels)
        norm = []
        seen = set()
        for u, v, m in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            norm.append((u, v, int(m)))
        return cls(labels=labels, edges=tuple(norm))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-vertex tuple of (neighbor, multiplicity), sorted by neighbor."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, m in self.edges:
            adj[u].append((v, m))
            adj[v].append((u, m))
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def beta(self, v: int) -> int:
        """Sum of bond multiplicities incident to ``v``."""
        return sum(m for _, m in self.adjacency[v])

    @cached_property
    def edge_mult(self) -> dict[tuple[int, int], int]:
        return {(u, v): m for u, v, m in self.edges}

    def mult(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.edge_mult[(u, v)]

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w, _ in self.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def validate(g: ChemicalGraph, alphabet: ChemicalAlphabet) -> list[str]:
    """Check the chemical-graph conditions; return a list of violations.

    An empty list means the graph is a valid chemical graph: connected,
    acyclic, every vertex within its valence, and every edge's
    (element, element, multiplicity) tuple admissible.
    """
    issues = []
    for i, a in enumerate(g.labels):
        if a not in alphabet.val:
            issues.append(f"vertex {i + 1}: unknown element {a!r}")
    if issues:
        return issues
    if not g.is_connected():
        issues.append("graph is disconnected")
    if len(g.edges) != g.n - 1:
        issues.append(f"graph is cyclic or forest-like ({len(g.edges)} edges, {g.n} vertices)")
    for v in range(g.n):
        b = g.beta(v)
        if b > alphabet.val[g.labels[v]]:
            issues.append(
                f"vertex {v + 1} ({g.labels[v]}): bond sum {b} exceeds valence "
                f"{alphabet.val[g.labels[v]]}"
            )
    for u, v, m in g.edges:
        if not 1 <= m <= 3:
            issues.append(f"edge ({u + 1},{v + 1}): multiplicity {m} outside [1, 3]")
        elif not alphabet.in_gamma(g.labels[u], g.labels[v], m):
            a, b, mm = alphabet.gamma_key(g.labels[u], g.labels[v], m)
            issues.append(f"edge ({u + 1},{v + 1}): tuple ({a},{b},{mm}) not admissible")
    return issues


# ---------------------------------------------------------------------------
# text format


def parse_graphs(text: str, alphabet: ChemicalAlphabet) -> list[ChemicalGraph]:
    """Parse the line-oriented graph format; blank lines separate graphs.

    Format per graph: a vertex-count line, a line of element symbols for
    v1..vn, then one ``u v m`` line per edge with 1-based indices.
    ``#`` starts a comment.
    """
    blocks: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip().startswith("#"):
            continue  # pure comment line: neither content nor separator
        content = raw.split("#", 1)[0].strip()
        if content == "":
            if current:
                blocks.append(current)
                current = []
            continue
        current.append((lineno, content))
    if current:
        blocks.append(current)

    graphs = []
    for block in blocks:
        graphs.append(_parse_block(block, alphabet))
    return graphs


def _parse_block(block: list[tuple[int, str]], alphabet: ChemicalAlphabet) -> ChemicalGraph:
    lineno, head = block[0]
    try:
        n = int(head)
    except ValueError:
        raise GraphFormatError(lineno, f"expected vertex count, got {head!r}") from None
    if n < 1:
        raise GraphFormatError(lineno, f"vertex count must be positive, got {n}")
    if len(block) < 2:
        raise GraphFormatError(lineno, "missing element line")
    lineno, elems_line = block[1]
    labels = elems_line.split()
    if len(labels) != n:
        raise GraphFormatError(lineno, f"expected {n} element symbols, got {len(labels)}")
    for a in labels:
        if a not in alphabet.val:
            raise GraphFormatError(lineno, f"unknown element {a!r}")
    edges = []
    seen = set()
    for lineno, line in block[2:]:
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(lineno, f"expected 'u v m', got {line!r}")
        try:
            u, v, m = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError(lineno, f"non-integer edge fields in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(lineno, f"edge endpoint outside [1, {n}]")
        if u == v:
            raise GraphFormatError(lineno, "self-loop")
        if not 1 <= m <= 3:
            raise GraphFormatError(lineno, f"multiplicity {m} outside [1, 3]")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(lineno, f"duplicate edge {key}")
        seen.add(key)
        edges.append((u - 1, v - 1, m))
    return ChemicalGraph.make(labels, edges)


def parse_graph(text: str, alphabet: ChemicalAlphabet) -> ChemicalGraph:
    """Parse exactly one graph from ``text``."""
    graphs = parse_graphs(text, alphabet)
    if len(graphs) != 1:
        raise GraphFormatError(1, f"expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def serialize_graph(g: ChemicalGraph) -> str:
    lines = [str(g.n), " ".join(g.labels)]
    for u, v, m in g.edges:
        lines.append(f"{u + 1} {v + 1} {m}")
    return "\n".join(lines) + "\n"


def serialize_graphs(graphs: list[ChemicalGraph]) -> str:
    return "\n".join(serialize_graph(g) for g in graphs)


# ---------------------------------------------------------------------------
# tree topology


def _bfs(g: ChemicalGraph, start: int) -> tuple[list[int], list[int | None]]:
    dist: list[int] = [-1] * g.n
    parent: list[int | None] = [None] * g.n
    dist[start] = 0
    queue = collections.deque([start])
    while queue:
        u = queue.popleft()
        for w, _ in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
    return dist, parent


def diameter_and_center(g: ChemicalGraph) -> tuple[int, tuple[int, ...]]:
    """Return the diameter (edge count) and the unique center of a tree.

    The center is a single vertex for even diameter and the two adjacent
    middle vertices of a longest path (sorted by index) for odd diameter.
    """
    if not g.is_tree():
        raise NotATreeError("diameter/center requires a tree")
    if g.n == 1:
        return 0, (0,)
    dist0, _ = _bfs(g, 0)
    u = min(range(g.n), key=lambda v: (-dist0[v], v))
    dist_u, parent_u = _bfs(g, u)
    w = min(range(g.n), key=lambda v: (-dist_u[v], v))
    dia = dist_u[w]
    path = [w]
    while path[-1] != u:
        path.append(parent_u[path[-1]])
    if dia % 2 == 0:
        center: tuple[int, ...] = (path[dia // 2],)
    else:
        a, b = path[dia // 2], path[dia // 2 + 1]
        center = (min(a, b), max(a, b))
    return dia, center


@dataclass(frozen=True)
class RootedView:
    """A tree rooted at its center: parents, children, depths, heights.

    With a center pair both endpoints have depth 0 and neither is the
    parent of the other.  ``height[v]`` is the maximum path length from
    ``v`` down to a leaf of its descendant subtree (a leaf has height 0).
    ``order`` is a breadth-first traversal starting from the centers.
    """

    centers: tuple[int, ...]
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]
    height: tuple[int, ...]
    order: tuple[int, ...]


def rooted_at_center(g: ChemicalGraph) -> RootedView:
    _, centers = diameter_and_center(g)
    parent: list[int | None] = [None] * g.n
    depth = [-1] * g.n
    order = []
    queue = collections.deque(centers)
    for c in centers:
        depth[c] = 0
    while queue:
        u = queue.popleft()
        order.append(u)
        for w, _ in g.adjacency[u]:
            if depth[w] < 0:
                depth[w] = depth[u] + 1
                parent[w] = u
                queue.append(w)
    children: list[list[int]] = [[] for _ in range(g.n)]
    for v in range(g.n):
        if parent[v] is not None:
            children[parent[v]].append(v)
    height = [0] * g.n
    for u in reversed(order):
        if children[u]:
            height[u] = 1 + max(height[c] for c in children[u])
    return RootedView(
        centers=centers,
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        depth=tuple(depth),
        height=tuple(height),
        order=tuple(order),
    )


@dataclass(frozen=True)
class FringeTree:
    """A maximal subtree hanging off the branch-subtree at ``root``."""

    root: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    height: int

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class BranchDecomposition:
    """Everything the k-branch analysis of a tree produces.

    ``root`` is the tree center (one vertex, or the sorted pair for odd
    diameter).  ``v_in``/``e_in`` cover the union of branch paths; the
    complement is external.  ``branch_tree`` lists (node, parent) pairs
    of the contracted tree whose height equals ``bh_k`` (the two centers
    of a pair are merged into the primary root).
    """

    k: int
    root: tuple[int, ...]
    leaf_branches: frozenset[int]
    nonleaf_branches: frozenset[int]
    v_in: frozenset[int]
    v_ex: frozenset[int]
    e_in: frozenset[tuple[int, int]]
    e_ex: frozenset[tuple[int, int]]
    fringe_trees: tuple[FringeTree, ...]
    bl_k: int
    bh_k: int
    branch_tree: tuple[tuple[int, int | None], ...]


def branch_decomposition(g: ChemicalGraph, k: int) -> BranchDecomposition:
    """Split a tree into its k-branch-subtree and the hanging fringe trees.

    A leaf k-branch is a non-root vertex of height exactly ``k``; a
    non-leaf k-branch has at least two children of height >= ``k``.  The
    branch-subtree is the union of all paths joining two branch-or-root
    vertices without an intermediate branch-or-root vertex; for a center
    pair the center edge itself is such a path, so it is always internal.
    When no branch-path exists at all the whole tree is a single fringe
    tree rooted at the center and ``bl_k = bh_k = 0``.
    """
    if not g.is_tree():
        raise NotATreeError("branch decomposition requires a tree")
    view = rooted_at_center(g)
    centers = set(view.centers)
    leaf_branches = {
        v for v in range(g.n) if v not in centers and view.height[v] == k
    }
    nonleaf_branches = {
        v
        for v in range(g.n)
        if sum(1 for c in view.children[v] if view.height[c] >= k) >= 2
    }
    branches = leaf_branches | nonleaf_branches
    relevant = branches | centers

    e_in: set[tuple[int, int]] = set()
    if len(view.centers) == 2:
        a, b = view.centers
        e_in.add((min(a, b), max(a, b)))
    for v in branches - centers:
        u = v
        while True:
            p = view.parent[u]
            e_in.add((min(u, p), max(u, p)))
            if p in relevant:
                break
            u = p

    v_in = frozenset(x for e in e_in for x in e)
    v_ex = frozenset(range(g.n)) - v_in
    all_edges = {(u, v) for u, v, _ in g.edges}
    e_ex = frozenset(all_edges - e_in)

    fringe_trees = _fringe_components(g, v_in, e_ex, view)

    bl_k = len(leaf_branches)
    bh_k = 0
    count = [0] * g.n
    for u in view.order:
        base = count[view.parent[u]] if view.parent[u] is not None else 0
        count[u] = base + (1 if (u in branches and u not in centers) else 0)
        bh_k = max(bh_k, count[u])

    primary = view.centers[0]
    bt_pairs: list[tuple[int, int | None]] = [(primary, None)]
    for v in sorted(branches - centers):
        u = view.parent[v]
        while u not in relevant:
            u = view.parent[u]
        bt_pairs.append((v, primary if u in centers else u))

    return BranchDecomposition(
        k=k,
        root=view.centers,
        leaf_branches=frozenset(leaf_branches),
        nonleaf_branches=frozenset(nonleaf_branches),
        v_in=v_in,
        v_ex=v_ex,
        e_in=frozenset(e_in),
        e_ex=e_ex,
        fringe_trees=fringe_trees,
        bl_k=bl_k,
        bh_k=bh_k,
        branch_tree=tuple(bt_pairs),
    )


def _fringe_components(
    g: ChemicalGraph,
    v_in: frozenset[int],
    e_ex: frozenset[tuple[int, int]],
    view: RootedView,
) -> tuple[FringeTree, ...]:
    adj_ex: dict[int, list[int]] = collections.defaultdict(list)
    for u, v in e_ex:
        adj_ex[u].append(v)
        adj_ex[v].append(u)
    if not v_in:
        # the whole tree is one fringe tree rooted at the primary center
        root = view.centers[0]
        verts = tuple(range(g.n))
        return (
            FringeTree(
                root=root,
                vertices=verts,
                edges=g.edges,
                height=max(view.depth) if g.n > 1 else 0,
            ),
        )
    trees = []
    seen: set[int] = set()
    for root in sorted(v_in):
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        queue = collections.deque([root])
        dist = {root: 0}
        while queue:
            u = queue.popleft()
            for w in sorted(adj_ex.get(u, ())):
                if w not in seen:
                    seen.add(w)
                    dist[w] = dist[u] + 1
                    comp.append(w)
                    queue.append(w)
        comp_set = set(comp)
        edges = tuple(
            (u, v, m) for u, v, m in g.edges if (u, v) in e_ex and u in comp_set
        )
        trees.append(
            FringeTree(
                root=root,
                vertices=tuple(sorted(comp)),
                edges=edges,
                height=max(dist.values()),
            )
        )
    return tuple(trees)


# ---------------------------------------------------------------------------
# shape templates


@dataclass(frozen=True)
class RootedTreeTemplate:
    """The fixed fan-out tree: the root has ``a`` children, every other
    internal vertex has ``b`` children, and every root-to-leaf path has
    length ``c``.  Vertices are indexed 1..n in breadth-first order, so
    the non-leaves are exactly 1..n_nonleaf and edge ``i`` joins vertex
    ``i`` to its parent for i in [2, n].
    """

    a: int
    b: int
    c: int
    n: int
    n_nonleaf: int
    prt: tuple[int, ...]
    cld: tuple[tuple[int, ...], ...]
    p_prc: tuple[tuple[int, int], ...]

    def parent(self, i: int) -> int:
        return self.prt[i]

    def children(self, i: int) -> tuple[int, ...]:
        return self.cld[i]

    def edge(self, i: int) -> tuple[int, int]:
        """Edge i joins prt(i) to i, defined for i in [2, n]."""
        return (self.prt[i], i)

    def depth(self, i: int) -> int:
        d = 0
        while self.prt[i] != 0:
            i = self.prt[i]
            d += 1
        return d


def tree_template(a: int, b: int, c: int) -> RootedTreeTemplate:
    """Construct the fixed fan-out tree with its precedence pair list.

    The precedence pairs are all (parent, child) pairs plus all
    consecutive-sibling pairs, in breadth-first order.
    """
    if a < 1 or b < 2 or c < 0:
        raise ValueError(f"invalid shape parameters ({a},{b},{c})")
    if c == 0:
        return RootedTreeTemplate(
            a=a, b=b, c=c, n=1, n_nonleaf=0, prt=(0, 0), cld=((), ()), p_prc=()
        )
    n = a * (b**c - 1) // (b - 1) + 1
    n_nonleaf = a * (b ** (c - 1) - 1) // (b - 1) + 1
    prt = [0] * (n + 1)
    cld: list[list[int]] = [[] for _ in range(n + 1)]
    next_index = 2
    frontier = [1]
    for depth in range(c):
        fanout = a if depth == 0 else b
        new_frontier = []
        for v in frontier:
            for _ in range(fanout):
                prt[next_index] = v
                cld[v].append(next_index)
                new_frontier.append(next_index)
                next_index += 1
        frontier = new_frontier
    assert next_index == n + 1
    pairs: list[tuple[int, int]] = [(prt[j], j) for j in range(2, n + 1)]
    for v in range(1, n + 1):
        for x, y in zip(cld[v], cld[v][1:]):
            pairs.append((x, y))
    return RootedTreeTemplate(
        a=a,
        b=b,
        c=c,
        n=n,
        n_nonleaf=n_nonleaf,
        prt=tuple(prt),
        cld=tuple(tuple(x) for x in cld),
        p_prc=tuple(pairs),
    )


# ---------------------------------------------------------------------------
# canonical forms


def rooted_canonical(g: ChemicalGraph, root: int, exclude: int | None = None):
    """Canonical nested-tuple code of the subtree at ``root``.

    The code carries element labels and edge multiplicities; two rooted
    trees are isomorphic (as rooted, labeled, edge-weighted trees) iff
    their codes are equal.  ``exclude`` omits one neighbor, which turns
    the code into that of a half-tree at an edge.
    """

    def code(v: int, parent: int | None):
        parts = []
        for w, m in g.adjacency[v]:
            if w == parent or (w == exclude and v == root):
                continue
            parts.append((m, code(w, v)))
        return (g.labels[v], tuple(sorted(parts)))

    return code(root, None)


def canonical_form(g: ChemicalGraph):
    """Canonical code of a free labeled tree, rooted at its center.

    For a center pair the tree is split at the center edge and the two
    half-codes are combined orientation-independently.
    """
    _, centers = diameter_and_center(g)
    if len(centers) == 1:
        return ("c1", rooted_canonical(g, centers[0]))
    c1, c2 = centers
    m = g.mult(c1, c2)
    code1 = rooted_canonical(g, c1, exclude=c2)
    code2 = rooted_canonical(g, c2, exclude=c1)
    lo, hi = sorted([code1, code2])
    return ("c2", m, lo, hi)


def permuted(g: ChemicalGraph, perm: list[int]) -> ChemicalGraph:
    """Relabel vertices: new vertex ``perm[v]`` is old vertex ``v``."""
    labels = [""] * g.n
    for v, a in enumerate(g.labels):
        labels[perm[v]] = a
    edges = [(perm[u], perm[v], m) for u, v, m in g.edges]
    return ChemicalGraph.make(labels, edges)


def join_graphs(
    g1: ChemicalGraph, v1: int, g2: ChemicalGraph, v2: int, m: int
) -> ChemicalGraph:
    """Disjoint union of two graphs plus a bridge edge v1 -- (v2 shifted)."""
    labels = g1.labels + g2.labels
    off = g1.n
    edges = list(g1.edges) + [(u + off, v + off, mm) for u, v, mm in g2.edges]
    edges.append((v1, v2 + off, m))
    return ChemicalGraph.make(labels, edges)
