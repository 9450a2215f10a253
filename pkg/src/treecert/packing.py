"""Exact spanning-tree packing machinery.

Three independent routes live here on purpose:

* the fractional packing number by complete set-partition enumeration
  (exact rationals, the ground truth),
* constructive tree packing by matroid-union augmentation (polynomial,
  produces the actual trees),
* an exhaustive packing search deciding whether k disjoint spanning trees
  can leave room for one more sufficiently large forest.

All threshold comparisons are integer/rational; floating point never
decides a combinatorial branch.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .connectivity import GtWitness, edge_connectivity, validate_gt_witness
from .errors import ToolError
from .graphs import Edge, Graph, VertexSet, components, edge, is_connected

NU_F_CAP = 12
DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class FractionalPackingResult:
    value: Fraction
    partition: tuple[VertexSet, ...]
    p: int


@dataclass(frozen=True)
class PackingWitness:
    """k edge-disjoint spanning trees plus one more edge-disjoint forest."""

    trees: tuple[frozenset[Edge], ...]
    forest: frozenset[Edge]
    k: int
    d: int


@dataclass(frozen=True)
class PkdSearchResult:
    status: str  # FOUND | REFUTED | INCONCLUSIVE
    witness: PackingWitness | None
    nodes: int


# ---------------------------------------------------------------------------
# fractional packing number


@lru_cache(maxsize=256)
def nu_f_exact(g: Graph) -> FractionalPackingResult:
    """Exact min over all vertex partitions (p >= 2) of
    (crossing edges) / (p - 1), by complete restricted-growth enumeration.

    Ties prefer more blocks, then the lexicographically first assignment.
    Disconnected graphs yield value 0 with the component partition.
    """
    if g.n < 2:
        raise ToolError("TOO_SMALL", f"need n >= 2, got n={g.n}")
    if g.n > NU_F_CAP:
        raise ToolError("TOO_LARGE", f"partition enumeration capped at n={NU_F_CAP}")
    comps = components(g)
    if len(comps) > 1:
        return FractionalPackingResult(
            value=Fraction(0), partition=tuple(comps), p=len(comps)
        )
    n = g.n
    below = [sorted(u for u in g.adjacency[v] if u < v) for v in range(n)]
    assign = [0] * n
    best: list = [None, 0, None]  # value, p, assignment copy

    def rec(v: int, nblocks: int, crossing: int) -> None:
        if v == n:
            if nblocks < 2:
                return
            val = Fraction(crossing, nblocks - 1)
            if best[0] is None or val < best[0] or (val == best[0] and nblocks > best[1]):
                best[0], best[1], best[2] = val, nblocks, assign.copy()
            return
        counts = [0] * (nblocks + 1)
        for u in below[v]:
            counts[assign[u]] += 1
        deg_below = len(below[v])
        for b in range(nblocks + 1):
            assign[v] = b
            rec(v + 1, nblocks + (1 if b == nblocks else 0), crossing + deg_below - counts[b])

    rec(1, 1, 0)
    blocks: list[list[int]] = [[] for _ in range(best[1])]
    for v, b in enumerate(best[2]):
        blocks[b].append(v)
    return FractionalPackingResult(
        value=best[0], partition=tuple(frozenset(b) for b in blocks), p=best[1]
    )


def tau_partition_bruteforce(g: Graph) -> int:
    """Spanning-tree packing number as the exact floor of the fractional
    packing number (partition brute force, the oracle route)."""
    return math.floor(nu_f_exact(g).value)


# ---------------------------------------------------------------------------
# constructive packing (matroid-union augmentation)


class _Forests:
    """k edge-disjoint forests with per-forest adjacency for path queries."""

    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        self.adj: list[dict[int, set[int]]] = [{} for _ in range(k)]
        self.owner: dict[Edge, int] = {}

    def add(self, i: int, e: Edge) -> None:
        u, v = e
        self.adj[i].setdefault(u, set()).add(v)
        self.adj[i].setdefault(v, set()).add(u)
        self.owner[e] = i

    def remove(self, i: int, e: Edge) -> None:
        u, v = e
        self.adj[i][u].discard(v)
        self.adj[i][v].discard(u)

    def path_edges(self, i: int, u: int, v: int) -> list[Edge] | None:
        """Edges of the forest-i path from u to v; None if no path exists
        (so the edge (u, v) can join forest i without a cycle)."""
        adj = self.adj[i]
        if u not in adj or v not in adj:
            return None
        parent: dict[int, int | None] = {u: None}
        dq = deque([u])
        while dq:
            x = dq.popleft()
            if x == v:
                break
            for y in adj.get(x, ()):
                if y not in parent:
                    parent[y] = x
                    dq.append(y)
        if v not in parent:
            return None
        path = []
        y = v
        while parent[y] is not None:
            path.append(edge(parent[y], y))
            y = parent[y]
        return path

    def try_insert(self, e0: Edge) -> bool:
        """Shortest augmenting exchange: breadth-first labeling over edges,
        then the chain of moves that frees a slot for e0."""
        pred: dict[Edge, tuple[Edge, int] | None] = {e0: None}
        dq = deque([e0])
        while dq:
            f = dq.popleft()
            u, v = f
            for i in range(self.k):
                if self.owner.get(f) == i:
                    continue
                path = self.path_edges(i, u, v)
                if path is None:
                    cur, dest = f, i
                    while True:
                        src = self.owner.get(cur)
                        if src is not None:
                            self.remove(src, cur)
                        self.add(dest, cur)
                        info = pred[cur]
                        if info is None:
                            break
                        cur, dest = info
                    return True
                for h in path:
                    if h not in pred:
                        pred[h] = (f, i)
                        dq.append(h)
        return False

    def edge_sets(self) -> list[frozenset[Edge]]:
        out: list[set[Edge]] = [set() for _ in range(self.k)]
        for e, i in self.owner.items():
            out[i].add(e)
        return [frozenset(s) for s in out]


def pack_spanning_trees(g: Graph, k: int) -> tuple[frozenset[Edge], ...] | None:
    """k pairwise edge-disjoint spanning trees of g, or None exactly when
    fewer than k exist. Matroid-union augmentation over the k forests."""
    if k < 1:
        raise ToolError("PARAMETER_ERROR", f"k must be >= 1, got {k}")
    if not is_connected(g):
        raise ToolError("DISCONNECTED", "tree packing needs a connected graph")
    target = k * (g.n - 1)
    if g.m < target:
        return None
    forests = _Forests(k, g.n)
    placed = 0
    for e in g.sorted_edges():
        if forests.try_insert(e):
            placed += 1
            if placed == target:
                break
    if placed < target:
        return None
    trees = tuple(forests.edge_sets())
    for t in trees:
        if not _is_spanning_tree(t, g.n):
            raise ToolError("INTERNAL", "augmentation produced a non-tree")
    return trees


def tau_packing(g: Graph) -> int:
    """Packing number via the constructive route (works beyond the
    partition-enumeration size cap)."""
    if g.n < 2:
        raise ToolError("TOO_SMALL", f"need n >= 2, got n={g.n}")
    if not is_connected(g):
        return 0
    k = 0
    while g.m >= (k + 1) * (g.n - 1) and pack_spanning_trees(g, k + 1) is not None:
        k += 1
    return k


# ---------------------------------------------------------------------------
# forest helpers


def _components_from_edges(n: int, edges) -> list[VertexSet]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [frozenset(vs) for vs in groups.values()]


def _is_forest(edges, n: int) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def _is_spanning_tree(edges, n: int) -> bool:
    return len(edges) == n - 1 and _is_forest(edges, n)


def spanning_forest(n: int, edges) -> frozenset[Edge]:
    """A maximal forest of the given edge set (greedy over sorted edges)."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v in sorted(edges):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
    return frozenset(chosen)


def remainder_feasible(n: int, remainder_edges, d: int) -> bool:
    """Whether some forest inside the remainder meets both the size bound
    (more than (d-1)/d of n-1 edges) and the big-component requirement.

    The maximal spanning forest of the remainder optimizes both at once:
    a connected remainder gives a spanning tree (always enough); otherwise
    the forest has n - c edges and its largest component matches the
    largest remainder component.
    """
    comps = _components_from_edges(n, remainder_edges)
    c = len(comps)
    if c == 1:
        return True
    if d * (n - c) <= (d - 1) * (n - 1):
        return False
    return max(len(comp) for comp in comps) >= d + 1


def forest_meets_conditions(n: int, forest_edges, d: int) -> bool:
    """Direct check of the two forest requirements for an explicit forest
    (used by the enumeration oracle in the tests)."""
    size = len(forest_edges)
    if d * size <= (d - 1) * (n - 1):
        return False
    if _is_spanning_tree(forest_edges, n):
        return True
    comps = _components_from_edges(n, forest_edges)
    lookup = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            lookup[v] = ci
    per_comp = [0] * len(comps)
    for u, _v in forest_edges:
        per_comp[lookup[u]] += 1
    return any(cnt >= d for cnt in per_comp)


# ---------------------------------------------------------------------------
# property P(k, d): verification and search


def verify_pkd_witness(g: Graph, w: PackingWitness) -> list[str]:
    """Every violated witness invariant (empty list = valid).

    Checks all of: each tree spans, everything is pairwise edge-disjoint,
    the extra edge set is a forest, its size clears the exact rational
    threshold, and a non-spanning forest has a component with >= d edges.
    """
    if w.k < 1 or w.d < 1:
        raise ToolError("PARAMETER_ERROR", "k and d must be >= 1")
    for es in list(w.trees) + [w.forest]:
        for e in es:
            if edge(*e) not in g.edges:
                raise ToolError("FOREIGN_EDGE", f"edge {e} not in the graph")
    violations = []
    if len(w.trees) != w.k:
        violations.append("TREE_COUNT")
    for i, t in enumerate(w.trees):
        if not _is_spanning_tree(t, g.n):
            violations.append(f"TREE_INVALID:{i}")
    total = sum(len(t) for t in w.trees) + len(w.forest)
    union: set[Edge] = set()
    for t in w.trees:
        union |= t
    union |= w.forest
    if len(union) != total:
        violations.append("NOT_EDGE_DISJOINT")
    if not _is_forest(w.forest, g.n):
        violations.append("FOREST_INVALID")
    else:
        if not (w.d * len(w.forest) > (w.d - 1) * (g.n - 1)):
            violations.append("CONDITION_B")
        if not _is_spanning_tree(w.forest, g.n):
            comps = _components_from_edges(g.n, w.forest)
            if max(len(c) for c in comps) < w.d + 1:
                violations.append("CONDITION_C")
    return violations


class _Found(Exception):
    def __init__(self, witness):
        self.witness = witness


class _OutOfBudget(Exception):
    pass


class _TreeDSU:
    """Union-find without path compression so unions roll back in O(1)."""

    __slots__ = ("parent", "trail")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.trail: list[int] = []

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            x = p[x]
        return x

    def union(self, u: int, v: int) -> bool:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[ru] = rv
        self.trail.append(ru)
        return True

    def undo(self) -> None:
        ru = self.trail.pop()
        self.parent[ru] = ru


def _edges_span(n: int, edges) -> bool:
    return len(_components_from_edges(n, edges)) == 1


def search_pkd_witness(
    g: Graph, k: int, d: int, budget: int = DEFAULT_BUDGET
) -> PkdSearchResult:
    """Decide whether k disjoint spanning trees plus a qualifying extra
    forest exist.

    FOUND always carries a verified witness. REFUTED is only returned after
    the canonical packing enumeration ran to completion; running out of the
    node budget first yields INCONCLUSIVE. Two fast paths: a (k+1)-packing
    settles FOUND immediately, and failure to pack k trees settles REFUTED.
    """
    if k < 1 or d < 1:
        raise ToolError("PARAMETER_ERROR", "k and d must be >= 1")
    if g.n < 2:
        raise ToolError("TOO_SMALL", f"need n >= 2, got n={g.n}")
    if not is_connected(g):
        raise ToolError("DISCONNECTED", "the search needs a connected graph")

    if pack_spanning_trees(g, k) is None:
        return PkdSearchResult("REFUTED", None, 0)
    extra = pack_spanning_trees(g, k + 1)
    if extra is not None:
        w = PackingWitness(trees=extra[:k], forest=extra[k], k=k, d=d)
        bad = verify_pkd_witness(g, w)
        if bad:
            raise ToolError("INTERNAL", f"fast path built an invalid witness: {bad}")
        return PkdSearchResult("FOUND", w, 0)

    # tau(g) == k exactly: enumerate every k-packing, checking whether the
    # leftover edges can host the forest. Trees are built as increasing
    # edge-index sequences with strictly increasing first edges across the
    # trees, so each unordered packing appears exactly once.
    edges = g.sorted_edges()
    m = len(edges)
    n = g.n
    need = n - 1
    used = [False] * m
    tree_edges: list[list[int]] = [[] for _ in range(k)]
    dsus = [_TreeDSU(n) for _ in range(k)]
    nodes = [0]

    def tick() -> None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise _OutOfBudget

    def start_tree(ti: int, min_first: int) -> None:
        tick()
        if ti == k:
            remainder = [edges[j] for j in range(m) if not used[j]]
            if remainder_feasible(n, remainder, d):
                raise _Found(_build_witness(g, edges, tree_edges, remainder, k, d))
            return
        unused = [edges[j] for j in range(m) if not used[j]]
        if not _edges_span(n, unused):
            return
        dsus[ti] = _TreeDSU(n)
        grow(ti, min_first, 0)

    def grow(ti: int, pos: int, cnt: int) -> None:
        tick()
        if cnt == need:
            start_tree(ti + 1, tree_edges[ti][0] + 1)
            return
        dsu = dsus[ti]
        for j in range(pos, m):
            if m - j < need - cnt:
                break
            if used[j]:
                continue
            u, v = edges[j]
            if not dsu.union(u, v):
                continue
            used[j] = True
            tree_edges[ti].append(j)
            grow(ti, j + 1, cnt + 1)
            tree_edges[ti].pop()
            used[j] = False
            dsu.undo()

    try:
        start_tree(0, 0)
    except _Found as hit:
        return PkdSearchResult("FOUND", hit.witness, nodes[0])
    except _OutOfBudget:
        return PkdSearchResult("INCONCLUSIVE", None, nodes[0])
    return PkdSearchResult("REFUTED", None, nodes[0])


def _build_witness(g, edges, tree_edges, remainder, k, d) -> PackingWitness:
    trees = tuple(frozenset(edges[j] for j in idxs) for idxs in tree_edges)
    forest = spanning_forest(g.n, remainder)
    w = PackingWitness(trees=trees, forest=forest, k=k, d=d)
    bad = verify_pkd_witness(g, w)
    if bad:
        raise ToolError("INTERNAL", f"search built an invalid witness: {bad}")
    return w


# ---------------------------------------------------------------------------
# constructive decomposition into four big components


def lemma41_decompose(
    g: Graph, gt: GtWitness, x, k: int
) -> tuple[frozenset[Edge], tuple[VertexSet, ...]]:
    """Given a cut x splitting g into three components under the stated
    boundary bounds, produce extra edges x' (at most kappa' of them, all
    outside x) whose removal leaves exactly four components, each with at
    least min_degree + 1 vertices.

    The construction cuts one component along its intersection with a
    witness subset; if that shatters it into more than two pieces, the
    pieces are regrouped into two connected sides via a spanning tree of
    the contracted piece graph, which keeps every removed edge inside the
    candidate cut.
    """
    if k < 2:
        raise ToolError("PARAMETER_ERROR", f"k must be >= 2, got {k}")
    xset = frozenset(edge(*e) for e in x)
    for e in xset:
        if e not in g.edges:
            raise ToolError("FOREIGN_EDGE", f"edge {e} not in the graph")
    delta = g.min_degree
    if delta < 3 * k + 3:
        raise ToolError(
            "HYPOTHESIS_VIOLATED", f"min degree {delta} < 3k+3 = {3 * k + 3}"
        )
    remaining = g.edges - xset
    comps = sorted(_components_from_edges(g.n, remaining), key=lambda s: min(s))
    if len(comps) != 3:
        raise ToolError(
            "WRONG_COMPONENT_COUNT", f"cut leaves {len(comps)} components, need 3"
        )
    r = []
    for comp in comps:
        mask = 0
        for v in comp:
            mask |= 1 << v
        r.append(sum((g.adj_bits[v] & ~mask).bit_count() for v in comp))
    for ri in r:
        if not (k + 1 <= ri <= 2 * k + 1):
            raise ToolError(
                "HYPOTHESIS_VIOLATED", f"boundary {ri} outside [{k + 1}, {2 * k + 1}]"
            )
    if sum(r) > 4 * k + 3:
        raise ToolError("HYPOTHESIS_VIOLATED", f"sum of boundaries {sum(r)} > {4 * k + 3}")
    if gt.t != 2:
        raise ToolError("HYPOTHESIS_VIOLATED", f"need a t=2 witness, got t={gt.t}")
    problems = validate_gt_witness(g, gt)
    if problems:
        raise ToolError("HYPOTHESIS_VIOLATED", f"invalid class witness: {problems}")

    kappa, _ = edge_connectivity(g)
    split = None
    for comp in comps:
        for block in gt.subsets:
            inter = comp & block
            if inter and inter != comp:
                split = (comp, inter)
                break
        if split:
            break
    if split is None:
        raise ToolError("NO_SPLIT_FOUND", "no component meets a witness subset properly")

    comp, inter = split
    comp_edges = [e for e in remaining if e[0] in comp and e[1] in comp]
    x1 = {e for e in comp_edges if (e[0] in inter) != (e[1] in inter)}
    keep = [e for e in comp_edges if e not in x1]
    pieces = [p for p in _components_from_edges(g.n, keep) if p <= comp]
    if len(pieces) == 2:
        x_prime = frozenset(x1)
    else:
        # contract the pieces, then bipartition them along one edge of a
        # spanning tree of the contracted graph; the two sides stay
        # connected and only candidate-cut edges cross between them
        piece_of = {}
        for pi, p in enumerate(pieces):
            for v in p:
                piece_of[v] = pi
        h_adj: dict[int, set[int]] = {i: set() for i in range(len(pieces))}
        for u, v in x1:
            a, b = piece_of[u], piece_of[v]
            if a != b:
                h_adj[a].add(b)
                h_adj[b].add(a)
        tree = []
        seen = {0}
        dq = deque([0])
        while dq:
            a = dq.popleft()
            for b in sorted(h_adj[a]):
                if b not in seen:
                    seen.add(b)
                    tree.append((a, b))
                    dq.append(b)
        if len(seen) != len(pieces):
            raise ToolError("NO_SPLIT_FOUND", "piece graph unexpectedly disconnected")
        cut_edge = tree[0]
        group = {cut_edge[0]: 0, cut_edge[1]: 1}
        changed = True
        while changed:
            changed = False
            for pa, pb in tree[1:]:
                if pa in group and pb not in group:
                    group[pb] = group[pa]
                    changed = True
                elif pb in group and pa not in group:
                    group[pa] = group[pb]
                    changed = True
        x_prime = frozenset(
            e for e in x1 if group[piece_of[e[0]]] != group[piece_of[e[1]]]
        )

    final = sorted(
        _components_from_edges(g.n, g.edges - xset - x_prime), key=lambda s: min(s)
    )
    if len(final) != 4:
        raise ToolError("NO_SPLIT_FOUND", f"removal left {len(final)} components")
    if len(x_prime) > kappa:
        raise ToolError("NO_SPLIT_FOUND", f"|x'|={len(x_prime)} exceeds kappa'={kappa}")
    if any(len(c) < delta + 1 for c in final):
        raise ToolError("NO_SPLIT_FOUND", "a component is smaller than min degree + 1")
    return x_prime, tuple(final)
