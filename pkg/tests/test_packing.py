import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from treecert import (
    PackingWitness,
    ToolError,
    build_graph,
    lemma41_decompose,
    lemma41_gadget_fixture,
    nu_f_exact,
    pack_spanning_trees,
    search_pkd_witness,
    tau_packing,
    tau_partition_bruteforce,
    verify_pkd_witness,
)
from treecert.packing import (
    _is_forest,
    _is_spanning_tree,
    remainder_feasible,
    spanning_forest,
)

from corpus import (
    all_connected_graphs,
    complete,
    cycle,
    graphs,
    path,
    random_connected_graph,
    star,
)


def relabel(g, perm):
    return build_graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


# ---------------------------------------------------------------------------
# nu_f


def test_nu_f_examples():
    r4 = nu_f_exact(complete(4))
    assert r4.value == 2 and r4.p == 4
    r5 = nu_f_exact(complete(5))
    assert r5.value == Fraction(5, 2) and r5.p == 5
    for n in range(3, 8):
        assert nu_f_exact(cycle(n)).value == Fraction(n, n - 1)
    for g in (path(5), star(4), path(2)):
        assert nu_f_exact(g).value == 1
    # trees tie between the all-singleton partition and coarser ones; the
    # tie goes to more blocks
    assert nu_f_exact(path(4)).p == 4


def test_nu_f_minimizing_partition_is_consistent():
    rng = random.Random(2)
    for _ in range(40):
        g = random_connected_graph(rng, 2, 7)
        res = nu_f_exact(g)
        crossing = sum(
            1
            for (u, v) in g.edges
            if next(i for i, b in enumerate(res.partition) if u in b)
            != next(i for i, b in enumerate(res.partition) if v in b)
        )
        assert res.value == Fraction(crossing, res.p - 1)
        assert res.p == len(res.partition)


def test_nu_f_disconnected_and_caps():
    g = build_graph(4, [(0, 1), (2, 3)])
    res = nu_f_exact(g)
    assert res.value == 0 and res.p == 2
    with pytest.raises(ToolError) as err:
        nu_f_exact(complete(13))
    assert err.value.code == "TOO_LARGE"


def test_tau_examples():
    assert tau_partition_bruteforce(complete(4)) == 2
    assert tau_partition_bruteforce(cycle(5)) == 1
    assert tau_partition_bruteforce(build_graph(4, [(0, 1), (2, 3)])) == 0


# ---------------------------------------------------------------------------
# constructive packing


def test_pack_examples():
    trees = pack_spanning_trees(complete(4), 2)
    assert trees is not None and len(trees) == 2
    for t in trees:
        assert _is_spanning_tree(t, 4)
    assert not (trees[0] & trees[1])
    assert pack_spanning_trees(cycle(4), 2) is None  # 4 edges < 2*(n-1)
    assert pack_spanning_trees(complete(2), 1) == (frozenset({(0, 1)}),)


def test_pack_rejects_disconnected():
    with pytest.raises(ToolError) as err:
        pack_spanning_trees(build_graph(4, [(0, 1), (2, 3)]), 1)
    assert err.value.code == "DISCONNECTED"


def test_oracle_equivalence_small():
    for n in range(2, 5):
        for g in all_connected_graphs(n):
            tau = tau_partition_bruteforce(g)
            for k in range(1, tau + 2):
                assert (pack_spanning_trees(g, k) is not None) == (tau >= k)
            assert tau_packing(g) == tau


def test_oracle_equivalence_random():
    rng = random.Random(17)
    for _ in range(80):
        g = random_connected_graph(rng, 2, 6)
        tau = tau_partition_bruteforce(g)
        assert tau_packing(g) == tau
        assert tau == nu_f_exact(g).value.__floor__()


@settings(max_examples=60, deadline=None)
@given(graphs(n_max=6, connected=True))
def test_oracle_equivalence_property(g):
    tau = tau_partition_bruteforce(g)
    assert (pack_spanning_trees(g, tau + 1) is None) if g.n > 1 else True
    if tau >= 1:
        trees = pack_spanning_trees(g, tau)
        assert trees is not None
        assert all(_is_spanning_tree(t, g.n) for t in trees)


def test_packed_trees_are_disjoint_spanning():
    rng = random.Random(71)
    for _ in range(40):
        g = random_connected_graph(rng, 3, 8)
        tau = tau_partition_bruteforce(g)
        if tau < 1:
            continue
        trees = pack_spanning_trees(g, tau)
        assert trees is not None
        seen = set()
        for t in trees:
            assert _is_spanning_tree(t, g.n)
            assert not (seen & t)
            seen |= t


# ---------------------------------------------------------------------------
# witness verification


def test_verify_valid_two_tree_witness():
    k5 = complete(5)
    trees = pack_spanning_trees(k5, 2)
    w = PackingWitness(trees=(trees[0],), forest=trees[1], k=1, d=2)
    assert verify_pkd_witness(k5, w) == []


def test_verify_condition_c():
    k4 = complete(4)
    w = PackingWitness(
        trees=(frozenset({(0, 2), (1, 2), (1, 3)}),),
        forest=frozenset({(0, 1), (2, 3)}),
        k=1,
        d=2,
    )
    assert verify_pkd_witness(k4, w) == ["CONDITION_C"]


def test_verify_shared_edge():
    k4 = complete(4)
    tree = frozenset({(0, 1), (1, 2), (2, 3)})
    w = PackingWitness(trees=(tree,), forest=frozenset({(0, 1), (0, 3), (0, 2)}), k=1, d=1)
    assert "NOT_EDGE_DISJOINT" in verify_pkd_witness(k4, w)


def test_verify_foreign_edge():
    with pytest.raises(ToolError) as err:
        verify_pkd_witness(
            cycle(4),
            PackingWitness(trees=(frozenset({(0, 2)}),), forest=frozenset(), k=1, d=1),
        )
    assert err.value.code == "FOREIGN_EDGE"


def test_verify_reports_all_failures():
    k4 = complete(4)
    w = PackingWitness(
        trees=(frozenset({(0, 1), (1, 2)}),),  # too small
        forest=frozenset({(0, 1)}),  # shared edge and too small for d=3
        k=1,
        d=3,
    )
    out = verify_pkd_witness(k4, w)
    assert "TREE_INVALID:0" in out
    assert "NOT_EDGE_DISJOINT" in out
    assert "CONDITION_B" in out


# ---------------------------------------------------------------------------
# the search


def test_search_examples():
    res = search_pkd_witness(complete(5), 1, 2)
    assert res.status == "FOUND"
    assert verify_pkd_witness(complete(5), res.witness) == []
    assert search_pkd_witness(cycle(4), 1, 2).status == "REFUTED"
    assert search_pkd_witness(complete(4), 2, 3).status == "REFUTED"


def test_search_found_by_enumeration():
    # K4 plus a pendant vertex: tau = 1, so the (k+1) fast path fails and
    # the packing enumeration must discover a tree leaving a good forest
    g = build_graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
    assert tau_partition_bruteforce(g) == 1
    res = search_pkd_witness(g, 1, 2)
    assert res.status == "FOUND"
    assert res.nodes > 0  # really went through the enumeration
    assert verify_pkd_witness(g, res.witness) == []


def test_search_budget_exhaustion():
    res = search_pkd_witness(cycle(5), 1, 2, budget=1)
    assert res.status == "INCONCLUSIVE"
    assert res.witness is None


def test_search_refuted_stable_under_relabeling():
    rng = random.Random(4)
    cases = [(cycle(4), 1, 2), (complete(4), 2, 3), (cycle(6), 1, 3)]
    for g, k, d in cases:
        base = search_pkd_witness(g, k, d).status
        for _ in range(4):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert search_pkd_witness(relabel(g, perm), k, d).status == base


def test_search_preconditions():
    with pytest.raises(ToolError):
        search_pkd_witness(build_graph(4, [(0, 1), (2, 3)]), 1, 1)
    with pytest.raises(ToolError):
        search_pkd_witness(complete(4), 0, 1)


def _all_spanning_trees(g):
    edges = g.sorted_edges()
    out = []

    def rec(i, chosen):
        if len(chosen) == g.n - 1:
            out.append(frozenset(chosen))
            return
        if i == len(edges) or len(edges) - i < g.n - 1 - len(chosen):
            return
        if _is_forest(chosen + [edges[i]], g.n):
            rec(i + 1, chosen + [edges[i]])
        rec(i + 1, chosen)

    rec(0, [])
    return out


def test_search_status_matches_naive_enumeration():
    """Fully independent decision procedure: materialize every spanning
    tree, try every disjoint k-tuple, and scan all forests of each
    remainder. Must agree with the search on FOUND vs REFUTED."""
    from itertools import combinations

    from corpus import exists_good_forest_bruteforce

    rng = random.Random(321)
    cases = 0
    while cases < 25:
        g = random_connected_graph(rng, 3, 5)
        if g.m > 8:
            continue
        k = rng.randint(1, 2)
        d = rng.randint(1, 3)
        trees = _all_spanning_trees(g)
        naive = False
        for combo in combinations(trees, k):
            union = set()
            ok = True
            for t in combo:
                if union & t:
                    ok = False
                    break
                union |= t
            if not ok:
                continue
            if exists_good_forest_bruteforce(g.n, g.edges - frozenset(union), d):
                naive = True
                break
        res = search_pkd_witness(g, k, d)
        assert res.status == ("FOUND" if naive else "REFUTED"), (g, k, d)
        cases += 1


# ---------------------------------------------------------------------------
# remainder reduction vs direct forest enumeration


def test_remainder_reduction_matches_enumeration():
    from corpus import exists_good_forest_bruteforce

    rng = random.Random(99)
    for _ in range(60):
        n = rng.randint(3, 7)
        pool = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(pool)
        edges = pool[: rng.randint(0, min(len(pool), 12))]
        d = rng.randint(1, 4)
        assert remainder_feasible(n, edges, d) == exists_good_forest_bruteforce(n, edges, d)


def test_spanning_forest_is_maximal():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(3, 8)
        pool = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges = [e for e in pool if rng.random() < 0.4]
        f = spanning_forest(n, edges)
        assert _is_forest(f, n)
        from treecert.packing import _components_from_edges

        assert len(f) == n - len(_components_from_edges(n, edges))


# ---------------------------------------------------------------------------
# the 4-component decomposition


def test_lemma41_gadget_decomposition():
    fx = lemma41_gadget_fixture(2)
    g = fx.graph
    from treecert import edge_connectivity

    kappa = edge_connectivity(g)[0]
    x_prime, comps = lemma41_decompose(g, fx.witness, fx.cut, fx.k)
    assert len(comps) == 4
    assert len(x_prime) <= kappa
    assert all(len(c) >= g.min_degree + 1 for c in comps)
    assert not (x_prime & fx.cut)


def test_lemma41_gadget_decomposition_k3():
    fx = lemma41_gadget_fixture(3)
    x_prime, comps = lemma41_decompose(fx.graph, fx.witness, fx.cut, fx.k)
    assert len(comps) == 4
    assert all(len(c) >= fx.graph.min_degree + 1 for c in comps)


def test_lemma41_wrong_component_count():
    fx = lemma41_gadget_fixture(2)
    cd_links = [(e) for e in fx.graph.edges if e[0] in range(20, 30) and e[1] in range(30, 40)]
    with pytest.raises(ToolError) as err:
        lemma41_decompose(fx.graph, fx.witness, cd_links, 2)
    assert err.value.code == "WRONG_COMPONENT_COUNT"


def test_lemma41_boundary_bound_violated():
    fx = lemma41_gadget_fixture(2)
    # swap the A-C links for the C-D links in the cut: the component that
    # keeps A and C together then has boundary 2k+2
    ab = [e for e in fx.cut if e[1] < 20]
    bc = [e for e in fx.cut if e[0] >= 10]
    cd = [e for e in fx.graph.edges if e[0] in range(20, 30) and e[1] in range(30, 40)]
    with pytest.raises(ToolError) as err:
        lemma41_decompose(fx.graph, fx.witness, ab + bc + cd, 2)
    assert err.value.code == "HYPOTHESIS_VIOLATED"


def test_lemma41_degree_hypothesis():
    fx = lemma41_gadget_fixture(2)
    with pytest.raises(ToolError) as err:
        lemma41_decompose(fx.graph, fx.witness, fx.cut, 3)  # needs delta >= 12
    assert err.value.code == "HYPOTHESIS_VIOLATED"


def test_lemma41_parameter_checks():
    fx = lemma41_gadget_fixture(2)
    with pytest.raises(ToolError) as err:
        lemma41_decompose(fx.graph, fx.witness, fx.cut, 1)
    assert err.value.code == "PARAMETER_ERROR"
    with pytest.raises(ToolError) as err:
        lemma41_decompose(fx.graph, fx.witness, [(0, 999)], 2)
    assert err.value.code == "FOREIGN_EDGE"


def test_lemma41_regrouping_branch():
    # Seven K10 blocks: M sits between leaves L1, L2 (one link each), so
    # cutting along the witness set M shatters its component into three
    # pieces and the spanning-tree regrouping has to rebuild two sides.
    # B carries pendant E and C carries pendant D (two links each) to
    # supply the other two minimum-cut sides (kappa' = 2).
    from treecert import GtWitness, edge_connectivity

    q = 10
    M = range(0, 10)
    L1 = range(10, 20)
    L2 = range(20, 30)
    B = range(30, 40)
    C = range(40, 50)
    E = range(50, 60)
    D = range(60, 70)
    edges = []
    for blk in (M, L1, L2, B, C, E, D):
        edges.extend(
            (blk[i], blk[j]) for i in range(q) for j in range(i + 1, q)
        )
    edges += [(M[0], L1[0]), (M[0], L2[0])]  # inside the split component
    cut = [
        (L1[1], B[0]), (L1[2], B[1]),  # L1-B
        (L2[1], C[0]), (L2[2], C[1]),  # L2-C
        (B[2], C[2]),                  # B-C
    ]
    edges += cut
    edges += [(B[3], E[0]), (B[4], E[1])]  # pendants keep kappa' = 2
    edges += [(C[3], D[0]), (C[4], D[1])]
    g = build_graph(70, edges)
    assert g.min_degree == 9
    assert edge_connectivity(g)[0] == 2
    witness = GtWitness(t=2, subsets=(frozenset(M), frozenset(E), frozenset(D)))
    from treecert import validate_gt_witness

    assert validate_gt_witness(g, witness) == []
    x_prime, comps = lemma41_decompose(g, witness, cut, 2)
    assert len(comps) == 4
    assert len(x_prime) <= 2
    assert all(len(c) >= 10 for c in comps)
