"""Graph family generators, the seeded experiment runner, and report
serialization.

The runner is the counterexample hunter: it sweeps families of graphs,
evaluates the selected certification conditions, cross-verifies against
the packing ground truth where feasible, and counts any CERTIFIED row
whose ground truth is REFUTED. Per-trial randomness is counter-based
(per-trial seed = spec seed xor trial index), so reports are byte-stable
at any parallelism width.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .certify import (
    CROSS_DEFAULT_ON_MAX_N,
    CROSS_VERIFY_CAP,
    THEOREM_IDS,
    CertificateRequest,
    _REGISTRY,
    certify,
)
from .connectivity import GtWitness
from .errors import ToolError
from .graphs import Edge, Graph, build_graph, is_connected
from .packing import search_pkd_witness
from .quotient import check_interlacing, quotient_laplacian
from .spectra import spectral_profile

_MIX = 0x9E3779B97F4A7C15
_MASK = (1 << 63) - 1

INTERLACING_TOL = 1e-8


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def _block(i: int, q: int) -> range:
    return range(i * q, (i + 1) * q)


def _clique_edges(vs) -> list[Edge]:
    vs = list(vs)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _need(params: dict, key: str) -> int:
    if key not in params:
        raise ToolError("SPEC_ERROR", f"missing parameter {key!r}")
    return params[key]


def generate(spec: FamilySpec) -> Graph:
    """Deterministic graph for (spec, seed)."""
    fam, p = spec.family, spec.params
    if fam == "complete":
        n = _need(p, "n")
        if n < 1:
            raise ToolError("SPEC_ERROR", "complete needs n >= 1")
        return build_graph(n, _clique_edges(range(n)))
    if fam == "cycle":
        n = _need(p, "n")
        if n < 3:
            raise ToolError("SPEC_ERROR", "cycle needs n >= 3")
        return build_graph(n, [(i, (i + 1) % n) for i in range(n)])
    if fam == "path":
        n = _need(p, "n")
        if n < 1:
            raise ToolError("SPEC_ERROR", "path needs n >= 1")
        return build_graph(n, [(i, i + 1) for i in range(n - 1)])
    if fam == "gnp":
        n = _need(p, "n")
        prob = _need(p, "p")
        if n < 1 or not (0 <= prob <= 1):
            raise ToolError("SPEC_ERROR", "gnp needs n >= 1 and p in [0, 1]")
        rng = random.Random(spec.seed)
        edges = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < prob
        ]
        return build_graph(n, edges)
    if fam == "random_regular":
        return _random_regular(p, spec.seed)
    if fam == "clique_chain":
        c, q, l = _need(p, "blocks"), _need(p, "q"), p.get("links", 1)
        if c < 2 or q < 2 or not (1 <= l <= q):
            raise ToolError("SPEC_ERROR", "clique_chain needs blocks>=2, q>=2, 1<=links<=q")
        edges = []
        for b in range(c):
            edges.extend(_clique_edges(_block(b, q)))
        for b in range(c - 1):
            for j in range(l):
                edges.append((b * q + j, (b + 1) * q + j))
        return build_graph(c * q, edges)
    if fam == "clique_star":
        pend, q, l = _need(p, "pendants"), _need(p, "q"), p.get("links", 1)
        if pend < 2 or q < 2 or not (1 <= l <= q):
            raise ToolError("SPEC_ERROR", "clique_star needs pendants>=2, q>=2, 1<=links<=q")
        edges = []
        for b in range(pend + 1):
            edges.extend(_clique_edges(_block(b, q)))
        for i in range(1, pend + 1):
            for j in range(l):
                edges.append((j, i * q + j))
        return build_graph((pend + 1) * q, edges)
    if fam == "clique_gadget_lemma41":
        return lemma41_gadget_fixture(_need(p, "k")).graph
    raise ToolError("SPEC_ERROR", f"unknown family {fam!r}")


def _random_regular(p: dict, seed: int) -> Graph:
    """r-regular graph: a circulant scrambled by degree-preserving edge
    swaps. Always succeeds, unlike stub pairing, which rejects too often
    at dense r."""
    n, r = _need(p, "n"), _need(p, "r")
    if n < 2 or r < 1 or r >= n or (n * r) % 2:
        raise ToolError("SPEC_ERROR", "random_regular needs 1 <= r < n with n*r even")
    edges = set()
    for v in range(n):
        for j in range(1, r // 2 + 1):
            w = (v + j) % n
            edges.add((min(v, w), max(v, w)))
    if r % 2:  # n is even here since n*r is
        for v in range(n // 2):
            edges.add((v, v + n // 2))
    rng = random.Random(seed)
    edge_list = sorted(edges)
    for _ in range(30 * len(edge_list)):
        i, j = rng.randrange(len(edge_list)), rng.randrange(len(edge_list))
        if i == j:
            continue
        a, b = edge_list[i]
        c, d = edge_list[j]
        if rng.random() < 0.5:
            b, a = a, b
        if len({a, b, c, d}) < 4:
            continue
        e1 = (min(a, c), max(a, c))
        e2 = (min(b, d), max(b, d))
        if e1 in edges or e2 in edges:
            continue
        edges.discard(edge_list[i])
        edges.discard(edge_list[j])
        edges.add(e1)
        edges.add(e2)
        edge_list[i], edge_list[j] = e1, e2
    return build_graph(n, edges)


@dataclass(frozen=True)
class Lemma41Fixture:
    """A gadget graph with its designated 3-component cut and a class
    witness, sized so the 4-component decomposition hypotheses hold."""

    graph: Graph
    cut: frozenset[Edge]
    witness: GtWitness
    k: int


def lemma41_gadget_fixture(k: int) -> Lemma41Fixture:
    """Five cliques of order 3k+4 (A, B, C, D, E): a triangle of links
    between A, B, C sized to hit the boundary bounds, plus pendant links
    C-D and A-E of exactly the connectivity k+1 to supply the witness."""
    if k < 2:
        raise ToolError("SPEC_ERROR", "the gadget needs k >= 2")
    q = 3 * k + 4
    a_links = (k + 2) // 2
    c_links = (k + 1) - a_links
    A, B, C, D, E = (_block(i, q) for i in range(5))
    edges: list[Edge] = []
    for blk in (A, B, C, D, E):
        edges.extend(_clique_edges(blk))
    cut = []
    for j in range(a_links):
        cut.append((A[j], B[j]))
        cut.append((A[j], C[j]))
    for j in range(c_links):
        cut.append((B[j], C[j]))
    edges.extend(cut)
    for j in range(k + 1):
        edges.append((C[j], D[j]))
        edges.append((A[j], E[j]))
    graph = build_graph(5 * q, edges)
    witness = GtWitness(
        t=2, subsets=(frozenset(B), frozenset(D), frozenset(E))
    )
    return Lemma41Fixture(graph=graph, cut=frozenset(cut), witness=witness, k=k)


# ---------------------------------------------------------------------------
# experiment runner


@dataclass
class ExperimentConfig:
    families: list  # entries: {"family", "params", "seed", "trials"}
    theorems: list
    k_grid: list
    d_grid: list = field(default_factory=list)
    a_grid: list = field(default_factory=list)
    b_grid: list = field(default_factory=list)
    decision_tol: float = 1e-8
    packing_budget: int = 20000
    jobs: int = 1

    def to_dict(self) -> dict:
        return {
            "families": self.families,
            "theorems": self.theorems,
            "k_grid": self.k_grid,
            "d_grid": self.d_grid,
            "a_grid": self.a_grid,
            "b_grid": self.b_grid,
            "decision_tol": self.decision_tol,
            "packing_budget": self.packing_budget,
            "jobs": self.jobs,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        bad = set(data) - known
        if bad:
            raise ToolError("CONFIG_ERROR", f"unknown config keys {sorted(bad)}")
        return cls(**data)


def _validate_config(cfg: ExperimentConfig) -> None:
    if not cfg.families:
        raise ToolError("CONFIG_ERROR", "no families configured")
    for entry in cfg.families:
        if "family" not in entry:
            raise ToolError("CONFIG_ERROR", f"family entry without name: {entry}")
        if entry.get("trials", 1) < 0:
            raise ToolError("CONFIG_ERROR", "trials must be >= 0")
    for tid in cfg.theorems:
        if tid not in THEOREM_IDS:
            raise ToolError("CONFIG_ERROR", f"unknown theorem id {tid!r}")
    if cfg.theorems and not cfg.k_grid:
        raise ToolError("CONFIG_ERROR", "k_grid must be non-empty")
    if "thm1.1" in cfg.theorems and not cfg.d_grid:
        raise ToolError("CONFIG_ERROR", "thm1.1 selected but d_grid is empty")
    for tid in cfg.theorems:
        rule = _REGISTRY.get(tid)
        if rule is None:
            continue
        if rule.takes_a and not cfg.a_grid:
            raise ToolError("CONFIG_ERROR", f"{tid} selected but a_grid is empty")
        if rule.b_sign > 0 and not any(Fraction(str(x)) > 0 for x in cfg.b_grid):
            raise ToolError("CONFIG_ERROR", f"{tid} needs a positive value in b_grid")
        if rule.b_sign < 0 and not any(Fraction(str(x)) < 0 for x in cfg.b_grid):
            raise ToolError("CONFIG_ERROR", f"{tid} needs a negative value in b_grid")
    if cfg.decision_tol <= 0:
        raise ToolError("CONFIG_ERROR", "decision_tol must be > 0")
    if cfg.packing_budget < 1:
        raise ToolError("CONFIG_ERROR", "packing_budget must be >= 1")


def _request_combos(cfg: ExperimentConfig, tid: str):
    """All valid (k, d, a, b) requests for one condition id."""
    combos = []
    if tid == "thm1.1":
        for k in cfg.k_grid:
            for d in cfg.d_grid:
                combos.append((k, d, None, None))
        return combos
    rule = _REGISTRY[tid]
    for k in cfg.k_grid:
        if k < rule.k_min:
            continue
        if not rule.takes_a:
            combos.append((k, None, None, None))
        elif rule.b_sign == 0:
            for a in cfg.a_grid:
                combos.append((k, None, a, None))
        else:
            for a in cfg.a_grid:
                for b in cfg.b_grid:
                    bq = Fraction(str(b))
                    if rule.b_sign > 0 and bq <= 0:
                        continue
                    if rule.b_sign < 0 and bq >= 0:
                        continue
                    if rule.a_min == Fraction(-1) and Fraction(str(a)) / bq < -1:
                        continue
                    combos.append((k, None, a, b))
    return combos


def _trial_graph(entry: dict, trial_seed: int):
    """Generate the trial's graph; gnp resamples toward connectivity."""
    fam = entry["family"]
    params = entry.get("params", {})
    if fam == "gnp":
        for attempt in range(100):
            seed = (trial_seed * _MIX + attempt) & _MASK
            g = generate(FamilySpec(family=fam, params=params, seed=seed))
            if is_connected(g):
                return g, seed
        return None, trial_seed
    g = generate(FamilySpec(family=fam, params=params, seed=trial_seed))
    return g, trial_seed


def _random_partition(n: int, rng: random.Random) -> list[list[int]]:
    p = rng.randint(2, min(n, 4))
    for _ in range(50):
        assign = [rng.randrange(p) for _ in range(n)]
        blocks = [[v for v in range(n) if assign[v] == b] for b in range(p)]
        if all(blocks):
            return blocks
    return [[0], list(range(1, n))]


def _run_trial(args) -> dict:
    cfg_data, entry, index, local_index = args
    cfg = ExperimentConfig.from_dict(cfg_data)
    trial_seed = (entry.get("seed", 0) ^ local_index) & _MASK
    row: dict = {
        "trial": index,
        "family": entry["family"],
        "params": entry.get("params", {}),
        "seed": trial_seed,
    }
    try:
        g, used_seed = _trial_graph(entry, trial_seed)
    except ToolError as err:
        row["error"] = err.code
        return row
    if g is None:
        row["status"] = "SKIPPED"
        return row
    row["seed"] = used_seed
    row["graph"] = {
        "n": g.n,
        "m": g.m,
        "min_degree": g.min_degree,
        "max_degree": g.max_degree,
    }
    if not is_connected(g):
        row["status"] = "SKIPPED"
        return row

    search_cache: dict = {}

    def cross_result(k: int, d: int):
        key = (k, d)
        if key not in search_cache:
            search_cache[key] = search_pkd_witness(g, k, d, budget=cfg.packing_budget)
        return search_cache[key]

    cross_on = g.n <= min(CROSS_DEFAULT_ON_MAX_N, CROSS_VERIFY_CAP)
    certs = []
    for tid in cfg.theorems:
        for k, d, a, b in _request_combos(cfg, tid):
            # str() keeps decimal config literals exact (0.1 -> 1/10)
            req = CertificateRequest(
                theorem_id=tid, k=k, d=d,
                a=None if a is None else Fraction(str(a)),
                b=None if b is None else Fraction(str(b)),
                decision_tol=cfg.decision_tol,
            )
            digest: dict = {"theorem_id": tid, "k": k, "d": d, "a": a, "b": b}
            try:
                pre = cross_result(k, d if d is not None else g.min_degree) if cross_on else None
                rep = certify(g, req, budget=cfg.packing_budget, cross_result=pre)
                digest["outcome"] = rep.outcome
                digest["measured"] = rep.measured
                digest["threshold_decimal"] = (
                    None if rep.threshold is None else float(rep.threshold)
                )
                if rep.cross_check is not None:
                    digest["cross_status"] = rep.cross_check.status
                    digest["consistent"] = rep.cross_check.consistent
            except ToolError as err:
                digest["error"] = err.code
            certs.append(digest)
    row["certificates"] = certs

    rng = random.Random((trial_seed * _MIX + 0xA5A5) & _MASK)
    blocks = _random_partition(g.n, rng)
    quotient_eigs = quotient_laplacian(g, blocks).eigenvalues()
    lap_eigs = spectral_profile(g, 1, -1).eigenvalues
    if len(quotient_eigs) < len(lap_eigs):
        row["interlacing_pass"] = (
            check_interlacing(lap_eigs, quotient_eigs, INTERLACING_TOL) is None
        )
    else:
        row["interlacing_pass"] = True  # singleton-blocks partition: same spectrum
    return row


@dataclass
class ExperimentReport:
    rows: list
    summary: dict

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.rows]
        lines.append(json.dumps({"type": "summary", **self.summary}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def aggregates_csv(self) -> str:
        cols = [
            "theorem_id", "evaluated", "hypothesis_failed", "condition_fails",
            "marginal", "certified", "cross_found", "cross_refuted",
            "cross_inconclusive", "counterexamples",
        ]
        out = [",".join(cols)]
        per = self.summary["per_theorem"]
        for tid in sorted(per):
            row = per[tid]
            out.append(",".join([tid] + [str(row[c]) for c in cols[1:]]))
        total = self.summary
        out.append(
            ",".join(
                [
                    "TOTAL",
                    str(sum(per[t]["evaluated"] for t in per)),
                    str(sum(per[t]["hypothesis_failed"] for t in per)),
                    str(sum(per[t]["condition_fails"] for t in per)),
                    str(sum(per[t]["marginal"] for t in per)),
                    str(sum(per[t]["certified"] for t in per)),
                    str(sum(per[t]["cross_found"] for t in per)),
                    str(sum(per[t]["cross_refuted"] for t in per)),
                    str(sum(per[t]["cross_inconclusive"] for t in per)),
                    str(total["counterexamples"]),
                ]
            )
        )
        return "\n".join(out) + "\n"


def run_experiment(cfg: ExperimentConfig, jobs: int | None = None) -> ExperimentReport:
    """Run every configured trial and aggregate; deterministic for a fixed
    config at any worker count (results merge by trial index)."""
    _validate_config(cfg)
    width = jobs if jobs is not None else cfg.jobs
    cfg_data = cfg.to_dict()
    tasks = []
    index = 0
    for entry in cfg.families:
        for local in range(entry.get("trials", 1)):
            tasks.append((cfg_data, entry, index, local))
            index += 1
    if width > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=width) as pool:
            rows = list(pool.map(_run_trial, tasks, chunksize=32))
    else:
        rows = [_run_trial(t) for t in tasks]
    return ExperimentReport(rows=rows, summary=_summarize(cfg, rows))


def _summarize(cfg: ExperimentConfig, rows: list) -> dict:
    per: dict = {}
    skipped = errors = 0
    inter_pass = inter_total = 0
    counterexamples = 0
    for row in rows:
        if row.get("status") == "SKIPPED":
            skipped += 1
            continue
        if "error" in row:
            errors += 1
            continue
        if "interlacing_pass" in row:
            inter_total += 1
            inter_pass += bool(row["interlacing_pass"])
        for cert in row.get("certificates", ()):
            tid = cert["theorem_id"]
            agg = per.setdefault(
                tid,
                {
                    "evaluated": 0, "hypothesis_failed": 0, "condition_fails": 0,
                    "marginal": 0, "certified": 0, "cross_found": 0,
                    "cross_refuted": 0, "cross_inconclusive": 0,
                    "counterexamples": 0, "errors": 0,
                },
            )
            if "error" in cert:
                agg["errors"] += 1
                continue
            agg["evaluated"] += 1
            outcome = cert["outcome"]
            key = {
                "HYPOTHESIS_FAILED": "hypothesis_failed",
                "CONDITION_FAILS": "condition_fails",
                "MARGINAL": "marginal",
                "CERTIFIED": "certified",
            }[outcome]
            agg[key] += 1
            status = cert.get("cross_status")
            if status == "FOUND":
                agg["cross_found"] += 1
            elif status == "REFUTED":
                agg["cross_refuted"] += 1
            elif status == "INCONCLUSIVE":
                agg["cross_inconclusive"] += 1
            if outcome == "CERTIFIED" and status == "REFUTED":
                agg["counterexamples"] += 1
                counterexamples += 1
    digest_source = {k: v for k, v in cfg.to_dict().items() if k != "jobs"}
    config_digest = hashlib.sha256(
        json.dumps(digest_source, sort_keys=True).encode()
    ).hexdigest()
    return {
        "trials": len(rows),
        "skipped": skipped,
        "errors": errors,
        "interlacing": {"pass": inter_pass, "total": inter_total},
        "counterexamples": counterexamples,
        "per_theorem": per,
        "config_digest": config_digest,
    }


def default_config() -> ExperimentConfig:
    """The shipped soundness corpus: > 2000 trials, all spectral condition
    ids, cross-verification on (n <= 10 everywhere)."""
    families: list = []
    for n in range(5, 11):
        families.append({"family": "complete", "params": {"n": n}, "seed": 0, "trials": 1})
    for n in range(5, 11):
        families.append({"family": "cycle", "params": {"n": n}, "seed": 0, "trials": 1})
    for n in range(6, 10):
        families.append({"family": "path", "params": {"n": n}, "seed": 0, "trials": 1})
    gnp_cases = [
        (6, 0.5, 101), (7, 0.5, 102), (8, 0.4, 103), (8, 0.6, 104),
        (9, 0.5, 105), (10, 0.4, 106), (10, 0.6, 107),
    ]
    for n, prob, seed in gnp_cases:
        families.append(
            {"family": "gnp", "params": {"n": n, "p": prob}, "seed": seed, "trials": 270}
        )
    families.append(
        {"family": "random_regular", "params": {"n": 8, "r": 4}, "seed": 11, "trials": 60}
    )
    families.append(
        {"family": "random_regular", "params": {"n": 10, "r": 6}, "seed": 12, "trials": 60}
    )
    families.append(
        {"family": "clique_chain", "params": {"blocks": 3, "q": 2, "links": 1}, "seed": 0, "trials": 1}
    )
    families.append(
        {"family": "clique_chain", "params": {"blocks": 3, "q": 3, "links": 1}, "seed": 0, "trials": 1}
    )
    families.append(
        {"family": "clique_star", "params": {"pendants": 3, "q": 2, "links": 1}, "seed": 0, "trials": 1}
    )
    theorems = [tid for tid in THEOREM_IDS if tid != "thm1.1"]
    return ExperimentConfig(
        families=families,
        theorems=theorems,
        k_grid=[2],
        d_grid=[],
        a_grid=[1],
        b_grid=[2, -2],
        decision_tol=1e-8,
        packing_budget=20000,
        jobs=1,
    )
