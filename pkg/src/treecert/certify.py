"""Evaluation of every sufficient spectral condition for the packing
property, with exact-rational thresholds and optional ground-truth
cross-verification.

Each condition is a row in a registry: which eigenvalue (or the exact
fractional packing number) is measured, the exact threshold built from
k, the degree bounds, and the matrix parameters, the inequality
direction, and which hypotheses (minimum degree, class membership,
parameter constraints) must hold first.

Decision semantics: strict float inequalities are decided inside a
decision-tolerance band (within the band is MARGINAL, never CERTIFIED);
comparisons between exact rationals are decided exactly and have no
marginal zone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .connectivity import gt_membership
from .errors import ToolError
from .graphs import Graph, boundary_size_mask, is_connected
from .packing import (
    DEFAULT_BUDGET,
    PkdSearchResult,
    nu_f_exact,
    search_pkd_witness,
)
from .spectra import spectral_profile

DEFAULT_DECISION_TOL = 1e-8
CROSS_DEFAULT_ON_MAX_N = 10
CROSS_VERIFY_CAP = 12
LEMMA_ENUM_CAP = 16

Q = Fraction


def _base(k: int, delta: int) -> Fraction:
    return k + Q(delta - 1, delta)


@dataclass(frozen=True)
class _Rule:
    k_min: int
    min_delta: Callable[[int], int]
    gt_class: int  # 0 none, 1 or 2
    takes_a: bool
    b_sign: int  # 0: no b parameter; +1 / -1: required sign
    a_min: Fraction | None
    matrix: Callable  # (a, b) -> (a_used, b_used)
    side: str  # "largest" | "smallest"
    index: int
    direction: str  # ">" | "<"
    threshold: Callable  # (k, delta, Delta, a, b) -> Fraction


def _fixed(a: int, b: int) -> Callable:
    return lambda _a, _b: (Q(a), Q(b))


_REGISTRY: dict[str, _Rule] = {
    "thm1.2": _Rule(
        2, lambda k: 2 * k + 2, 1, False, 0, None, _fixed(1, -1), "smallest", 3, ">",
        lambda k, d, D, a, b: 16 * _base(k, d) / (3 * (d + 1)),
    ),
    "thm1.3": _Rule(
        2, lambda k: 3 * k + 3, 2, False, 0, None, _fixed(1, -1), "smallest", 4, ">",
        lambda k, d, D, a, b: 9 * _base(k, d) / (d + 1),
    ),
    "thm5.1": _Rule(
        1, lambda k: 2 * k + 2, 0, False, 0, None, _fixed(0, 1), "largest", 2, "<",
        lambda k, d, D, a, b: d - 2 * _base(k, d) / (d + 1),
    ),
    "cor3.1i": _Rule(
        2, lambda k: 2 * k + 2, 1, True, 0, Q(-1), lambda a, b: (a, Q(1)),
        "largest", 3, "<",
        lambda k, d, D, a, b: (a + 1) * d - 16 * _base(k, d) / (3 * (d + 1)),
    ),
    "cor3.1ii": _Rule(
        2, lambda k: 2 * k + 2, 1, True, +1, Q(-1), lambda a, b: (a, b),
        "largest", 3, "<",
        lambda k, d, D, a, b: (a + b) * d - 16 * b * _base(k, d) / (3 * (d + 1)),
    ),
    "cor3.1iii": _Rule(
        2, lambda k: 2 * k + 2, 1, True, -1, Q(-1), lambda a, b: (a, b),
        "smallest", 3, ">",
        lambda k, d, D, a, b: (a + b) * d - 16 * b * _base(k, d) / (3 * (d + 1)),
    ),
    "cor3.2i": _Rule(
        2, lambda k: 2 * k + 2, 1, False, 0, None, _fixed(0, 1), "largest", 3, "<",
        lambda k, d, D, a, b: d - 16 * _base(k, d) / (3 * (d + 1)),
    ),
    "cor3.2ii": _Rule(
        2, lambda k: 2 * k + 2, 1, False, 0, None, _fixed(1, 1), "largest", 3, "<",
        lambda k, d, D, a, b: 2 * d - 16 * _base(k, d) / (3 * (d + 1)),
    ),
    "cor4.2i": _Rule(
        2, lambda k: 3 * k + 3, 2, True, 0, Q(-1), lambda a, b: (a, Q(1)),
        "largest", 4, "<",
        lambda k, d, D, a, b: (a + 1) * d - 9 * _base(k, d) / (d + 1),
    ),
    "cor4.2ii": _Rule(
        2, lambda k: 3 * k + 3, 2, True, +1, Q(-1), lambda a, b: (a, b),
        "largest", 4, "<",
        lambda k, d, D, a, b: (a + b) * d - 9 * b * _base(k, d) / (d + 1),
    ),
    "cor4.2iii": _Rule(
        2, lambda k: 3 * k + 3, 2, True, -1, Q(-1), lambda a, b: (a, b),
        "smallest", 4, ">",
        lambda k, d, D, a, b: (a + b) * d - 9 * b * _base(k, d) / (d + 1),
    ),
    "cor4.3i": _Rule(
        2, lambda k: 3 * k + 3, 2, False, 0, None, _fixed(0, 1), "largest", 4, "<",
        lambda k, d, D, a, b: d - 9 * _base(k, d) / (d + 1),
    ),
    "cor4.3ii": _Rule(
        2, lambda k: 3 * k + 3, 2, False, 0, None, _fixed(1, 1), "largest", 4, "<",
        lambda k, d, D, a, b: 2 * d - 9 * _base(k, d) / (d + 1),
    ),
    "cor5.2i": _Rule(
        1, lambda k: 2 * k + 2, 0, True, 0, Q(0), lambda a, b: (a, Q(1)),
        "largest", 2, "<",
        lambda k, d, D, a, b: (a + 1) * d - 2 * _base(k, d) / (d + 1),
    ),
    "cor5.2ii": _Rule(
        1, lambda k: 2 * k + 2, 0, True, +1, Q(0), lambda a, b: (a, b),
        "largest", 2, "<",
        lambda k, d, D, a, b: (a + b) * d - 2 * b * _base(k, d) / (d + 1),
    ),
    "cor5.2iii": _Rule(
        1, lambda k: 2 * k + 2, 0, True, -1, Q(0), lambda a, b: (a, b),
        "smallest", 2, ">",
        lambda k, d, D, a, b: a * D + b * d - 2 * b * _base(k, d) / (d + 1),
    ),
    "cor5.3i": _Rule(
        1, lambda k: 2 * k + 2, 0, False, 0, None, _fixed(1, 1), "largest", 2, "<",
        lambda k, d, D, a, b: 2 * d - 2 * _base(k, d) / (d + 1),
    ),
    "cor5.3ii": _Rule(
        1, lambda k: 2 * k + 2, 0, False, 0, None, _fixed(1, -1), "smallest", 2, ">",
        lambda k, d, D, a, b: D - d + 2 * _base(k, d) / (d + 1),
    ),
}

THEOREM_IDS = ("thm1.1",) + tuple(_REGISTRY)


@dataclass(frozen=True)
class CertificateRequest:
    theorem_id: str
    k: int
    d: int | None = None  # free parameter for thm1.1 only; elsewhere d = delta
    a: object = None  # int | float | str | Fraction
    b: object = None
    decision_tol: float = DEFAULT_DECISION_TOL
    cross_verify: bool | None = None  # None: on for n <= 10


@dataclass(frozen=True)
class CrossCheck:
    status: str  # FOUND | REFUTED | INCONCLUSIVE
    consistent: bool


@dataclass(frozen=True)
class CertificateReport:
    theorem_id: str
    k: int
    d: int
    a: Fraction | None
    b: Fraction | None
    hypothesis_checks: dict = field(default_factory=dict)
    measured: float | None = None
    threshold: Fraction | None = None
    outcome: str = "HYPOTHESIS_FAILED"
    conclusion: str | None = None
    cross_check: CrossCheck | None = None

    def to_json_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "k": self.k,
            "d": self.d,
            "a": None if self.a is None else float(self.a),
            "b": None if self.b is None else float(self.b),
            "hypothesis_checks": dict(self.hypothesis_checks),
            "measured": self.measured,
            "threshold_num": None if self.threshold is None else self.threshold.numerator,
            "threshold_den": None if self.threshold is None else self.threshold.denominator,
            "threshold_decimal": None if self.threshold is None else float(self.threshold),
            "outcome": self.outcome,
            "conclusion": self.conclusion,
            "cross_check": None
            if self.cross_check is None
            else {"status": self.cross_check.status, "consistent": self.cross_check.consistent},
        }


@lru_cache(maxsize=512)
def _is_member(g: Graph, t: int) -> bool:
    return gt_membership(g, t) is not None


def _to_fraction(value, name: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ToolError("PARAMETER_ERROR", f"{name} is not a rational number: {value!r}")


def _validate_params(rule: _Rule, req: CertificateRequest) -> tuple[Fraction | None, Fraction | None]:
    if req.k < rule.k_min:
        raise ToolError(
            "PARAMETER_ERROR", f"{req.theorem_id} needs k >= {rule.k_min}, got {req.k}"
        )
    if req.d is not None:
        raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} fixes d to the minimum degree")
    if req.decision_tol <= 0:
        raise ToolError("PARAMETER_ERROR", "decision_tol must be > 0")
    a = b = None
    if rule.takes_a:
        if req.a is None:
            raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} requires parameter a")
        a = _to_fraction(req.a, "a")
        if a < rule.a_min:
            raise ToolError("PARAMETER_ERROR", f"need a >= {rule.a_min}, got a = {a}")
    elif req.a is not None:
        raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} does not take parameter a")
    if rule.b_sign != 0:
        if req.b is None:
            raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} requires parameter b")
        b = _to_fraction(req.b, "b")
        if b == 0:
            raise ToolError("PARAMETER_ERROR", "b must be nonzero")
        if rule.b_sign > 0 and b < 0:
            raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} needs b > 0, got {b}")
        if rule.b_sign < 0 and b > 0:
            raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} needs b < 0, got {b}")
        if rule.a_min == Q(-1) and a / b < -1:
            raise ToolError("PARAMETER_ERROR", f"need a/b >= -1, got {a}/{b}")
    elif req.b is not None:
        raise ToolError("PARAMETER_ERROR", f"{req.theorem_id} does not take parameter b")
    return a, b


def _cross_check(
    g: Graph,
    req: CertificateRequest,
    outcome: str,
    d_used: int,
    budget: int,
    precomputed: PkdSearchResult | None,
) -> CrossCheck | None:
    enabled = req.cross_verify if req.cross_verify is not None else g.n <= CROSS_DEFAULT_ON_MAX_N
    if not enabled or g.n > CROSS_VERIFY_CAP:
        return None
    res = precomputed
    if res is None:
        res = search_pkd_witness(g, req.k, d_used, budget=budget)
    consistent = not (outcome == "CERTIFIED" and res.status == "REFUTED")
    return CrossCheck(status=res.status, consistent=consistent)


def certify(
    g: Graph,
    req: CertificateRequest,
    budget: int = DEFAULT_BUDGET,
    cross_result: PkdSearchResult | None = None,
) -> CertificateReport:
    """Evaluate one sufficient condition on a connected graph.

    Returns a report with the hypothesis checks, the measured quantity,
    the exact threshold and one of HYPOTHESIS_FAILED / CONDITION_FAILS /
    MARGINAL / CERTIFIED. `cross_result` lets batch runners share one
    ground-truth search across many conditions with the same (k, d).
    """
    if not is_connected(g):
        raise ToolError("DISCONNECTED", "certification needs a connected graph")
    if req.theorem_id == "thm1.1":
        return _certify_thm11(g, req, budget, cross_result)
    rule = _REGISTRY.get(req.theorem_id)
    if rule is None:
        raise ToolError("PARAMETER_ERROR", f"unknown theorem id {req.theorem_id!r}")
    a, b = _validate_params(rule, req)
    delta, Delta = g.min_degree, g.max_degree
    checks: dict = {"parameter_constraints": True}
    checks["min_degree"] = delta >= rule.min_delta(req.k)
    if rule.gt_class == 0:
        checks["class_membership"] = True
    elif checks["min_degree"]:
        checks["class_membership"] = g.n >= rule.gt_class + 2 and _is_member(g, rule.gt_class)
    else:
        checks["class_membership"] = None  # not evaluated

    if any(v is False for v in checks.values()):
        cross = _cross_check(g, req, "HYPOTHESIS_FAILED", delta, budget, cross_result)
        return CertificateReport(
            theorem_id=req.theorem_id, k=req.k, d=delta, a=a, b=b,
            hypothesis_checks=checks, outcome="HYPOTHESIS_FAILED",
            cross_check=cross,
        )

    a_used, b_used = rule.matrix(a, b)
    profile = spectral_profile(g, a_used, b_used)
    if rule.side == "largest":
        measured = profile.kth_largest(rule.index)
    else:
        measured = profile.kth_smallest(rule.index)
    threshold = rule.threshold(req.k, delta, Delta, a, b)
    thr = float(threshold)
    tol = req.decision_tol
    if rule.direction == ">":
        if measured > thr + tol:
            outcome = "CERTIFIED"
        elif measured < thr - tol:
            outcome = "CONDITION_FAILS"
        else:
            outcome = "MARGINAL"
    else:
        if measured < thr - tol:
            outcome = "CERTIFIED"
        elif measured > thr + tol:
            outcome = "CONDITION_FAILS"
        else:
            outcome = "MARGINAL"
    conclusion = f"P({req.k},{delta}) holds" if outcome == "CERTIFIED" else None
    cross = _cross_check(g, req, outcome, delta, budget, cross_result)
    return CertificateReport(
        theorem_id=req.theorem_id, k=req.k, d=delta, a=a, b=b,
        hypothesis_checks=checks, measured=measured, threshold=threshold,
        outcome=outcome, conclusion=conclusion, cross_check=cross,
    )


def _certify_thm11(
    g: Graph, req: CertificateRequest, budget: int, cross_result
) -> CertificateReport:
    if req.k < 1:
        raise ToolError("PARAMETER_ERROR", "thm1.1 needs k >= 1")
    if req.d is None or req.d < 1:
        raise ToolError("PARAMETER_ERROR", "thm1.1 needs d >= 1")
    if req.a is not None or req.b is not None:
        raise ToolError("PARAMETER_ERROR", "thm1.1 does not take matrix parameters")
    checks = {"parameter_constraints": True, "min_degree": True, "class_membership": True}
    value = nu_f_exact(g).value
    threshold = req.k + Q(req.d - 1, req.d)
    # both sides exact rationals: decided exactly, no marginal band
    outcome = "CERTIFIED" if value > threshold else "CONDITION_FAILS"
    conclusion = f"P({req.k},{req.d}) holds" if outcome == "CERTIFIED" else None
    cross = _cross_check(g, req, outcome, req.d, budget, cross_result)
    return CertificateReport(
        theorem_id="thm1.1", k=req.k, d=req.d, a=None, b=None,
        hypothesis_checks=checks, measured=float(value), threshold=threshold,
        outcome=outcome, conclusion=conclusion, cross_check=cross,
    )


# ---------------------------------------------------------------------------
# empirical lemma checkers


@dataclass(frozen=True)
class SmallCutCheck:
    status: str  # NO_VIOLATION | VACUOUS | VIOLATIONS
    violations: tuple
    small_cut_sides: int  # how many subsets had boundary <= delta - 1


def check_lemma_small_cut(g: Graph, cap: int = LEMMA_ENUM_CAP) -> SmallCutCheck:
    """Exhaustively confirm that every vertex set with boundary at most
    min_degree - 1 has at least min_degree + 1 vertices."""
    if not is_connected(g):
        raise ToolError("DISCONNECTED", "the check needs a connected graph")
    if g.n > cap:
        raise ToolError("TOO_LARGE", f"subset enumeration capped at n={cap}")
    delta = g.min_degree
    full = (1 << g.n) - 1
    violations = []
    hits = 0
    for mask in range(1, full):
        cut = boundary_size_mask(g, mask)
        if cut <= delta - 1:
            hits += 1
            size = mask.bit_count()
            if size < delta + 1:
                violations.append((tuple(_bits(mask)), cut, size))
    if violations:
        return SmallCutCheck("VIOLATIONS", tuple(violations), hits)
    return SmallCutCheck("NO_VIOLATION" if hits else "VACUOUS", (), hits)


def _bits(mask: int):
    while mask:
        v = (mask & -mask).bit_length() - 1
        yield v
        mask &= mask - 1


@dataclass(frozen=True)
class CutLowerBoundCheck:
    status: str  # NOT_APPLICABLE | VACUOUS | NO_VIOLATION | VIOLATIONS
    marginal: bool
    measured: float | None
    threshold: Fraction | None
    violations: tuple


def check_cut_lower_bound(
    g: Graph,
    k: int,
    variant: str,
    decision_tol: float = DEFAULT_DECISION_TOL,
    cap: int = LEMMA_ENUM_CAP,
) -> CutLowerBoundCheck:
    """Empirical check that, under the eigenvalue hypothesis, every
    connected component cut off by any edge set keeps boundary >= k+1.

    Component sides of edge cuts are exactly the connected induced
    subsets, so those are what gets enumerated. Degree or class failures
    give NOT_APPLICABLE; a failed (or marginal, flagged) eigenvalue
    hypothesis gives VACUOUS.
    """
    if variant not in ("lemma2.4", "lemma2.5"):
        raise ToolError("PARAMETER_ERROR", f"unknown variant {variant!r}")
    if k < 1:
        raise ToolError("PARAMETER_ERROR", f"k must be >= 1, got {k}")
    if not is_connected(g):
        raise ToolError("DISCONNECTED", "the check needs a connected graph")
    delta = g.min_degree
    if variant == "lemma2.4":
        degree_ok = delta >= 2 * k + 1 and 2 * k + 1 >= 5
        t_class, small_idx = 1, 3
        threshold = Q(4 * k, delta + 1)
    else:
        degree_ok = delta >= 3 * k + 1 and 3 * k + 1 >= 7
        t_class, small_idx = 2, 4
        threshold = Q(6 * k, delta + 1)
    if not degree_ok or g.n < t_class + 2 or not _is_member(g, t_class):
        return CutLowerBoundCheck("NOT_APPLICABLE", False, None, None, ())
    measured = spectral_profile(g, 1, -1).kth_smallest(small_idx)
    thr = float(threshold)
    if measured <= thr + decision_tol:
        marginal = measured >= thr - decision_tol
        return CutLowerBoundCheck("VACUOUS", marginal, measured, threshold, ())
    # the cap only guards the exhaustive phase; the short-circuit outcomes
    # above stay available on larger graphs
    if g.n > cap:
        raise ToolError("TOO_LARGE", f"subset enumeration capped at n={cap}")
    violations = []
    full = (1 << g.n) - 1
    for mask in range(1, full):
        if not _induces_connected(g, mask):
            continue
        cut = boundary_size_mask(g, mask)
        if cut < k + 1:
            violations.append((tuple(_bits(mask)), cut))
    status = "VIOLATIONS" if violations else "NO_VIOLATION"
    return CutLowerBoundCheck(status, False, measured, threshold, tuple(violations))


def _induces_connected(g: Graph, mask: int) -> bool:
    start = (mask & -mask).bit_length() - 1
    seen = 1 << start
    stack = [start]
    while stack:
        u = stack.pop()
        fresh = g.adj_bits[u] & mask & ~seen
        while fresh:
            v = (fresh & -fresh).bit_length() - 1
            seen |= 1 << v
            stack.append(v)
            fresh &= fresh - 1
    return seen == mask
