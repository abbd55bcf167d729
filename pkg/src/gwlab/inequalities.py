"""Monogamy, polygamy, upper-bound and tightened-bound checkers.

Every checker evaluates one inequality on a GW-family state and returns an
:class:`InequalityReport`.  Applicability (order windows, side conditions,
domain restrictions) is a first-class result state rather than an error, so
grid sweeps produce complete report streams; genuine violations on
applicable instances surface as ``satisfied=False`` and are never swallowed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .measures import (
    F_DOMAIN_SLACK,
    OrderLike,
    RenyiOrder,
    _as_order,
    f_alpha,
    gw_one_to_rest_concurrence_sq,
    gw_pairwise_concurrence,
    renyi_entropy,
)
from .states import GWSpec, PurificationSpec, mix_with_vacuum, purify_mixture
from .tensor import Partition, PureState, State, partial_trace, schmidt_spectrum

__all__ = [
    "Applicability",
    "InequalityReport",
    "TighterParams",
    "CLOSED_FORM_TOL",
    "EIGEN_TOL",
    "h_coefficient",
    "check_scalar_power_bound",
    "check_monogamy_sq",
    "check_monogamy_power",
    "check_polygamy",
    "check_polygamy_power",
    "check_merged_block_upper_bound",
    "check_reoa_triangle",
    "check_upper_bound_bipartition",
    "check_tighter_three",
    "check_tighter_multi",
    "run_mixture_suite",
    "report_to_json_line",
    "report_to_csv_row",
    "CSV_HEADER",
]

#: Default tolerance for inequalities evaluated through scalar closed forms.
CLOSED_FORM_TOL = 1e-9
#: Looser tolerance for paths that pass through dense eigensolves.
EIGEN_TOL = 1e-7
#: Side conditions need at least this margin; borderline cases are reported
#: as unmet with diagnostics rather than guessed.
CONDITION_MARGIN = 1e-12


class Applicability(str, Enum):
    APPLICABLE = "APPLICABLE"
    OUT_OF_WINDOW = "OUT_OF_WINDOW"
    CONDITION_UNMET = "CONDITION_UNMET"
    DOMAIN_SKIPPED = "DOMAIN_SKIPPED"


@dataclass(frozen=True)
class InequalityReport:
    """Uniform checker output: lhs, rhs, signed slack and a verdict.

    ``slack`` is signed along the inequality direction, so ``slack >= -tol``
    means satisfied.  Reports outside the applicable regime carry no numbers
    and are vacuously satisfied; the ``applicability`` tag says why.
    """

    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    slack: Optional[float]
    satisfied: bool
    applicability: Applicability
    params: dict = field(default_factory=dict)


def _applicable(
    name: str, lhs: float, rhs: float, direction: str, tol: float, params: dict
) -> InequalityReport:
    slack = (lhs - rhs) if direction == "ge" else (rhs - lhs)
    return InequalityReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        satisfied=bool(slack >= -tol),
        applicability=Applicability.APPLICABLE,
        params=params,
    )


def _skipped(name: str, why: Applicability, params: dict) -> InequalityReport:
    return InequalityReport(
        name=name,
        lhs=None,
        rhs=None,
        slack=None,
        satisfied=True,
        applicability=why,
        params=params,
    )


CSV_HEADER = ("name", "alpha", "mu", "k", "lhs", "rhs", "slack", "satisfied")


def _csv_num(value) -> str:
    if value is None:
        return ""
    return f"{float(value):.12g}"


def report_to_csv_row(report: InequalityReport) -> tuple[str, ...]:
    return (
        report.name,
        _csv_num(report.params.get("alpha")),
        _csv_num(report.params.get("mu")),
        _csv_num(report.params.get("k")),
        _csv_num(report.lhs),
        _csv_num(report.rhs),
        _csv_num(report.slack),
        str(report.satisfied).lower(),
    )


def report_to_json_line(report: InequalityReport) -> str:
    doc = {
        "name": report.name,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "slack": report.slack,
        "satisfied": report.satisfied,
        "applicability": report.applicability.value,
        "params": report.params,
    }
    return json.dumps(doc, sort_keys=True)


def h_coefficient(k: float, t: float) -> float:
    """Tightening coefficient ((1+k)^t - 1) / k^t for k >= 1, t in [0, 1]."""
    k = float(k)
    t = float(t)
    if k < 1.0:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= t <= 1.0 + 1e-12:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    t = min(t, 1.0)
    return ((1.0 + k) ** t - 1.0) / k**t


def check_scalar_power_bound(
    x: float, k: float, t: float, tol: float = 1e-12
) -> InequalityReport:
    """(1+x)^t >= 1 + h(k, t) x^t for x >= k >= 1 and t in [0, 1]."""
    params = {"x": float(x), "k": float(k), "t": float(t)}
    if not (x >= k >= 1.0 and 0.0 <= t <= 1.0):
        return _skipped("scalar_power_bound", Applicability.CONDITION_UNMET, params)
    lhs = (1.0 + x) ** t
    rhs = 1.0 + h_coefficient(k, t) * x**t
    return _applicable("scalar_power_bound", lhs, rhs, "ge", tol, params)


def _restrict_to_blocks(
    state: State, blocks: Iterable[Iterable[int]]
) -> tuple[State, Partition]:
    """Reduce to the union of the blocks and reindex them on the reduction.

    Checkers accept block families that cover only part of the state; the
    quantities they test live on the reduction to the covered parties.
    """
    blocks = [frozenset(int(p) for p in b) for b in blocks]
    union = sorted(frozenset().union(*blocks))
    n = state.layout.n_parties
    if union == list(range(n)):
        return state, Partition.of(blocks)
    reduced = partial_trace(state, union)
    remap = {p: i for i, p in enumerate(union)}
    return reduced, Partition.of([{remap[p] for p in b} for b in blocks])


def _pair_c2_values(state: State, partition: Partition, s: int):
    split = gw_one_to_rest_concurrence_sq(state, partition, s)
    return split.pair_sum_sq, split.pair_sq


def _partition_params(partition: Partition, s: int) -> dict:
    return {
        "partition": [sorted(b) for b in partition.blocks],
        "s": int(s),
    }


def check_monogamy_sq(
    state: State,
    partition: Partition,
    s: int,
    order: OrderLike,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Squared Renyi entanglement of one block against the rest dominates the
    sum of its squared pairwise values."""
    order = _as_order(order)
    state, partition = _restrict_to_blocks(state, partition.blocks)
    params = {"alpha": order.alpha, "mu": 2.0, **_partition_params(partition, s)}
    if not order.supports_monogamy:
        return _skipped("monogamy_sq", Applicability.OUT_OF_WINDOW, params)
    total_sq, pair_sq = _pair_c2_values(state, partition, s)
    lhs = f_alpha(total_sq, order) ** 2
    rhs = sum(f_alpha(c2, order) ** 2 for c2 in pair_sq)
    return _applicable("monogamy_sq", lhs, rhs, "ge", tol, params)


def check_monogamy_power(
    state: State,
    partition: Partition,
    s: int,
    order: OrderLike,
    mu: float,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """mu-th power monogamy for mu >= 2."""
    mu = float(mu)
    if mu < 2.0:
        raise ValueError(f"power monogamy needs mu >= 2, got {mu}")
    order = _as_order(order)
    state, partition = _restrict_to_blocks(state, partition.blocks)
    params = {"alpha": order.alpha, "mu": mu, **_partition_params(partition, s)}
    if not order.supports_monogamy:
        return _skipped("monogamy_power", Applicability.OUT_OF_WINDOW, params)
    total_sq, pair_sq = _pair_c2_values(state, partition, s)
    lhs = f_alpha(total_sq, order) ** mu
    rhs = sum(f_alpha(c2, order) ** mu for c2 in pair_sq)
    return _applicable("monogamy_power", lhs, rhs, "ge", tol, params)


def check_polygamy(
    state: State,
    partition: Partition,
    s: int,
    order: OrderLike,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Assisted entanglement of one block is bounded by the pairwise sum."""
    order = _as_order(order)
    state, partition = _restrict_to_blocks(state, partition.blocks)
    params = {"alpha": order.alpha, "mu": 1.0, **_partition_params(partition, s)}
    if not order.supports_polygamy:
        return _skipped("polygamy", Applicability.OUT_OF_WINDOW, params)
    total_sq, pair_sq = _pair_c2_values(state, partition, s)
    lhs = f_alpha(total_sq, order)
    rhs = sum(f_alpha(c2, order) for c2 in pair_sq)
    return _applicable("polygamy", lhs, rhs, "le", tol, params)


def check_polygamy_power(
    state: State,
    partition: Partition,
    s: int,
    order: OrderLike,
    mu: float,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """mu-th power polygamy for 0 < mu <= 1."""
    mu = float(mu)
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"power polygamy needs mu in (0, 1], got {mu}")
    order = _as_order(order)
    state, partition = _restrict_to_blocks(state, partition.blocks)
    params = {"alpha": order.alpha, "mu": mu, **_partition_params(partition, s)}
    if not order.supports_polygamy:
        return _skipped("polygamy_power", Applicability.OUT_OF_WINDOW, params)
    total_sq, pair_sq = _pair_c2_values(state, partition, s)
    lhs = f_alpha(total_sq, order) ** mu
    rhs = sum(f_alpha(c2, order) ** mu for c2 in pair_sq)
    return _applicable("polygamy_power", lhs, rhs, "le", tol, params)


def _pair_c2(state: State, block_a, block_b) -> float:
    return gw_pairwise_concurrence(state, block_a, block_b).value ** 2


def check_merged_block_upper_bound(
    psi: PureState,
    block_p: Iterable[int],
    block_q: Iterable[int],
    rest_blocks: Iterable[Iterable[int]],
    order: OrderLike,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Entanglement across the merged PQ cut of a pure state is bounded by
    twice the PQ term plus all pairwise P/Q-to-rest terms."""
    order = _as_order(order)
    block_p = frozenset(block_p)
    block_q = frozenset(block_q)
    rest = [frozenset(b) for b in rest_blocks]
    params = {
        "alpha": order.alpha,
        "blocks": [sorted(block_p), sorted(block_q)] + [sorted(b) for b in rest],
    }
    if not isinstance(psi, PureState):
        raise ValueError("this bound is stated for pure states")
    if not rest:
        raise ValueError("need at least one rest block")
    Partition.of([block_p, block_q] + rest).require_complete(psi.layout)
    if not order.supports_polygamy:
        return _skipped("merged_block_upper_bound", Applicability.OUT_OF_WINDOW, params)

    arguments = [_pair_c2(psi, block_p, block_q)]
    arguments += [_pair_c2(psi, block_p, r) for r in rest]
    arguments += [_pair_c2(psi, block_q, r) for r in rest]
    if any(a > 1.0 + F_DOMAIN_SLACK for a in arguments):
        params["domain"] = [float(a) for a in arguments]
        return _skipped("merged_block_upper_bound", Applicability.DOMAIN_SKIPPED, params)

    rest_union = frozenset().union(*rest) if rest else frozenset()
    spectrum = schmidt_spectrum(psi, (block_p | block_q, rest_union))
    lams = spectrum.coefficients
    if int(np.count_nonzero(lams > 1e-10)) <= 2:
        c2_cut = max(0.0, 2.0 * (1.0 - float((lams**2).sum())))
        if c2_cut > 1.0 + F_DOMAIN_SLACK:
            params["domain"] = [float(c2_cut)]
            return _skipped(
                "merged_block_upper_bound", Applicability.DOMAIN_SKIPPED, params
            )
        lhs = f_alpha(c2_cut, order)
    else:
        lhs = renyi_entropy(spectrum, order).value

    k = len(rest)
    rhs = 2.0 * f_alpha(arguments[0], order)
    rhs += sum(f_alpha(a, order) for a in arguments[1 : 1 + k])
    rhs += sum(f_alpha(a, order) for a in arguments[1 + k :])
    return _applicable("merged_block_upper_bound", lhs, rhs, "le", tol, params)


def check_reoa_triangle(
    state: State,
    partition: Partition,
    order: OrderLike,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Triangle bound among the three one-to-rest assisted values.

    On this family the assisted and plain Renyi entanglements coincide, so a
    single numeric check covers both statements.
    """
    order = _as_order(order)
    if partition.n_blocks != 3:
        raise ValueError("triangle bound needs exactly three blocks")
    state, partition = _restrict_to_blocks(state, partition.blocks)
    params = {"alpha": order.alpha, **_partition_params(partition, 0)}
    if not order.supports_polygamy:
        return _skipped("reoa_triangle", Applicability.OUT_OF_WINDOW, params)
    values = [
        f_alpha(_pair_c2_values(state, partition, s)[0], order) for s in range(3)
    ]
    return _applicable(
        "reoa_triangle", values[0], values[1] + values[2], "le", tol, params
    )


def check_upper_bound_bipartition(
    state: State,
    block_p1: Iterable[int],
    block_p2: Iterable[int],
    q_blocks: Iterable[Iterable[int]],
    order: OrderLike,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Entanglement of the merged P1P2 block against the Q blocks is bounded
    by twice the P1P2 term plus all pairwise P-to-Q terms."""
    order = _as_order(order)
    block_p1 = frozenset(block_p1)
    block_p2 = frozenset(block_p2)
    qs = [frozenset(b) for b in q_blocks]
    if not qs:
        raise ValueError("need at least one Q block")
    state, partition = _restrict_to_blocks(state, [block_p1 | block_p2] + qs)
    merged = partition.blocks[0]
    qs_local = list(partition.blocks[1:])
    # recover the P1/P2 split inside the reduced indexing
    union = sorted(frozenset().union(block_p1, block_p2, *qs))
    remap = {p: i for i, p in enumerate(union)}
    p1_local = frozenset(remap[p] for p in block_p1)
    p2_local = frozenset(remap[p] for p in block_p2)
    assert p1_local | p2_local == merged
    params = {
        "alpha": order.alpha,
        "blocks": [sorted(p1_local), sorted(p2_local)] + [sorted(b) for b in qs_local],
    }
    if not order.supports_polygamy:
        return _skipped(
            "pair_block_upper_bound", Applicability.OUT_OF_WINDOW, params
        )
    arguments = [_pair_c2(state, p1_local, p2_local)]
    arguments += [_pair_c2(state, p1_local, q) for q in qs_local]
    arguments += [_pair_c2(state, p2_local, q) for q in qs_local]
    total_sq, _ = _pair_c2_values(state, partition, 0)
    if any(a > 1.0 + F_DOMAIN_SLACK for a in arguments + [total_sq]):
        params["domain"] = [float(a) for a in arguments]
        return _skipped(
            "pair_block_upper_bound", Applicability.DOMAIN_SKIPPED, params
        )
    lhs = f_alpha(total_sq, order)
    k = len(qs_local)
    rhs = 2.0 * f_alpha(arguments[0], order)
    rhs += sum(f_alpha(a, order) for a in arguments[1 : 1 + k])
    rhs += sum(f_alpha(a, order) for a in arguments[1 + k :])
    return _applicable("pair_block_upper_bound", lhs, rhs, "le", tol, params)


@dataclass(frozen=True)
class TighterParams:
    """Exponents of the tightened bounds.

    ``c_pow`` and ``b_pow`` are the concurrence powers (the conditioning and
    the bounded power); they are named that way to avoid any collision with
    the Renyi order.  ``h`` is the derived tightening coefficient.
    """

    c_pow: float
    b_pow: float
    k: float

    def __post_init__(self):
        c, b, k = float(self.c_pow), float(self.b_pow), float(self.k)
        if c < 2.0:
            raise ValueError(f"c_pow must be >= 2, got {c}")
        if not 0.0 <= b <= c:
            raise ValueError(f"b_pow must lie in [0, c_pow], got {b}")
        if k < 1.0:
            raise ValueError(f"k must be >= 1, got {k}")
        object.__setattr__(self, "c_pow", c)
        object.__setattr__(self, "b_pow", b)
        object.__setattr__(self, "k", k)

    @property
    def t(self) -> float:
        return self.b_pow / self.c_pow

    @property
    def h(self) -> float:
        return h_coefficient(self.k, self.t)


_TIGHTER_KINDS = ("concurrence", "cren", "renyi")


def _tighter_measure_values(
    state: State,
    partition: Partition,
    params: TighterParams,
    measure_kind: str,
    order: Optional[RenyiOrder],
):
    """Pairwise and suffix one-to-rest values for the requested measure, plus
    the concurrence values that carry the side conditions."""
    m = partition.n_blocks
    # blocks carry their 1-based numbers: pair_c2[i] is C^2(P1, P_i), i in 2..m
    pair_c2 = [None, None] + [
        _pair_c2(state, partition.blocks[0], partition.blocks[i - 1])
        for i in range(2, m + 1)
    ]

    def suffix_c2(j: int) -> float:
        # C^2(P1 | P_j ... P_m) through pairwise additivity
        return float(sum(pair_c2[i] for i in range(j, m + 1)))

    if measure_kind in ("concurrence", "cren"):
        pair_m = [None, None] + [math.sqrt(c2) for c2 in pair_c2[2:]]

        def suffix_m(j: int) -> float:
            return math.sqrt(suffix_c2(j))

    else:
        pair_m = [None, None] + [f_alpha(c2, order) for c2 in pair_c2[2:]]

        def suffix_m(j: int) -> float:
            return f_alpha(suffix_c2(j), order)

    if measure_kind in ("concurrence", "cren"):
        # side conditions ride on the measure itself, which equals the
        # concurrence on this family
        cond_pair, cond_suffix = pair_m, suffix_m
    else:
        cond_pair = [None, None] + [math.sqrt(c2) for c2 in pair_c2[2:]]

        def cond_suffix(j: int) -> float:
            return math.sqrt(suffix_c2(j))

    return pair_m, suffix_m, cond_pair, cond_suffix


def _tighter_preamble(
    state: State,
    partition: Partition,
    params: TighterParams,
    measure_kind: str,
    order: Optional[OrderLike],
    name: str,
):
    if measure_kind not in _TIGHTER_KINDS:
        raise ValueError(f"measure_kind must be one of {_TIGHTER_KINDS}")
    order_obj: Optional[RenyiOrder] = None
    if measure_kind == "renyi":
        if order is None:
            raise ValueError("renyi kind needs a Renyi order")
        order_obj = _as_order(order)
    state, partition = _restrict_to_blocks(state, partition.blocks)
    report_params = {
        "measure": measure_kind,
        "c_pow": params.c_pow,
        "b_pow": params.b_pow,
        "k": params.k,
        "h": params.h,
        **_partition_params(partition, 0),
    }
    if order_obj is not None:
        report_params["alpha"] = order_obj.alpha
    window_ok = measure_kind != "renyi" or order_obj.supports_monogamy
    return state, partition, order_obj, report_params, window_ok


def check_tighter_three(
    state: State,
    partition: Partition,
    params: TighterParams,
    measure_kind: str = "concurrence",
    order: Optional[OrderLike] = None,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Tightened three-block bound: when the P1P3 term dominates k times the
    P1P2 term (in c_pow powers), the one-to-rest value dominates
    M(P1P2)^b + h * M(P1P3)^b.

    The coefficient h attaches to the conditioned-larger P1P3 term.
    """
    if partition.n_blocks != 3:
        raise ValueError("need exactly three blocks")
    name = f"tighter_three_{measure_kind}"
    state, partition, order_obj, rparams, window_ok = _tighter_preamble(
        state, partition, params, measure_kind, order, name
    )
    if not window_ok:
        return _skipped(name, Applicability.OUT_OF_WINDOW, rparams)
    pair_m, suffix_m, cond_pair, _ = _tighter_measure_values(
        state, partition, params, measure_kind, order_obj
    )
    c = params.c_pow
    margin = cond_pair[3] ** c - params.k * cond_pair[2] ** c
    rparams["condition_margin"] = float(margin)
    if margin < CONDITION_MARGIN:
        return _skipped(name, Applicability.CONDITION_UNMET, rparams)
    b = params.b_pow
    lhs = suffix_m(2) ** b
    rhs = pair_m[2] ** b + params.h * pair_m[3] ** b
    return _applicable(name, lhs, rhs, "ge", tol, rparams)


def check_tighter_multi(
    state: State,
    partition: Partition,
    split_index: int,
    params: TighterParams,
    measure_kind: str = "concurrence",
    order: Optional[OrderLike] = None,
    tol: float = CLOSED_FORM_TOL,
) -> InequalityReport:
    """Tightened multi-block bound with geometric h weights.

    Blocks are numbered 1..m with P1 distinguished.  The first condition
    chain (pairs 2..split_index dominated k-fold by their suffix rest) feeds
    weights h^(i-2); the second chain (pairs split_index+1..m-1 dominating k
    times their suffix) feeds h^split_index, and the last pair h^(split_index-1).
    """
    m = partition.n_blocks
    if m < 3:
        raise ValueError("need at least three blocks")
    n = int(split_index)
    if not 1 <= n <= m - 1:
        raise ValueError(f"split_index must lie in [1, {m - 1}], got {n}")
    name = f"tighter_multi_{measure_kind}"
    state, partition, order_obj, rparams, window_ok = _tighter_preamble(
        state, partition, params, measure_kind, order, name
    )
    rparams["split_index"] = n
    if not window_ok:
        return _skipped(name, Applicability.OUT_OF_WINDOW, rparams)
    pair_m, suffix_m, cond_pair, cond_suffix = _tighter_measure_values(
        state, partition, params, measure_kind, order_obj
    )
    c = params.c_pow
    for i in range(2, n + 1):
        margin = cond_suffix(i + 1) ** c - params.k * cond_pair[i] ** c
        if margin < CONDITION_MARGIN:
            rparams["failed_condition"] = {"chain": 1, "index": i, "margin": margin}
            return _skipped(name, Applicability.CONDITION_UNMET, rparams)
    for j in range(n + 1, m):
        margin = cond_pair[j] ** c - params.k * cond_suffix(j + 1) ** c
        if margin < CONDITION_MARGIN:
            rparams["failed_condition"] = {"chain": 2, "index": j, "margin": margin}
            return _skipped(name, Applicability.CONDITION_UNMET, rparams)
    b = params.b_pow
    h = params.h
    lhs = suffix_m(2) ** b
    rhs = sum(h ** (i - 2) * pair_m[i] ** b for i in range(2, n + 1))
    rhs += h**n * sum(pair_m[i] ** b for i in range(n + 1, m))
    rhs += h ** (n - 1) * pair_m[m] ** b
    return _applicable(name, lhs, rhs, "ge", tol, rparams)


def run_mixture_suite(
    spec: GWSpec,
    order: OrderLike = 2.0,
    tighter: Optional[TighterParams] = None,
) -> list[InequalityReport]:
    """Run the monogamy and tightened checks on a vacuum mixture.

    The mixture is verified through its (n+1)-party purification, which is a
    pure family member, and directly on the mixed operator (itself a valid
    reduction of that purification).
    """
    order = _as_order(order)
    if tighter is None:
        tighter = TighterParams(c_pow=2.0, b_pow=1.0, k=1.0)
    anc = np.zeros(spec.d - 1, dtype=complex)
    anc[-1] = 1.0
    purified = purify_mixture(PurificationSpec(base=spec, ancilla_amplitudes=anc))
    mixture = mix_with_vacuum(spec)

    reports: list[InequalityReport] = []
    for stage, state in (("purified", purified), ("mixture", mixture)):
        n = state.layout.n_parties
        singles = Partition.singletons(n)
        rep = check_monogamy_sq(state, singles, 0, order)
        rep.params["stage"] = stage
        reports.append(rep)
        first_three = Partition.of([{0}, {1}, {2}])
        rep = check_tighter_three(state, first_three, tighter, "concurrence")
        rep.params["stage"] = stage
        reports.append(rep)
    return reports
