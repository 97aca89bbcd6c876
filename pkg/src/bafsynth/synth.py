"""Synthesis procedures.

Three ways to produce a decision list from a split specification:

  - back_and_forth: alternate a SAT query that yields a maximal falsifiable
    subset (MFS) of the input clauses not yet covered by any recorded
    maximal satisfiable subset (MSS) of the output clauses, with a MaxSAT
    query that grows that MFS's output clauses into a covering MSS.  Stops
    when every MFS is covered, or reports unrealizability when some MFS's
    output clauses cannot all be satisfied.
  - synth_by_mfs_enumeration: enumerate every MFS via the conflict graph
    and pick one satisfying output per MFS.
  - synth_by_mss_enumeration: enumerate every MSS by repeated blocking
    MaxSAT calls; never fails, but may leave inputs uncovered when the
    specification is unrealizable.

plus the output-disjoint partitioner that splits a specification into
independently synthesizable components.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dlist import DecisionList, build_decision_list
from .errors import LimitError
from .graph import ConflictGraph, build_conflict_graph, enumerate_mis, extend_to_mis
from .maxsat import MaxSatInstance, solve_partial_maxsat
from .model import Assignment, Specification
from .sat import Solver

REALIZABLE = "realizable"
UNREALIZABLE = "unrealizable"


@dataclass
class Stats:
    iterations: int = 0
    sat_calls: int = 0
    maxsat_calls: int = 0
    mss_recorded: int = 0
    wall_time: float = 0.0
    partitions: int = 1


@dataclass
class SynthesisOutcome:
    status: str
    decision_list: DecisionList | None = None
    witness_mfs: frozenset[int] | None = None
    witness_input: Assignment | None = None
    stats: Stats = field(default_factory=Stats)

    @property
    def realizable(self) -> bool:
        return self.status == REALIZABLE


class CoverageQueryState:
    """Incremental SAT query over selector variables z_1..z_k (one per
    clause): a model selects an all-falsifiable subset of the input clauses
    not covered by any recorded MSS.  Conflict constraints are installed
    once; each recorded MSS adds a single clause and nothing is rebuilt."""

    def __init__(self, graph: ConflictGraph):
        self.k = graph.n
        self.solver = Solver()
        self.solver.ensure_var(self.k)
        for i, j in graph.edges():
            self.solver.add_clause((-i, -j))


def next_uncovered_mfs(state: CoverageQueryState, g: ConflictGraph):
    """An MFS not covered by any recorded MSS, or None when all are covered.

    The selected subset from the model may be non-maximal; it is extended
    greedily in ascending index order.  Covering is index-set inclusion, so
    any superset of an uncovered set is still uncovered."""
    res = state.solver.solve()
    if not res.satisfiable:
        return None
    seed = frozenset(i for i in range(1, state.k + 1) if res.model[i])
    return extend_to_mis(g, seed)


def record_mss(state: CoverageQueryState, mss: frozenset[int]) -> None:
    """Block every subset of `mss` from future models via one clause."""
    complement = sorted(set(range(1, state.k + 1)) - mss)
    if not complement:
        raise ValueError("MSS covers every clause; synthesis is already complete")
    state.solver.add_clause(complement)


def covering_mss(spec: Specification, mfs: frozenset[int], exact: bool = True):
    """Grow the output clauses of `mfs` into a covering MSS.

    Returns (mss index set, output witness) or None when the output clauses
    of `mfs` are jointly unsatisfiable (the unrealizability witness is the
    given MFS itself)."""
    hard = [spec.y_part(i).lits for i in sorted(mfs)]
    soft = [spec.y_part(j).lits for j in spec.indices if j not in mfs]
    res = solve_partial_maxsat(MaxSatInstance.of(hard, soft), exact=exact)
    if not res.optimal:
        return None
    witness = {v: res.model.get(v, False) for v in spec.outputs}
    mss = frozenset(i for i in spec.indices if spec.y_part(i).evaluate(witness))
    assert mfs <= mss
    return mss, witness


def falsifying_input(spec: Specification, indices: frozenset[int]) -> Assignment:
    """An input assignment falsifying every x-part in an all-falsifiable
    index set; unconstrained inputs default to false."""
    x = {v: False for v in spec.inputs}
    for i in sorted(indices):
        for lit in spec.x_part(i).lits:
            x[abs(lit)] = lit < 0
    return x


def _empty_ypart_failure(spec: Specification, g: ConflictGraph):
    """Unrealizability witness for a clause with no output literals, if any.

    Such a clause can always be falsified on the input side (tautological
    clauses are removed at parse time), and its empty y-part can never be
    satisfied, so no output works for the falsifying input."""
    if not spec.empty_ypart_indices:
        return None
    i = spec.empty_ypart_indices[0]
    witness = extend_to_mis(g, frozenset((i,)))
    return witness, falsifying_input(spec, witness)


def back_and_forth(spec: Specification, exact_mss: bool = True) -> SynthesisOutcome:
    """Alternate uncovered-MFS generation with covering-MSS growth until
    every MFS is covered, then build the decision list from the recorded
    MSS sequence.  Iteration count is bounded by min(#MFS, #MSS)."""
    t0 = time.perf_counter()
    stats = Stats()
    g = build_conflict_graph(spec)
    bad = _empty_ypart_failure(spec, g)
    if bad is not None:
        stats.wall_time = time.perf_counter() - t0
        return SynthesisOutcome(
            UNREALIZABLE, witness_mfs=bad[0], witness_input=bad[1], stats=stats
        )
    state = CoverageQueryState(g)
    mss_list: list[frozenset[int]] = []
    witnesses: list[Assignment] = []
    while True:
        mfs = next_uncovered_mfs(state, g)
        stats.sat_calls += 1
        if mfs is None:
            break
        got = covering_mss(spec, mfs, exact=exact_mss)
        stats.maxsat_calls += 1
        if got is None:
            stats.iterations += 1
            stats.wall_time = time.perf_counter() - t0
            return SynthesisOutcome(
                UNREALIZABLE,
                witness_mfs=mfs,
                witness_input=falsifying_input(spec, mfs),
                stats=stats,
            )
        mss, witness = got
        mss_list.append(mss)
        witnesses.append(witness)
        stats.iterations += 1
        if len(mss) == spec.num_clauses:
            break  # full cover: every MFS is a subset, nothing left to find
        record_mss(state, mss)
    stats.mss_recorded = len(mss_list)
    dl = build_decision_list(spec, mss_list, witnesses)
    stats.wall_time = time.perf_counter() - t0
    return SynthesisOutcome(REALIZABLE, decision_list=dl, stats=stats)


def synth_by_mfs_enumeration(spec: Specification, mis_limit: int = 100000) -> SynthesisOutcome:
    """One decision per MFS, enumerated via the conflict graph; fails with
    the offending MFS as witness when its output clauses are unsatisfiable."""
    t0 = time.perf_counter()
    stats = Stats()
    g = build_conflict_graph(spec)
    enum = enumerate_mis(g, mis_limit)
    if enum.overflow:
        raise LimitError(f"more than {mis_limit} maximal falsifiable subsets")
    witnesses = []
    for m in enum.sets:
        s = Solver()
        s.ensure_var(max(spec.outputs, default=0))
        for i in sorted(m):
            s.add_clause(spec.y_part(i).lits)
        res = s.solve()
        stats.sat_calls += 1
        stats.iterations += 1
        if not res.satisfiable:
            stats.wall_time = time.perf_counter() - t0
            return SynthesisOutcome(
                UNREALIZABLE,
                witness_mfs=m,
                witness_input=falsifying_input(spec, m),
                stats=stats,
            )
        witnesses.append({v: res.model.get(v, False) for v in spec.outputs})
    stats.mss_recorded = len(enum.sets)
    dl = build_decision_list(spec, list(enum.sets), witnesses)
    stats.wall_time = time.perf_counter() - t0
    return SynthesisOutcome(REALIZABLE, decision_list=dl, stats=stats)


def synth_by_mss_enumeration(
    spec: Specification, mss_limit: int = 100000, stats: Stats | None = None
) -> DecisionList:
    """One decision per MSS of the output clauses, found by repeated MaxSAT
    with a blocking clause per discovered MSS over selector variables.

    Works for unrealizable specifications too: the resulting list simply
    leaves the infeasible inputs uncovered."""
    t0 = time.perf_counter()
    k = spec.num_clauses
    base = max((*spec.inputs, *spec.outputs), default=0)
    selectors = [base + j for j in range(1, k + 1)]
    expansion = []
    for j in spec.indices:
        expansion.append((-selectors[j - 1], *spec.y_part(j).lits))
    soft = [(sel,) for sel in selectors]
    blocking: list[tuple[int, ...]] = []
    found: list[frozenset[int]] = []
    witnesses: list[Assignment] = []
    while True:
        inst = MaxSatInstance.of(expansion + blocking, soft)
        res = solve_partial_maxsat(inst)
        if stats is not None:
            stats.maxsat_calls += 1
        if not res.optimal:
            break  # every MSS found
        witness = {v: res.model.get(v, False) for v in spec.outputs}
        mss = frozenset(j for j in spec.indices if spec.y_part(j).evaluate(witness))
        assert mss not in found
        found.append(mss)
        witnesses.append(witness)
        if len(found) > mss_limit:
            raise LimitError(f"more than {mss_limit} maximal satisfiable subsets")
        blocking.append(tuple(selectors[j - 1] for j in spec.indices if j not in mss))
        if not blocking[-1]:
            break  # single full MSS; nothing else can be maximal
    if stats is not None:
        stats.iterations += len(found)
        stats.mss_recorded += len(found)
        stats.wall_time += time.perf_counter() - t0
    return build_decision_list(spec, found, witnesses)


def partition_by_output_variables(spec: Specification) -> list[Specification]:
    """Split into components of clauses connected through shared output
    variables; inputs are kept whole, outputs are restricted per component.
    Components are ordered by their smallest original clause index."""
    if spec.empty_ypart_indices:
        raise ValueError(
            "specification has a clause with an empty y-part; "
            "it is unrealizable and cannot be partitioned"
        )
    parent = list(range(spec.num_clauses + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    first_with_var: dict[int, int] = {}
    for i in spec.indices:
        for v in spec.y_part(i).variables():
            if v in first_with_var:
                union(i, first_with_var[v])
            else:
                first_with_var[v] = i

    groups: dict[int, list[int]] = {}
    for i in spec.indices:
        groups.setdefault(find(i), []).append(i)

    components = []
    for root in sorted(groups):
        members = groups[root]
        outs = sorted({v for i in members for v in spec.y_part(i).variables()})
        clauses = tuple(spec.clause(i) for i in members)
        components.append(Specification(spec.inputs, tuple(outs), clauses))
    return components
