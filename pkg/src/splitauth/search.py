"""Exhaustive backtracking search for splitting designs with coverage 1.

At lambda = 1 each block properly covers exactly c**t * C(u, t) of the
C(v, t) point subsets and no subset may be covered twice, so the problem is an
exact cover: picking b = C(v, t) / (c**t * C(u, t)) pairwise-compatible blocks
automatically covers everything.  The solver branches on the least-ranked
uncovered t-subset and tries every candidate block that covers it, which
visits each block family exactly once (the block covering the anchor subset
is unique in any solution).

Coverage lives in one arbitrary-precision integer used as a bitset over the
lexicographic ranks of the t-subsets, so compatibility testing is a single
AND.  Candidate blocks are enumerated once up front in canonical form
(sub-blocks ascending by least point) and indexed by the subsets they cover.

Symmetry breaking fixes the first block to the lexicographically least one,
[[0..c-1], [c..2c-1], ...]: any design can be relabelled to contain it, so the
reduction is sound for existence and for proofs of nonexistence alike.

Randomized value ordering shuffles each anchor's candidate list with a seed;
geometric restarts rerun with doubling node budgets and stepped seeds.  A
restart attempt that finishes its tree within budget still proves exhaustion;
otherwise only a budget-free sweep can.
"""
from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Literal

from .designs import (
    DesignParams,
    SplittingDesign,
    canonicalize,
    check_divisibility,
    verify_splitting_design,
)
from .errors import InputError, UnsupportedParametersError

# Candidate enumeration is quadratic-ish in this count and each candidate
# stores a C(v, t)-bit coverage mask; past this the instance is not desk scale.
MAX_CANDIDATE_BLOCKS = 500_000

SearchStatus = Literal["found", "exhausted", "timeout", "pruned-infeasible"]


@dataclass(frozen=True)
class SearchConfig:
    """Search limits and ordering policy.

    `time_limit` is wall seconds, `node_limit` caps visited search nodes;
    both count across restart attempts.  `seed` of None keeps canonical
    candidate order.  `restarts` is "off" or "geometric" (node budgets
    restart_base * 2**k with the seed stepped per attempt).
    """

    time_limit: float | None = None
    node_limit: int | None = None
    seed: int | None = None
    restarts: Literal["off", "geometric"] = "off"
    symmetry_breaking: bool = True
    restart_base: int = 4096

    def __post_init__(self):
        if self.time_limit is not None and self.time_limit <= 0:
            raise InputError(f"time_limit must be positive, got {self.time_limit!r}")
        if self.node_limit is not None and self.node_limit < 1:
            raise InputError(f"node_limit must be positive, got {self.node_limit!r}")
        if self.restarts not in ("off", "geometric"):
            raise InputError(f"restarts must be 'off' or 'geometric', got {self.restarts!r}")
        if self.restart_base < 1:
            raise InputError("restart_base must be positive")


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    backtracks: int
    attempts: int
    wall_time: float


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    design: SplittingDesign | None
    stats: SearchStats

    def __post_init__(self):
        if (self.status == "found") != (self.design is not None):
            raise InputError("a design is attached exactly when status is 'found'")


def subset_rank(points: tuple[int, ...], v: int, t: int) -> int:
    """Lexicographic rank of a sorted t-subset among combinations(range(v), t)."""
    rank = 0
    prev = -1
    for i, a in enumerate(points):
        for x in range(prev + 1, a):
            rank += comb(v - x - 1, t - i - 1)
        prev = a
    return rank


def subset_unrank(rank: int, v: int, t: int) -> tuple[int, ...]:
    """Inverse of subset_rank."""
    points = []
    x = 0
    for i in range(t):
        while True:
            below = comb(v - x - 1, t - i - 1)
            if rank < below:
                break
            rank -= below
            x += 1
        points.append(x)
        x += 1
    return tuple(points)


def enumerate_candidate_blocks(v: int, c: int, u: int) -> list[tuple[tuple[int, ...], ...]]:
    """All canonical blocks: u disjoint c-subsets with increasing least points.

    Ordering the sub-blocks by their least point picks one representative per
    unordered family, and the depth-first generation yields them in
    lexicographic order.
    """
    out: list[tuple[tuple[int, ...], ...]] = []

    def extend(chosen: list[tuple[int, ...]], used: set[int], floor: int) -> None:
        if len(chosen) == u:
            out.append(tuple(chosen))
            return
        free = [p for p in range(floor + 1, v) if p not in used]
        for sub in combinations(free, c):
            chosen.append(sub)
            used.update(sub)
            extend(chosen, used, sub[0])
            used.difference_update(sub)
            chosen.pop()

    extend([], set(), -1)
    return out


def _block_coverage(block: tuple[tuple[int, ...], ...], v: int, t: int) -> int:
    """Bitset of ranks of all t-subsets the block properly covers."""
    bits = 0
    u = len(block)
    for picks in combinations(range(u), t):
        for points in product(*(block[j] for j in picks)):
            bits |= 1 << subset_rank(tuple(sorted(points)), v, t)
    return bits


class _LimitHit(Exception):
    pass


class _Searcher:
    """One backtracking sweep over the canonical representative space."""

    def __init__(self, v, t, target, candidates, coverage, cover_index, deadline):
        self.v = v
        self.t = t
        self.target = target
        self.candidates = candidates
        self.coverage = coverage
        self.cover_index = cover_index
        self.deadline = deadline
        self.full_mask = (1 << comb(v, t)) - 1
        self.nodes = 0
        self.backtracks = 0
        self.node_budget: int | None = None
        self.order_seed: int | None = None
        self._order_cache: dict[int, list[int]] = {}

    def _candidate_order(self, anchor: int) -> list[int]:
        if self.order_seed is None:
            return self.cover_index[anchor]
        order = self._order_cache.get(anchor)
        if order is None:
            order = list(self.cover_index[anchor])
            random.Random((self.order_seed << 20) ^ anchor).shuffle(order)
            self._order_cache[anchor] = order
        return order

    def sweep(self, chosen: list[int], covered: int) -> list[int] | None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _LimitHit
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _LimitHit
        if len(chosen) == self.target:
            return chosen  # counting: target compatible blocks cover everything
        uncovered = ~covered & self.full_mask
        anchor = (uncovered & -uncovered).bit_length() - 1
        for ci in self._candidate_order(anchor):
            bits = self.coverage[ci]
            if bits & covered:
                continue
            chosen.append(ci)
            result = self.sweep(chosen, covered | bits)
            if result is not None:
                return result
            chosen.pop()
        self.backtracks += 1
        return None


def search(params: DesignParams, config: SearchConfig | None = None) -> SearchOutcome:
    """Find a splitting design with the given parameters, or prove there is none.

    Only coverage 1 is supported.  Returns status "pruned-infeasible" without
    searching when the forced block count is fractional, a declared b
    disagrees with it, or a divisibility condition fails.  "exhausted" means
    the whole canonical representative space was swept, which certifies
    nonexistence.  A found design is returned in canonical form and has been
    re-verified.
    """
    if config is None:
        config = SearchConfig()
    if params.lambda_ != 1:
        raise UnsupportedParametersError(
            f"search supports coverage 1 only, got lambda={params.lambda_}"
        )

    t, v, c, u = params.t, params.v, params.c, params.u
    started = time.monotonic()

    def outcome(status, design, nodes=0, backtracks=0, attempts=0):
        return SearchOutcome(
            status=status,
            design=design,
            stats=SearchStats(
                nodes=nodes,
                backtracks=backtracks,
                attempts=attempts,
                wall_time=time.monotonic() - started,
            ),
        )

    required = Fraction(comb(v, t), c**t * comb(u, t))
    if required.denominator != 1:
        return outcome("pruned-infeasible", None)
    target = int(required)
    if params.b is not None and params.b != target:
        return outcome("pruned-infeasible", None)
    if check_divisibility(params):
        return outcome("pruned-infeasible", None)

    space = 1
    remaining = v
    for _ in range(u):
        space = space * comb(remaining, c)
        remaining -= c
    for k in range(2, u + 1):
        space //= k
    if space > MAX_CANDIDATE_BLOCKS:
        raise InputError(
            f"{space} candidate blocks exceed the desk-scale cap of {MAX_CANDIDATE_BLOCKS}"
        )

    candidates = enumerate_candidate_blocks(v, c, u)
    coverage = [_block_coverage(block, v, t) for block in candidates]
    num_subsets = comb(v, t)
    cover_index: list[list[int]] = [[] for _ in range(num_subsets)]
    for ci, bits in enumerate(coverage):
        mask = bits
        while mask:
            low = mask & -mask
            cover_index[low.bit_length() - 1].append(ci)
            mask &= mask - 1

    deadline = None if config.time_limit is None else started + config.time_limit
    sys.setrecursionlimit(max(sys.getrecursionlimit(), target + 200))
    searcher = _Searcher(v, t, target, candidates, coverage, cover_index, deadline)

    start_chosen: list[int] = []
    start_covered = 0
    if config.symmetry_breaking:
        forced = tuple(
            tuple(range(j * c, (j + 1) * c)) for j in range(u)
        )  # the lexicographically least block; WLOG by relabelling
        forced_index = candidates.index(forced)
        start_chosen = [forced_index]
        start_covered = coverage[forced_index]

    def run_attempt(budget: int | None, seed: int | None):
        searcher.node_budget = None if budget is None else searcher.nodes + budget
        searcher.order_seed = seed
        searcher._order_cache = {}
        return searcher.sweep(list(start_chosen), start_covered)

    attempts = 0
    try:
        if config.restarts == "off":
            budget = config.node_limit
            attempts = 1
            solution = run_attempt(budget, config.seed)
        else:
            solution = None
            k = 0
            while True:
                budget = config.restart_base * (2**k)
                if config.node_limit is not None:
                    budget = min(budget, config.node_limit - searcher.nodes)
                    if budget <= 0:
                        raise _LimitHit
                seed = config.seed + k if config.seed is not None else (k or None)
                attempts += 1
                try:
                    solution = run_attempt(budget, seed)
                    break  # swept the whole tree within budget
                except _LimitHit:
                    if config.node_limit is not None and searcher.nodes >= config.node_limit:
                        raise
                    if deadline is not None and time.monotonic() > deadline:
                        raise
                    k += 1
    except _LimitHit:
        return outcome("timeout", None, searcher.nodes, searcher.backtracks, attempts)

    if solution is None:
        return outcome("exhausted", None, searcher.nodes, searcher.backtracks, attempts)

    design = canonicalize(
        SplittingDesign(v=v, blocks=tuple(candidates[ci] for ci in solution))
    )
    report = verify_splitting_design(design, t, 1)
    if not report.passed:  # counting argument guarantees this never fires
        raise AssertionError("search produced a non-design; this is a bug")
    return outcome("found", design, searcher.nodes, searcher.backtracks, attempts)
