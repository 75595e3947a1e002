"""Spoofing-game analysis of splitting authentication codes, all in exact rationals.

Model (the all-uniform game).  The transmitter draws an encoding rule e
uniformly from the code's rule family, the i source states observed by the
opponent form a uniform i-subset of sources, and each observed source is sent
as a uniform choice from its cell.  After seeing the resulting message set M'
the opponent inserts one extra message m' not in M' and wins when the receiver
accepts it as a fresh source state: m' must lie in some cell of e that none of
the observed messages already touched.  The order-i deception probability is
the opponent's best-response success rate,

    P_i = sum over M' of Pr[M'] * max over m' of Pr[win | M', m'].

Derivation used by the evaluator.  For an observation set M' of i distinct
messages, rule e explains M' exactly when every message sits in a distinct
cell of e; then

    Pr[M' | e] = (1 / C(u, i)) * prod over touched cells of 1/|cell|,

and Pr[M' | e] = 0 otherwise.  Writing w_e for the cell-size product (the
posterior weight; for a c-splitting code w_e = c**-i uniformly, which is why
every explaining rule is equally likely there), Bayes gives

    Pr[M'] * Pr[win | M', m'] = (1 / (|E| * C(u, i))) * sum over winning e of w_e,

so the evaluator accumulates, per observation set, the best winning weight sum
over insertions and divides once by |E| * C(u, i).  The weighting makes the
same code path exact for codes with unequal cell sizes, where the posterior is
not uniform.  `joint_deception_probability` checks all of this from first
principles: it enumerates every (rule, source subset, splitting choice)
outcome of the joint distribution and never forms a posterior.

Bounds.  Any splitting code obeys

    P_i >= min over rules e of (|M(e)| - i * max cell of e) / (v - i),

with M(e) the accepted-message set of e and v the size of the message
universe; for a c-splitting code the right side is c(u - i) / (v - i).  The
rule-count bound multiplies the reciprocals of these per-order bounds with the
minimizing rule chosen per factor:

    |E| >= prod over i < t of (v - i) / min_e (|M(e)| - i * max cell of e),

which is C(v, t) / (c**t * C(u, t)) in the c-splitting case.  A code is
*optimal* for strength t when its rule count meets that product exactly.

The acceptance-only figure (opponent wins whenever the receiver merely accepts
m', fresh source or not) is kept as a labelled diagnostic: for splitting codes
acceptance already implies decodability, and the fresh-source reading is the
one under which design-derived codes meet the bounds.
"""
from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod
from typing import Iterator, Literal, Sequence

from .codes import AuthCode
from .errors import InputError

# Observation enumeration is C(v, i); past 64 messages require an explicit
# opt-in so a stray parameter cannot wedge the process.
LARGE_MESSAGE_UNIVERSE = 64

Predicate = Literal["fresh_source", "acceptance_only"]


@dataclass(frozen=True)
class SecurityModel:
    """Distribution triple of the game; only the all-uniform model is supported."""

    source_distribution: str = "uniform"
    rule_strategy: str = "uniform"
    splitting_strategy: str = "uniform"

    def __post_init__(self):
        for name in ("source_distribution", "rule_strategy", "splitting_strategy"):
            if getattr(self, name) != "uniform":
                raise InputError(
                    f"{name} must be 'uniform'; non-uniform models are not supported"
                )


UNIFORM_MODEL = SecurityModel()


@dataclass(frozen=True)
class AttackWitness:
    """A best opponent response: observe `observed`, insert `inserted`.

    `conditional` is the success probability given that observation; the
    witness is the lexicographically least pair attaining the maximum over
    all positive-probability observations.
    """

    observed: tuple[int, ...]
    inserted: int
    conditional: Fraction


@dataclass(frozen=True)
class AttackEvaluation:
    order: int
    predicate: Predicate
    probability: Fraction
    witness: AttackWitness


@dataclass(frozen=True)
class OrderReport:
    """One row of a deception profile."""

    order: int
    probability: Fraction
    bound: Fraction
    meets_bound: bool
    witness: AttackWitness
    acceptance_probability: Fraction
    acceptance_witness: AttackWitness


@dataclass(frozen=True)
class DeceptionProfile:
    orders: tuple[OrderReport, ...]

    @property
    def security_order(self) -> int:
        """Largest k with the bound met at every order up to k; -1 if none.

        Judged over the evaluated orders only; evaluate through u-1 to claim
        the full security order of the code.
        """
        k = -1
        for row in self.orders:
            if not row.meets_bound:
                break
            k = row.order
        return k


def _check_order(code: AuthCode, i: int, allow_large: bool) -> None:
    if not isinstance(i, int) or i < 0:
        raise InputError(f"attack order must be a nonnegative integer, got {i!r}")
    if i >= code.num_sources:
        raise InputError(
            f"attack order {i} needs {i} distinct observed sources; "
            f"the code has only u={code.num_sources}, so orders run 0..{code.num_sources - 1}"
        )
    if code.num_messages > LARGE_MESSAGE_UNIVERSE and not allow_large:
        raise InputError(
            f"{code.num_messages} messages exceed the evaluation cap of "
            f"{LARGE_MESSAGE_UNIVERSE}; pass allow_large=True to override"
        )


def deception_bound(code: AuthCode, i: int) -> Fraction:
    """Lower bound on the order-i deception probability of this code."""
    if not isinstance(i, int) or not 0 <= i < code.num_messages:
        raise InputError(f"order must lie in 0..{code.num_messages - 1}, got {i!r}")
    return min(
        Fraction(
            sum(len(cell) for cell in rule) - i * max(len(cell) for cell in rule),
            code.num_messages - i,
        )
        for rule in code.rules
    )


def encoding_rule_bound(code: AuthCode, t: int) -> Fraction:
    """Minimum number of rules needed for security orders 0..t-1.

    Product over i < t of (v - i) / min_e (|M(e)| - i * max cell), evaluated
    with the minimizing rule per factor.
    """
    if not isinstance(t, int) or t < 1:
        raise InputError(f"strength must be a positive integer, got {t!r}")
    value = Fraction(1)
    for i in range(t):
        denom = min(
            sum(len(cell) for cell in rule) - i * max(len(cell) for cell in rule)
            for rule in code.rules
        )
        if denom <= 0:
            raise InputError(
                f"rule bound is undefined at strength {t}: factor {i} has "
                f"nonpositive accepted-message surplus {denom}"
            )
        value *= Fraction(code.num_messages - i, denom)
    return value


def _observation_batches(v: int, i: int) -> Iterator[list[tuple[int, ...]]]:
    """Observation sets grouped by least message, for deterministic partitioning."""
    if i == 0:
        yield [()]
        return
    for first in range(v - i + 1):
        yield [(first, *rest) for rest in combinations(range(first + 1, v), i - 1)]


def _evaluate_batch(
    code: AuthCode,
    lookups: Sequence[dict[int, int]],
    batch: Sequence[tuple[int, ...]],
    fresh: bool,
) -> tuple[Fraction, AttackWitness | None]:
    """Sum of best winning weights over one batch, plus its best witness."""
    score_total = Fraction(0)
    best: AttackWitness | None = None
    for observed in batch:
        explaining: list[tuple[int, Fraction, set[int]]] = []
        for ei, lookup in enumerate(lookups):
            sources: set[int] = set()
            for m in observed:
                s = lookup.get(m)
                if s is None or s in sources:
                    break
                sources.add(s)
            else:
                weight = Fraction(1)
                for s in sources:
                    weight /= len(code.rules[ei][s])
                explaining.append((ei, weight, sources))
        if not explaining:
            continue  # zero-probability observation
        total_weight = sum(w for _, w, _ in explaining)
        best_score = Fraction(0)
        best_insert: int | None = None
        for m in range(code.num_messages):
            if m in observed:
                continue
            score = Fraction(0)
            for ei, weight, sources in explaining:
                s = lookups[ei].get(m)
                if s is None:
                    continue
                if fresh and s in sources:
                    continue
                score += weight
            if score > best_score:
                best_score, best_insert = score, m
        score_total += best_score
        if best_insert is not None:
            candidate = AttackWitness(observed, best_insert, best_score / total_weight)
            if (
                best is None
                or candidate.conditional > best.conditional
                or (
                    candidate.conditional == best.conditional
                    and (candidate.observed, candidate.inserted)
                    < (best.observed, best.inserted)
                )
            ):
                best = candidate
    return score_total, best


def deception_probability(
    code: AuthCode,
    i: int,
    model: SecurityModel | None = None,
    predicate: Predicate = "fresh_source",
    allow_large: bool = False,
    threads: int = 1,
) -> AttackEvaluation:
    """Best-response success rate of an order-i spoofing attack.

    The default predicate demands the inserted message impersonate a source
    the opponent has not already observed; "acceptance_only" scores bare
    acceptance by the receiver and is reported as a diagnostic.
    """
    model = UNIFORM_MODEL if model is None else model
    _check_order(code, i, allow_large)
    if predicate not in ("fresh_source", "acceptance_only"):
        raise InputError(f"unknown predicate {predicate!r}")
    fresh = predicate == "fresh_source"

    lookups = [
        {m: s for s, cell in enumerate(rule) for m in cell} for rule in code.rules
    ]
    batches = list(_observation_batches(code.num_messages, i))
    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda b: _evaluate_batch(code, lookups, b, fresh), batches)
            )
    else:
        parts = [_evaluate_batch(code, lookups, batch, fresh) for batch in batches]

    total = Fraction(0)
    witness: AttackWitness | None = None
    for score, candidate in parts:
        total += score
        if candidate is not None and (
            witness is None
            or candidate.conditional > witness.conditional
            or (
                candidate.conditional == witness.conditional
                and (candidate.observed, candidate.inserted)
                < (witness.observed, witness.inserted)
            )
        ):
            witness = candidate
    if witness is None:
        witness = AttackWitness((), 0, Fraction(0))  # no winning insertion exists
    probability = total / (code.num_rules * comb(code.num_sources, i))
    return AttackEvaluation(order=i, predicate=predicate, probability=probability, witness=witness)


def deception_profile(
    code: AuthCode,
    max_order: int | None = None,
    model: SecurityModel | None = None,
    allow_large: bool = False,
    threads: int = 1,
) -> DeceptionProfile:
    """Evaluate orders 0..max_order (default u-1) against their bounds.

    Each row carries the fresh-source probability, its bound, the equality
    flag, the best-response witness, and the acceptance-only diagnostic.
    """
    top = code.num_sources - 1 if max_order is None else max_order
    _check_order(code, top, allow_large)
    rows = []
    for i in range(top + 1):
        primary = deception_probability(
            code, i, model=model, allow_large=allow_large, threads=threads
        )
        diagnostic = deception_probability(
            code,
            i,
            model=model,
            predicate="acceptance_only",
            allow_large=allow_large,
            threads=threads,
        )
        bound = deception_bound(code, i)
        rows.append(
            OrderReport(
                order=i,
                probability=primary.probability,
                bound=bound,
                meets_bound=primary.probability == bound,
                witness=primary.witness,
                acceptance_probability=diagnostic.probability,
                acceptance_witness=diagnostic.witness,
            )
        )
    return DeceptionProfile(orders=tuple(rows))


def security_order(
    code: AuthCode,
    model: SecurityModel | None = None,
    allow_large: bool = False,
    threads: int = 1,
) -> int:
    """Largest k with P_i equal to its bound for every i <= k; -1 if i=0 fails.

    Evaluated over the whole attainable range 0..u-1.
    """
    order = -1
    for i in range(code.num_sources):
        evaluation = deception_probability(
            code, i, model=model, allow_large=allow_large, threads=threads
        )
        if evaluation.probability != deception_bound(code, i):
            break
        order = i
    return order


def is_optimal(code: AuthCode, t: int) -> bool:
    """True when the rule count meets the strength-t rule bound exactly."""
    return Fraction(code.num_rules) == encoding_rule_bound(code, t)


def joint_deception_probability(
    code: AuthCode,
    i: int,
    predicate: Predicate = "fresh_source",
    allow_large: bool = False,
) -> Fraction:
    """Reference evaluator: enumerate the full joint distribution outcome by outcome.

    Walks every (rule, source subset, splitting choice) triple, accumulates
    the joint mass of each (observation set, rule) pair, and reads the
    opponent's best response straight off those masses.  No posterior, no
    shared code with the optimized evaluator; kept as the independent route
    for cross-checking it.
    """
    _check_order(code, i, allow_large)
    fresh = predicate == "fresh_source"
    u = code.num_sources
    base = Fraction(1, code.num_rules * comb(u, i))

    mass: dict[tuple[int, ...], dict[int, Fraction]] = defaultdict(
        lambda: defaultdict(Fraction)
    )
    for ei, rule in enumerate(code.rules):
        for sources in combinations(range(u), i):
            cells = [rule[s] for s in sources]
            share = base / prod(len(cell) for cell in cells)
            for choice in product(*cells):
                mass[tuple(sorted(choice))][ei] += share

    total = Fraction(0)
    for observed, per_rule in mass.items():
        best = Fraction(0)
        for m in range(code.num_messages):
            if m in observed:
                continue
            score = Fraction(0)
            for ei, weight in per_rule.items():
                rule = code.rules[ei]
                holder = next((s for s, cell in enumerate(rule) if m in cell), None)
                if holder is None:
                    continue
                if fresh and any(x in rule[holder] for x in observed):
                    continue
                score += weight
            best = max(best, score)
        total += best
    return total
