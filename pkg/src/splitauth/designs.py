"""Splitting block designs: data model, verification, and feasibility screening.

A t-(v, b, l, lambda) splitting design with l = c*u is a set of v points
together with b blocks, where every block is a disjoint union of u sub-blocks
of c points each.  A t-subset of points is *properly covered* by a block when
all of its points lie in the block with no two of them inside the same
sub-block.  The design property requires every t-subset to be properly covered
by exactly lambda blocks.  For c = 1 this degenerates to an ordinary t-design
with block size u.

All verdict arithmetic is exact: counts are integers and every ratio is a
`fractions.Fraction`.  No floating point enters any decision.

The replication number of an s-subset (1 <= s <= t) follows from double
counting the t-subsets that extend it:

    lambda_s = lambda * C(v-s, t-s) / (c**(t-s) * C(u-s, t-s))

so a splitting t-design is also a splitting s-design whenever these are
integers.  The screening helpers below turn the standard necessary conditions
(block/point incidence counting, divisibility, and the Fisher-type inequality
b >= v/u for t >= 2) into exact checks on the parameter tuple.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InputError, ParseError, StructureError

Block = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DesignParams:
    """Parameter tuple of a splitting design.

    `b` may be None while screening parameter sets where the block count is
    still unknown; every other field is required.  `lambda_` is the coverage
    count of the design property.
    """

    t: int
    v: int
    c: int
    u: int
    lambda_: int
    b: int | None = None

    def __post_init__(self):
        for name in ("t", "v", "c", "u", "lambda_"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InputError(f"{name} must be a positive integer, got {value!r}")
        if self.b is not None and (not isinstance(self.b, int) or self.b < 1):
            raise InputError(f"b must be a positive integer or None, got {self.b!r}")
        if self.t > self.u:
            raise InputError(f"strength t={self.t} exceeds sub-block count u={self.u}")
        if self.c * self.u > self.v:
            raise InputError(
                f"block size c*u={self.c * self.u} exceeds point count v={self.v}"
            )

    @property
    def l(self) -> int:
        """Block size c*u."""
        return self.c * self.u


@dataclass(frozen=True)
class SplittingDesign:
    """Point set 0..v-1 plus a block family.

    Each block is a tuple of u sub-blocks, each a sorted tuple of c point
    labels.  Sub-block order inside a block is stored but carries no meaning;
    `canonicalize` produces the unique normal form.  `labels` maps dense point
    i to its display label (loaders record the original file labels here) and
    must be strictly increasing.
    """

    v: int
    blocks: Block | tuple[Block, ...]
    labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        normal = tuple(
            tuple(tuple(sorted(sub)) for sub in block) for block in self.blocks
        )
        object.__setattr__(self, "blocks", normal)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.v)))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def u(self) -> int:
        return len(self.blocks[0])

    @property
    def c(self) -> int:
        return len(self.blocks[0][0])

    def label_of(self, point: int) -> int:
        return self.labels[point]

    def validate(self) -> None:
        """Raise StructureError unless this is structurally a splitting design."""
        if not isinstance(self.v, int) or self.v < 1:
            raise StructureError(f"point count must be positive, got {self.v!r}")
        if not self.blocks:
            raise StructureError("design has no blocks")
        if len(self.labels) != self.v:
            raise StructureError(
                f"label map covers {len(self.labels)} points, expected {self.v}"
            )
        if any(self.labels[i] >= self.labels[i + 1] for i in range(self.v - 1)):
            raise StructureError("labels must be strictly increasing")
        u, c = self.u, self.c
        if u < 1 or c < 1:
            raise StructureError("blocks need at least one nonempty sub-block")
        for bi, block in enumerate(self.blocks):
            if len(block) != u:
                raise StructureError(f"block {bi} has {len(block)} sub-blocks, expected {u}")
            seen: set[int] = set()
            for si, sub in enumerate(block):
                if len(sub) != c:
                    raise StructureError(
                        f"block {bi} sub-block {si} has {len(sub)} points, expected {c}"
                    )
                for p in sub:
                    if not isinstance(p, int) or not 0 <= p < self.v:
                        raise StructureError(f"block {bi} holds out-of-range point {p!r}")
                    if p in seen:
                        raise StructureError(
                            f"block {bi} repeats point {p}: sub-blocks must be disjoint"
                        )
                    seen.add(p)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of testing the design property at one (t, lambda).

    `histogram` maps observed proper-coverage counts to the number of
    t-subsets attaining them; the design passes exactly when lambda is its
    single key.  `counterexample` is the lexicographically least failing
    t-subset together with its observed count, or None on a pass.
    """

    passed: bool
    strength: int
    coverage: int
    counterexample: tuple[tuple[int, ...], int] | None
    histogram: Mapping[int, int]


@dataclass(frozen=True)
class RelationChecks:
    """Exact evaluation of the three counting relations on a parameter tuple.

    relation_c is None when t < 2 (the relation involves lambda_2).  Note the
    printed form r * c**(t-1) * (u-1) == lambda_2 * (v-1) is a valid identity
    only at t = 2; for t > 2 it is still evaluated verbatim but callers should
    treat a failure as informational (see FeasibilityReport.admissible).
    """

    relation_a_holds: bool
    relation_b_holds: bool
    relation_c_holds: bool | None


@dataclass(frozen=True)
class FeasibilityReport:
    """Aggregated arithmetic screening of a parameter tuple."""

    params: DesignParams
    relation_a_holds: bool
    relation_b_holds: bool
    relation_c_holds: bool | None
    divisibility_failures: tuple[int, ...]
    fisher_holds: bool | None
    lambda_s_values: tuple[Fraction, ...]
    block_count_required: Fraction

    @property
    def admissible(self) -> bool:
        """True when every applicable necessary condition is satisfied.

        relation (c) gates admissibility only at t = 2, where it is a genuine
        identity; at higher strength its printed form fails on parameter sets
        with known designs, so there it is reported but not enforced.
        """
        if not (self.relation_a_holds and self.relation_b_holds):
            return False
        if self.params.t == 2 and self.relation_c_holds is False:
            return False
        if self.divisibility_failures:
            return False
        if self.fisher_holds is False:
            return False
        return all(x.denominator == 1 for x in self.lambda_s_values)


def _subset_points(design: SplittingDesign, subset: Iterable[int]) -> tuple[int, ...]:
    points = tuple(subset)
    if len(set(points)) != len(points):
        raise InputError(f"subset {points} repeats a point")
    for p in points:
        if not isinstance(p, int) or not 0 <= p < design.v:
            raise InputError(f"point {p!r} is outside 0..{design.v - 1}")
    return points


def count_qualifying_blocks(design: SplittingDesign, subset: Iterable[int]) -> int:
    """Number of blocks properly covering `subset` (dense point labels).

    Sub-blocks are disjoint, so a block properly covers the subset exactly
    when it contains every point and their sub-block indices are pairwise
    distinct; no injective-assignment search is needed.
    """
    points = _subset_points(design, subset)
    if len(points) > design.u:
        raise InputError(
            f"subset size {len(points)} exceeds sub-block count u={design.u}"
        )
    count = 0
    for block in design.blocks:
        where = {}
        for j, sub in enumerate(block):
            for p in sub:
                where[p] = j
        indices = set()
        for p in points:
            j = where.get(p)
            if j is None:
                break
            indices.add(j)
        else:
            if len(indices) == len(points):
                count += 1
    return count


def verify_splitting_design(
    design: SplittingDesign, t: int, coverage: int, threads: int = 1
) -> VerificationReport:
    """Test the design property at strength t and coverage count lambda.

    Scans all C(v, t) point subsets against per-point block incidence lists.
    The returned counterexample, when present, is the lexicographically least
    failing subset regardless of block order, so the report is deterministic
    under any reordering of blocks or sub-blocks.
    """
    design.validate()
    if not isinstance(t, int) or t < 1:
        raise InputError(f"strength must be a positive integer, got {t!r}")
    if t > design.u:
        raise InputError(f"strength t={t} exceeds sub-block count u={design.u}")
    if not isinstance(coverage, int) or coverage < 1:
        raise InputError(f"coverage must be a positive integer, got {coverage!r}")

    membership = []
    incidence: list[list[int]] = [[] for _ in range(design.v)]
    for bi, block in enumerate(design.blocks):
        where = {}
        for j, sub in enumerate(block):
            for p in sub:
                where[p] = j
        membership.append(where)
        for p in where:
            incidence[p].append(bi)

    def scan(first_points: Sequence[int]) -> tuple[dict[int, int], tuple | None]:
        histogram: dict[int, int] = {}
        worst: tuple | None = None
        for first in first_points:
            for rest in combinations(range(first + 1, design.v), t - 1):
                points = (first, *rest)
                count = 0
                for bi in incidence[first]:
                    where = membership[bi]
                    indices = set()
                    for p in points:
                        j = where.get(p)
                        if j is None:
                            break
                        indices.add(j)
                    else:
                        if len(indices) == t:
                            count += 1
                histogram[count] = histogram.get(count, 0) + 1
                if count != coverage and worst is None:
                    worst = (points, count)
        return histogram, worst

    starts = list(range(design.v - t + 1))  # nonempty: t <= u <= c*u <= v
    if threads > 1 and len(starts) > 1:
        chunks = [[p] for p in starts]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(scan, chunks))
    else:
        parts = [scan(starts)]

    histogram: dict[int, int] = {}
    counterexample = None
    for hist, worst in parts:
        for k, n in hist.items():
            histogram[k] = histogram.get(k, 0) + n
        if worst is not None and (counterexample is None or worst[0] < counterexample[0]):
            counterexample = worst

    histogram = dict(sorted(histogram.items()))
    passed = counterexample is None
    return VerificationReport(
        passed=passed,
        strength=t,
        coverage=coverage,
        counterexample=counterexample,
        histogram=histogram,
    )


def _lambda_s(params: DesignParams, s: int) -> Fraction:
    """Replication fraction for s-subsets; s = 0 yields the required block count."""
    t, v, c, u = params.t, params.v, params.c, params.u
    return Fraction(
        params.lambda_ * comb(v - s, t - s), c ** (t - s) * comb(u - s, t - s)
    )


def replication_number(params: DesignParams, s: int) -> Fraction:
    """Exact lambda_s for 1 <= s <= t; integral for every realizable design."""
    if not isinstance(s, int) or not 1 <= s <= params.t:
        raise InputError(f"s must lie in 1..{params.t}, got {s!r}")
    return _lambda_s(params, s)


def check_parameter_relations(params: DesignParams) -> RelationChecks:
    """Evaluate the three block/point counting relations with exact arithmetic.

    (a)  b * l == v * r                    with r = lambda_1
    (b)  C(v, t) * lambda == b * c**t * C(u, t)
    (c)  r * c**(t-1) * (u-1) == lambda_2 * (v-1)   (t >= 2 only)

    Requires a known block count.  Relation (c) is evaluated verbatim; see
    RelationChecks for its validity caveat at t > 2.
    """
    if params.b is None:
        raise InputError("relations need a known block count b")
    t, v, c, u, b = params.t, params.v, params.c, params.u, params.b
    r = _lambda_s(params, 1)
    rel_a = Fraction(b * params.l) == v * r
    rel_b = comb(v, t) * params.lambda_ == b * c**t * comb(u, t)
    if t < 2:
        rel_c = None
    else:
        rel_c = r * c ** (t - 1) * (u - 1) == _lambda_s(params, 2) * (v - 1)
    return RelationChecks(rel_a, rel_b, rel_c)


def check_divisibility(params: DesignParams) -> tuple[int, ...]:
    """Orders s in 1..t whose replication fraction lambda_s is not an integer."""
    return tuple(
        s for s in range(1, params.t + 1) if _lambda_s(params, s).denominator != 1
    )


def check_fisher(params: DesignParams) -> bool | None:
    """Fisher-type inequality b >= v/u for t >= 2; None when t < 2 (no claim)."""
    if params.t < 2:
        return None
    if params.b is None:
        raise InputError("the Fisher check needs a known block count b")
    return params.b >= Fraction(params.v, params.u)


def check_feasibility(params: DesignParams) -> FeasibilityReport:
    """Run every arithmetic screen at once.

    When `params.b` is None the block count forced by relation (b) is used for
    the b-dependent checks, provided it is an integer; a fractional forced
    count fails relations (a) and (b) outright since no integer b can satisfy
    them.
    """
    lam_s = tuple(_lambda_s(params, s) for s in range(params.t + 1))
    required = lam_s[0]
    div_failures = check_divisibility(params)

    effective_b = params.b
    if effective_b is None and required.denominator == 1:
        effective_b = int(required)

    if effective_b is None:
        rel = RelationChecks(False, False, None if params.t < 2 else False)
        fisher = None
    else:
        with_b = replace(params, b=effective_b)
        rel = check_parameter_relations(with_b)
        fisher = check_fisher(with_b)

    return FeasibilityReport(
        params=params,
        relation_a_holds=rel.relation_a_holds,
        relation_b_holds=rel.relation_b_holds,
        relation_c_holds=rel.relation_c_holds,
        divisibility_failures=div_failures,
        fisher_holds=fisher,
        lambda_s_values=lam_s,
        block_count_required=required,
    )


def canonicalize(design: SplittingDesign) -> SplittingDesign:
    """Unique normal form: sub-blocks ascend by least point, blocks sort lexicographically.

    Idempotent, and invariant under any reordering of blocks or sub-blocks of
    the same design.  Point labels are preserved.
    """
    design.validate()
    blocks = tuple(
        sorted(tuple(sorted(block, key=lambda sub: sub[0])) for block in design.blocks)
    )
    return SplittingDesign(v=design.v, blocks=blocks, labels=design.labels)


# ---------------------------------------------------------------------------
# Design file format.
#
#   file       = header-line [points-line] block-line*
#   header     = "t=T v=V c=C u=U lambda=L" [" b=B"]   (key=value, any order)
#   points     = "points L1 L2 ... Lv"                 (optional, distinct ints)
#   block-line = JSON array of u arrays of c integer labels, e.g. [[1,2],[3,5]]
#
# '#' starts a comment; blank lines are ignored.  Without a points line the
# universe is the set of labels appearing in blocks and must have exactly v
# elements.  Labels are mapped to dense points 0..v-1 in increasing order and
# the original labels are recorded on the design.
# ---------------------------------------------------------------------------

_HEADER_KEYS = ("t", "v", "c", "u", "lambda")


def _parse_header(line: str, lineno: int) -> dict[str, int]:
    values: dict[str, int] = {}
    for token in line.split():
        key, sep, raw = token.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {token!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate header key {key!r}", lineno)
        try:
            values[key] = int(raw)
        except ValueError:
            raise ParseError(f"header value for {key!r} is not an integer", lineno)
    missing = [k for k in _HEADER_KEYS if k not in values]
    if missing:
        raise ParseError(f"header is missing {', '.join(missing)}", lineno)
    extra = [k for k in values if k not in _HEADER_KEYS + ("b",)]
    if extra:
        raise ParseError(f"unknown header key {extra[0]!r}", lineno)
    return values


def parse_design(text: str) -> tuple[SplittingDesign, DesignParams]:
    """Parse the design file format; returns the design and its declared parameters."""
    header: dict[str, int] | None = None
    declared_points: list[int] | None = None
    raw_blocks: list[list[list[int]]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line, lineno)
            continue
        if line.startswith("points"):
            if declared_points is not None:
                raise ParseError("duplicate points line", lineno)
            if raw_blocks:
                raise ParseError("points line must precede blocks", lineno)
            try:
                declared_points = [int(tok) for tok in line.split()[1:]]
            except ValueError:
                raise ParseError("points line holds a non-integer", lineno)
            if len(set(declared_points)) != len(declared_points):
                raise ParseError("points line repeats a label", lineno)
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            raise ParseError("block record is not a JSON array", lineno)
        if not isinstance(record, list) or not all(
            isinstance(group, list) and all(isinstance(x, int) for x in group)
            for group in record
        ):
            raise ParseError("block record must be an array of integer arrays", lineno)
        if len(record) != header["u"]:
            raise ParseError(
                f"block has {len(record)} sub-blocks, header says u={header['u']}", lineno
            )
        for group in record:
            if len(group) != header["c"]:
                raise ParseError(
                    f"sub-block {group} has {len(group)} labels, header says c={header['c']}",
                    lineno,
                )
        flat = [x for group in record for x in group]
        if len(set(flat)) != len(flat):
            raise ParseError("block repeats a point label", lineno)
        raw_blocks.append(record)

    if header is None:
        raise ParseError("file has no header line")
    if not raw_blocks:
        raise ParseError("file declares no blocks")
    if "b" in header and header["b"] != len(raw_blocks):
        raise ParseError(
            f"header declares b={header['b']} but file holds {len(raw_blocks)} blocks"
        )

    seen = sorted({x for block in raw_blocks for group in block for x in group})
    if declared_points is not None:
        labels = sorted(declared_points)
        stray = [x for x in seen if x not in set(labels)]
        if stray:
            raise ParseError(f"block label {stray[0]} is missing from the points line")
    else:
        labels = seen
    if len(labels) != header["v"]:
        raise ParseError(
            f"universe has {len(labels)} labels but header says v={header['v']}"
        )

    dense = {label: i for i, label in enumerate(labels)}
    blocks = tuple(
        tuple(tuple(sorted(dense[x] for x in group)) for group in block)
        for block in raw_blocks
    )
    design = SplittingDesign(v=header["v"], blocks=blocks, labels=tuple(labels))
    design.validate()
    params = DesignParams(
        t=header["t"],
        v=header["v"],
        c=header["c"],
        u=header["u"],
        lambda_=header["lambda"],
        b=len(raw_blocks),
    )
    if design.u != params.u or design.c != params.c:
        raise ParseError("block shape disagrees with header")  # unreachable, guarded above
    return design, params


def format_design(design: SplittingDesign, t: int, coverage: int) -> str:
    """Render a design back to the file format using its original labels."""
    design.validate()
    lines = [
        f"t={t} v={design.v} c={design.c} u={design.u} lambda={coverage} b={design.num_blocks}",
        "points " + " ".join(str(x) for x in design.labels),
    ]
    for block in design.blocks:
        named = [[design.labels[p] for p in sub] for sub in block]
        lines.append(json.dumps(named, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def load_design(path: str | Path) -> tuple[SplittingDesign, DesignParams]:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def store_design(design: SplittingDesign, t: int, coverage: int, path: str | Path) -> None:
    Path(path).write_text(format_design(design, t, coverage), encoding="utf-8")
