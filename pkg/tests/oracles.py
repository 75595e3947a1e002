"""Brute-force reference implementations used only by the tests.

These share no code with the library on purpose.  Qualification is decided by
an explicit injective-assignment search over sub-block indices instead of the
membership-map shortcut, so the two routes agree only if both are right.
"""
from itertools import combinations, permutations


def qualifying_count_by_assignment(design, subset):
    """Blocks admitting an injective map of subset points into containing sub-blocks."""
    points = tuple(subset)
    count = 0
    for block in design.blocks:
        for order in permutations(range(len(block)), len(points)):
            if all(points[k] in block[j] for k, j in enumerate(order)):
                count += 1
                break
    return count


def replication_census(design, s):
    """Qualifying-block count for every s-subset of the dense point range."""
    return {
        subset: qualifying_count_by_assignment(design, subset)
        for subset in combinations(range(design.v), s)
    }


def classical_cover_counts(design, t):
    """Plain containment counts, ignoring sub-block structure entirely.

    For c = 1 the splitting property must coincide with this.
    """
    flat = [{p for sub in block for p in sub} for block in design.blocks]
    return {
        subset: sum(1 for block in flat if set(subset) <= block)
        for subset in combinations(range(design.v), t)
    }
