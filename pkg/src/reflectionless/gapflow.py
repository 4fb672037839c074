r"""The gap-modification flow to the canonical Krein class.

Given a Krein step function with xi = 1/2 on a finite-gap compact set K,
the flow sets xi = 1 left of K and 0 right of K, then rearranges the mass
in every gap (c, d) into the right-packed indicator chi_{(d-g, d)} with
g = integral of xi over the gap.  Each step can only lower the Hilbert
transform (hence |H|) on K, and the result lies in the canonical class:
1 / bands 1/2 / 0 with at most one upward jump per gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .krein import StepFunction
from .sets import CompactSet

__all__ = [
    "CompactSet",
    "CanonicalKrein",
    "gap_modify",
    "flow_to_canonical",
    "flow_steps",
    "is_canonical",
    "gap_jump_masses",
]


def _require_half_on_bands(xi: StepFunction, k_set: CompactSet):
    if not (-xi.bound <= k_set.min and k_set.max <= xi.bound):
        raise ValueError("K must lie inside the domain [-R, R]")
    for c, d in k_set.intervals:
        for x0, x1, v in xi.pieces():
            lo, hi = max(x0, c), min(x1, d)
            if hi > lo and v != 0.5:
                raise ValueError(f"xi must equal 1/2 on the band [{c}, {d}]")


def gap_modify(xi: StepFunction, gap: tuple[float, float]) -> StepFunction:
    """Replace xi on the gap (c, d) by the right-packed indicator carrying
    the same mass g = integral of xi over (c, d); xi is unchanged elsewhere."""
    c, d = float(gap[0]), float(gap[1])
    if not (-xi.bound <= c < d <= xi.bound):
        raise ValueError("gap must be a nonempty interval inside the domain")
    g = xi.integral(c, d)
    if g <= 0.0:
        return xi.with_value(c, d, 0.0)
    if g >= d - c:
        return xi.with_value(c, d, 1.0)
    p = d - g
    return xi.with_value(c, p, 0.0).with_value(p, d, 1.0)


@dataclass(frozen=True)
class CanonicalKrein:
    """A step function certified to lie in the canonical class of K."""

    xi: StepFunction
    k_set: CompactSet

    def __post_init__(self):
        if not is_canonical(self.xi, self.k_set):
            raise ValueError("step function does not have the canonical shape")

    def jumps(self) -> tuple[float, ...]:
        return gap_jump_masses(self.xi, self.k_set)


def flow_steps(xi: StepFunction, k_set: CompactSet) -> Iterator[tuple[str, StepFunction]]:
    """The flow one modification at a time: tails first, then each gap left
    to right.  Yields (label, xi_after_step)."""
    _require_half_on_bands(xi, k_set)
    cur = xi
    if k_set.min > -xi.bound:
        cur = cur.with_value(-xi.bound, k_set.min, 1.0)
        yield "left-tail", cur
    if k_set.max < xi.bound:
        cur = cur.with_value(k_set.max, xi.bound, 0.0)
        yield "right-tail", cur
    for gap in k_set.gaps():
        cur = gap_modify(cur, gap)
        yield f"gap({gap[0]},{gap[1]})", cur


def flow_to_canonical(xi: StepFunction, k_set: CompactSet) -> CanonicalKrein:
    """Run the whole flow; with finitely many gaps no limit is involved."""
    cur = xi
    for _, cur in flow_steps(xi, k_set):
        pass
    return CanonicalKrein(cur, k_set)


def is_canonical(xi: StepFunction, k_set: CompactSet) -> bool:
    """True iff xi is 1 left of K, 0 right of K, 1/2 on the bands, and on
    each gap either constant 0, constant 1, or a single 0 -> 1 up-jump."""
    if not (-xi.bound <= k_set.min and k_set.max <= xi.bound):
        return False
    regions: list[tuple[float, float, tuple[float, ...] | None]] = []
    regions.append((-xi.bound, k_set.min, (1.0,)))
    for c, d in k_set.intervals:
        regions.append((c, d, (0.5,)))
    for gc, gd in k_set.gaps():
        regions.append((gc, gd, None))  # checked separately
    regions.append((k_set.max, xi.bound, (0.0,)))
    for lo, hi, allowed in regions:
        if hi <= lo:
            continue
        vals = []
        for x0, x1, v in xi.pieces():
            a, b = max(x0, lo), min(x1, hi)
            if b > a:
                vals.append(v)
        if allowed is not None:
            if any(v != allowed[0] for v in vals):
                return False
        else:
            if tuple(vals) not in ((0.0,), (1.0,), (0.0, 1.0)):
                return False
    return True


def gap_jump_masses(xi: StepFunction, k_set: CompactSet) -> tuple[float, ...]:
    """Per-gap masses g_j = integral of xi over gap j (for a canonical xi
    these are the jump parameters)."""
    return tuple(xi.integral(gc, gd) for gc, gd in k_set.gaps())
