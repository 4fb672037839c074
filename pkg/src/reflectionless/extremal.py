r"""The extremal constant of a finite-gap compact set.

Over the canonical Krein class of K (one up-jump of mass g_j per gap) the
half-line mass of the associated measure is

    a_0^2 = (1/2) rho_ac(K) = (1/(2 pi)) integral_K |H(x)| dx,

a smooth function of the jump vector.  Its minimum over the box
prod_j [0, |gap_j|] is the square of the extremal constant: no operator
reflectionless on K can have any a_n below that value.  The minimizer is
found by a coarse grid followed by cyclic golden-section refinement, with
an exhaustive grid evaluator as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .krein import HerglotzRep, StepFunction
from .measures import _gl_rule, stieltjes_invert, total_mass
from .sets import CompactSet

__all__ = [
    "GapJumps",
    "canonical_krein_from_jumps",
    "default_bound",
    "mass_objective",
    "minimize_mass",
    "grid_min_mass",
    "ExtremalResult",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GapJumps:
    """One jump mass per gap of K, g_j in [0, |gap_j|]."""

    masses: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(float(g) for g in self.masses))

    def validate(self, k_set: CompactSet):
        gaps = k_set.gaps()
        if len(self.masses) != len(gaps):
            raise ValueError("need one jump mass per gap")
        for g, (gc, gd) in zip(self.masses, gaps):
            if not 0.0 <= g <= (gd - gc) + 1e-15:
                raise ValueError(f"jump mass {g} outside [0, {gd - gc}]")


def default_bound(k_set: CompactSet) -> float:
    """R = max |K| + 1 (the objective is R-independent; any valid R works)."""
    return max(abs(k_set.min), abs(k_set.max)) + 1.0


def canonical_krein_from_jumps(k_set: CompactSet, jumps: GapJumps,
                               bound: float | None = None) -> StepFunction:
    """The canonical step function: 1 left of K, 1/2 on bands, 0 right of K,
    and chi_{(d-g, d)} on each gap."""
    r = default_bound(k_set) if bound is None else float(bound)
    jumps.validate(k_set)
    pieces = []
    if k_set.min > -r:
        pieces.append((-r, k_set.min, 1.0))
    for c, d in k_set.intervals:
        pieces.append((c, d, 0.5))
    for g, (gc, gd) in zip(jumps.masses, k_set.gaps()):
        width = gd - gc
        if g <= 0.0:
            pieces.append((gc, gd, 0.0))
        elif g >= width:
            pieces.append((gc, gd, 1.0))
        else:
            pieces.append((gc, gd - g, 0.0))
            pieces.append((gd - g, gd, 1.0))
    if k_set.max < r:
        pieces.append((k_set.max, r, 0.0))
    return StepFunction.from_pieces(r, pieces)


def mass_objective(k_set: CompactSet, jumps: GapJumps,
                   bound: float | None = None, tol: float = 1e-12) -> float:
    """a_0^2 of the canonical operator with the given jumps:
    (1/(2 pi)) integral_K |H|, by the adaptive edge-substituted quadrature."""
    xi = canonical_krein_from_jumps(k_set, jumps, bound)
    rho = stieltjes_invert(HerglotzRep(xi))
    band_pieces = [p for p in rho.ac_pieces
                   if any(c <= p.lo and p.hi <= d for c, d in k_set.intervals)]
    masked = type(rho)(rho.rep, tuple(band_pieces), ())
    return 0.5 * total_mass(masked, tol=tol)


class _FastObjective:
    """Vectorized evaluator on fixed band quadrature nodes.

    |H(t)| = (t + R) exp(T_0(t) + sum_j [ln|d_j - t| - ln|d_j - g_j - t|])
    where T_0 is the no-jump canonical transform; only the per-gap terms
    depend on the jump vector, so grids evaluate as array operations.
    """

    def __init__(self, k_set: CompactSet, bound: float | None = None,
                 nodes_per_band: int = 128):
        self.k_set = k_set
        self.bound = default_bound(k_set) if bound is None else float(bound)
        th, w = _gl_rule(nodes_per_band)
        ts, ws = [], []
        for c, d in k_set.intervals:
            mid, half = 0.5 * (c + d), 0.5 * (d - c)
            ts.append(mid + half * np.sin(th))
            ws.append(w * half * np.cos(th))
        self.t = np.concatenate(ts)
        self.w = np.concatenate(ws)
        base = canonical_krein_from_jumps(k_set, GapJumps((0.0,) * len(k_set.gaps())),
                                          self.bound)
        # log|H_base| at the nodes, with the per-gap zero-jump terms absent
        from .krein import hilbert_transform
        self.log_base = np.log(self.t + self.bound) + hilbert_transform(base, self.t)
        self.gap_ends = np.array([gd for _, gd in k_set.gaps()])
        self.gap_widths = np.array([gd - gc for gc, gd in k_set.gaps()])

    def value(self, masses) -> float:
        g = np.asarray(masses, dtype=float)
        s = self.log_base.copy()
        for j, gj in enumerate(g):
            if gj > 0.0:
                d = self.gap_ends[j]
                s += np.log(np.abs(d - self.t)) - np.log(np.abs(d - gj - self.t))
        return float(self.w @ np.exp(s)) / (2.0 * np.pi)

    def grid_values(self, grids: list[np.ndarray]) -> np.ndarray:
        """Objective on the full product grid, shape = tuple(len(g) for g)."""
        shape = tuple(len(g) for g in grids)
        per_gap = []
        for j, gvals in enumerate(grids):
            d = self.gap_ends[j]
            delta = (np.log(np.abs(d - self.t))[None, :]
                     - np.log(np.abs(d - gvals[:, None] - self.t[None, :])))
            delta[gvals == 0.0, :] = 0.0
            per_gap.append(delta)
        out = np.empty(shape)
        it = np.ndindex(*shape[:-1]) if len(shape) > 1 else [()]
        last = per_gap[-1]
        for idx in it:
            s = self.log_base[None, :].copy()
            for j, i in enumerate(idx):
                s = s + per_gap[j][i][None, :]
            vals = np.exp(s + last) @ self.w
            out[idx] = vals / (2.0 * np.pi)
        return out


@dataclass(frozen=True)
class ExtremalResult:
    constant: float
    jumps: GapJumps
    objective_value: float
    bound_used: float
    near_minimizers: tuple[tuple[float, ...], ...] = ()


def grid_min_mass(k_set: CompactSet, bound: float | None = None,
                  grid: int = 401, nodes_per_band: int = 128) -> ExtremalResult:
    """Exhaustive minimum of the mass objective over the uniform parameter
    grid (independent check for the refined minimizer).  Ties resolve to the
    lexicographically smallest grid point; all grid points within 1e-8 of
    the minimum are reported."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    fast = _FastObjective(k_set, bound, nodes_per_band)
    gaps = k_set.gaps()
    if not gaps:
        jumps = GapJumps(())
        val = mass_objective(k_set, jumps, fast.bound)
        return ExtremalResult(math.sqrt(val), jumps, val, fast.bound, ((),))
    grids = [np.linspace(0.0, gd - gc, grid) for gc, gd in gaps]
    values = fast.grid_values(grids)
    flat = int(np.argmin(values))  # first occurrence = lexicographic smallest
    idx = np.unravel_index(flat, values.shape)
    arg = tuple(float(grids[j][i]) for j, i in enumerate(idx))
    vmin = float(values[idx])
    near = [tuple(float(grids[j][i]) for j, i in enumerate(ix))
            for ix in zip(*np.nonzero(values <= vmin + 1e-8))]
    jumps = GapJumps(arg)
    val = mass_objective(k_set, jumps, fast.bound)
    return ExtremalResult(math.sqrt(val), jumps, val, fast.bound, tuple(near))


def _golden_section(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimize a unimodal-in-practice scalar function on [lo, hi]."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    xm = 0.5 * (lo + hi)
    return xm, f(xm)


def minimize_mass(k_set: CompactSet, bound: float | None = None,
                  coarse_grid: int = 33, refine_tol: float = 1e-10,
                  max_cycles: int = 60, gap_cap: int = 4,
                  nodes_per_band: int = 128) -> ExtremalResult:
    """Extremal constant A(K) = sqrt(min mass objective) over the jump box.

    Coarse product grid (default 33 points per gap) localizes the minimum;
    cyclic per-coordinate golden-section refinement then converges to
    `refine_tol` in the parameters.  The final value is recomputed with the
    accurate adaptive quadrature.
    """
    gaps = k_set.gaps()
    if len(gaps) > gap_cap:
        raise ValueError(f"{len(gaps)} gaps exceed the configured cap {gap_cap}")
    fast = _FastObjective(k_set, bound, nodes_per_band)
    if not gaps:
        jumps = GapJumps(())
        val = mass_objective(k_set, jumps, fast.bound)
        return ExtremalResult(math.sqrt(val), jumps, val, fast.bound)
    widths = [gd - gc for gc, gd in gaps]
    grids = [np.linspace(0.0, wd, coarse_grid) for wd in widths]
    values = fast.grid_values(grids)
    idx = np.unravel_index(int(np.argmin(values)), values.shape)
    current = np.array([grids[j][i] for j, i in enumerate(idx)])
    steps = np.array([wd / (coarse_grid - 1) for wd in widths])
    for _ in range(max_cycles):
        moved = 0.0
        for j in range(len(current)):
            lo = max(0.0, current[j] - steps[j])
            hi = min(widths[j], current[j] + steps[j])

            def f(x, j=j):
                trial = current.copy()
                trial[j] = x
                return fast.value(trial)

            new_x, _ = _golden_section(f, lo, hi, refine_tol)
            moved = max(moved, abs(new_x - current[j]))
            current[j] = new_x
        steps = np.maximum(steps / 2.0, 4.0 * refine_tol)
        if moved <= refine_tol:
            break
    jumps = GapJumps(tuple(float(x) for x in current))
    val = mass_objective(k_set, jumps, fast.bound)
    return ExtremalResult(math.sqrt(val), jumps, val, fast.bound)
