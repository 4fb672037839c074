#!/usr/bin/env python3
"""Print the extremal constant for a few interval configurations, with the
exhaustive-grid cross-check and the jump positions of the minimizer."""

from reflectionless import CompactSet, grid_min_mass, minimize_mass

SETS = [
    [[-2.0, 2.0]],
    [[0.0, 4.0]],
    [[-1.0, 1.0]],
    [[-2.0, -0.5], [0.5, 2.0]],
    [[-2.0, -1.0], [0.0, 2.0]],
    [[-3.0, -1.5], [-0.5, 1.0], [2.0, 3.0]],
]

if __name__ == "__main__":
    print(f"{'set':>42} {'A':>12} {'grid check':>12}  argmin jumps")
    for intervals in SETS:
        k = CompactSet(tuple(tuple(iv) for iv in intervals))
        res = minimize_mass(k)
        oracle = grid_min_mass(k, grid=101)
        jumps = ", ".join(f"{g:.6f}" for g in res.jumps.masses) or "-"
        print(f"{str(intervals):>42} {res.constant:12.8f} "
              f"{abs(res.constant - oracle.constant):12.2e}  {jumps}")
