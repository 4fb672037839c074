r"""Spectral measures built from Herglotz representations.

Stieltjes inversion of H(z) = (z+R) exp(int xi/(t-z)) is closed form for a
step function xi: on every piece with value 0 < v < 1 the measure is
absolutely continuous with density |H(t)| sin(pi v) / pi, and an atom sits
at every breakpoint where xi jumps from 0 directly to 1, with mass

    (x0 + R) * prod_{k != j} |x0 - x_k|^{c_k}

(the residue of H, with c_k the log-coefficients of xi).  Densities behave
like square roots at piece edges, so every integral is evaluated after the
arcsine substitution t = mid + half*sin(theta), which makes the integrand
analytic; Gauss-Legendre in theta then converges spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import NumericError
from .krein import HerglotzRep, StepFunction, abs_boundary, log_abs_on_arc
from .sets import CompactSet

__all__ = [
    "AcPiece",
    "SpectralMeasure",
    "FSelector",
    "stieltjes_invert",
    "half_line_measure",
    "total_mass",
    "moments",
    "quadrature_discretize",
    "nodes_weights_csv",
]


@lru_cache(maxsize=64)
def _gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    return x * (np.pi / 2.0), w * (np.pi / 2.0)


@dataclass(frozen=True)
class AcPiece:
    """Absolutely continuous piece on (lo, hi): density
    multiplier * |H(t)| * sin(pi * xi(t)) / pi for the owning measure's rep."""

    lo: float
    hi: float
    multiplier: float


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite positive measure: closed-form ac pieces tied to a Herglotz
    representation, plus point atoms (position, mass)."""

    rep: HerglotzRep | None
    ac_pieces: tuple[AcPiece, ...] = ()
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.ac_pieces and self.rep is None:
            raise ValueError("ac pieces need a Herglotz representation")
        for p in self.ac_pieces:
            if not p.hi > p.lo:
                raise ValueError("ac piece must have positive length")
        pieces = sorted(self.ac_pieces, key=lambda p: p.lo)
        for p0, p1 in zip(pieces, pieces[1:]):
            if p1.lo < p0.hi:
                raise ValueError("ac pieces must be disjoint")
        for _, m in self.atoms:
            if not m > 0:
                raise ValueError("atom masses must be positive")
        object.__setattr__(self, "ac_pieces", tuple(pieces))
        object.__setattr__(self, "atoms", tuple((float(x), float(m)) for x, m in self.atoms))

    def is_atomic(self) -> bool:
        return not self.ac_pieces

    def _piece_value(self, piece: AcPiece) -> float:
        return self.rep.xi.value_at(0.5 * (piece.lo + piece.hi))

    def density(self, piece: AcPiece, t: np.ndarray) -> np.ndarray:
        v = self._piece_value(piece)
        return piece.multiplier * abs_boundary(self.rep, t) * math.sin(math.pi * v) / math.pi

    def density_on_arc(self, piece: AcPiece, theta: np.ndarray) -> np.ndarray:
        """Density at t = mid + half*sin(theta), stable up to the piece
        edges (where it behaves like a power of the distance)."""
        v = self._piece_value(piece)
        log_h = log_abs_on_arc(self.rep, piece.lo, piece.hi, theta)
        return piece.multiplier * np.exp(log_h) * math.sin(math.pi * v) / math.pi

    def to_dict(self) -> dict:
        return {
            "rep": None if self.rep is None else self.rep.to_dict(),
            "ac_pieces": [{"interval": [p.lo, p.hi], "multiplier": p.multiplier}
                          for p in self.ac_pieces],
            "atoms": [[x, m] for x, m in self.atoms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralMeasure":
        rep = None if data.get("rep") is None else HerglotzRep.from_dict(data["rep"])
        pieces = tuple(AcPiece(p["interval"][0], p["interval"][1], p["multiplier"])
                       for p in data.get("ac_pieces", []))
        atoms = tuple((x, m) for x, m in data.get("atoms", []))
        return cls(rep, pieces, atoms)


@dataclass(frozen=True)
class FSelector:
    """The free part of the half-line correspondence: piecewise-constant
    values f in [0, 1] on intervals off K, plus per-atom weights in [0, 1].
    On K the factor is fixed to 1/2 and not stored; unspecified regions off
    K default to f = 0."""

    intervals: tuple[tuple[float, float, float], ...] = ()
    atom_weights: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        ivs = tuple((float(a), float(b), float(v)) for a, b, v in self.intervals)
        for a, b, v in ivs:
            if not b > a:
                raise ValueError("f interval must have positive length")
            if not 0.0 <= v <= 1.0:
                raise ValueError("f values must lie in [0, 1]")
        ivs = tuple(sorted(ivs))
        for (_, b0, _), (a1, _, _) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise ValueError("f intervals must be disjoint")
        for _, w in self.atom_weights:
            if not 0.0 <= w <= 1.0:
                raise ValueError("atom weights must lie in [0, 1]")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "atom_weights",
                           tuple((float(x), float(w)) for x, w in self.atom_weights))

    def breakpoints(self) -> list[float]:
        out = []
        for a, b, _ in self.intervals:
            out.extend((a, b))
        return out

    def value_at(self, x: float) -> float:
        for a, b, v in self.intervals:
            if a < x < b:
                return v
        return 0.0

    def atom_weight(self, x: float, tol: float = 1e-9) -> float:
        for pos, w in self.atom_weights:
            if abs(pos - x) <= tol:
                return w
        return 0.0

    def to_dict(self) -> dict:
        return {"intervals": [[a, b, v] for a, b, v in self.intervals],
                "atoms": [[x, w] for x, w in self.atom_weights]}

    @classmethod
    def from_dict(cls, data: dict) -> "FSelector":
        return cls(tuple((a, b, v) for a, b, v in data.get("intervals", [])),
                   tuple((x, w) for x, w in data.get("atoms", [])))


def atom_positions_and_masses(xi: StepFunction) -> list[tuple[float, float]]:
    """Poles of H on (-R, R): breakpoints where xi jumps 0 -> 1, with the
    residue mass in closed form."""
    c = xi.log_coefficients
    bk = np.asarray(xi.breakpoints)
    out = []
    vals = xi.values
    for j in range(1, len(bk) - 1):
        if vals[j - 1] == 0.0 and vals[j] == 1.0:
            mask = np.ones(len(bk), dtype=bool)
            mask[j] = False
            mass = (bk[j] + xi.bound) * np.prod(np.abs(bk[j] - bk[mask]) ** c[mask])
            out.append((float(bk[j]), float(mass)))
    return out


def stieltjes_invert(rep: HerglotzRep) -> SpectralMeasure:
    """The measure of H: density |H(t)| sin(pi xi)/pi wherever 0 < xi < 1,
    atoms at the full 0 -> 1 up-jumps.

    Up-jumps bigger than 1 cannot occur for values in [0, 1]; any piece
    pattern that would make the density non-integrable is rejected.
    """
    xi = rep.xi
    pieces = []
    vals = (0.0,) + xi.values + (0.0,)
    for i, (lo, hi, v) in enumerate(xi.pieces()):
        if 0.0 < v < 1.0:
            # edge exponents c = v_left - v_right must stay > -1 for an
            # integrable density; guaranteed for values in [0, 1]
            if vals[i] - v <= -1.0 or vals[i + 2] - v <= -1.0:
                raise NumericError("non-integrable density edge (jump past 1)")
            pieces.append(AcPiece(lo, hi, 1.0))
    return SpectralMeasure(rep, tuple(pieces), tuple(atom_positions_and_masses(xi)))


def half_line_measure(rho: SpectralMeasure, k_set: CompactSet,
                      f: FSelector | None = None) -> SpectralMeasure:
    """nu_+ = (1/2) chi_K rho_ac + f * (rho off K).

    ac pieces on K are halved; off-K pieces are scaled by the local f value
    (dropped where f = 0); atoms get their f weight.  Requires rho's xi to
    equal 1/2 on K, f supported off the interior of K, and no atom at a
    band edge.
    """
    f = f or FSelector()
    if rho.rep is None:
        raise ValueError("half_line_measure needs a measure with a representation")
    xi = rho.rep.xi
    for c, d in k_set.intervals:
        for x0, x1, v in xi.pieces():
            if min(x1, d) > max(x0, c) and v != 0.5:
                raise ValueError("rho must come from a Krein function equal to 1/2 on K")
    for a, b, _ in f.intervals:
        for c, d in k_set.intervals:
            if min(b, d) > max(a, c):
                raise ValueError("f may not be specified on the interior of K")
    band_edges = [e for c, d in k_set.intervals for e in (c, d)]
    cuts = sorted(set(band_edges) | set(f.breakpoints()))
    out_pieces = []
    for piece in rho.ac_pieces:
        grid = [piece.lo] + [x for x in cuts if piece.lo < x < piece.hi] + [piece.hi]
        for lo, hi in zip(grid, grid[1:]):
            mid = 0.5 * (lo + hi)
            scale = 0.5 if k_set.contains_interior(mid) else f.value_at(mid)
            if scale > 0.0:
                out_pieces.append(AcPiece(lo, hi, piece.multiplier * scale))
    out_atoms = []
    for pos, mass in rho.atoms:
        if any(pos == c or pos == d for c, d in k_set.intervals):
            raise ValueError(f"atom at the band edge {pos} is degenerate")
        if k_set.contains_interior(pos):
            raise ValueError(f"atom at {pos} inside K cannot occur for xi = 1/2 on K")
        w = f.atom_weight(pos)
        if w > 0.0:
            out_atoms.append((pos, w * mass))
    return SpectralMeasure(rho.rep, tuple(out_pieces), tuple(out_atoms))


def _integrate_pieces(measure: SpectralMeasure, funcs: Callable[[np.ndarray], np.ndarray],
                      n_funcs: int, tol: float = 1e-12, n_start: int = 64,
                      n_max: int = 8192) -> np.ndarray:
    """integral of each component of funcs(t) against the ac part, adaptive
    Gauss-Legendre after the arcsine substitution per piece."""
    totals = np.zeros(n_funcs)
    for piece in measure.ac_pieces:
        mid, half = 0.5 * (piece.lo + piece.hi), 0.5 * (piece.hi - piece.lo)
        prev = None
        n = n_start
        while True:
            th, w = _gl_rule(n)
            t = mid + half * np.sin(th)
            jac = half * np.cos(th)
            dens = measure.density_on_arc(piece, th)
            vals = funcs(t) * (w * jac * dens)
            cur = vals.reshape(n_funcs, -1).sum(axis=1)
            if prev is not None:
                err = np.max(np.abs(cur - prev))
                scale = max(1.0, np.max(np.abs(cur)))
                if err <= tol * scale:
                    break
            if n >= n_max:
                raise NumericError(
                    f"quadrature on ({piece.lo}, {piece.hi}) did not reach tol={tol} with {n} nodes")
            prev = cur
            n *= 2
        totals += cur
    return totals


def total_mass(measure: SpectralMeasure, tol: float = 1e-12) -> float:
    """Atoms summed exactly; ac mass by the adaptive edge-substituted
    quadrature (estimated error below tol)."""
    ac = _integrate_pieces(measure, lambda t: np.ones((1, len(t))), 1, tol=tol)[0] \
        if measure.ac_pieces else 0.0
    return float(ac + sum(m for _, m in measure.atoms))


def moments(measure: SpectralMeasure, k_max: int, tol: float = 1e-12) -> np.ndarray:
    """m_k = integral t^k dm for k = 0..k_max."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    powers = np.arange(k_max + 1)

    def f(t):
        return t[None, :] ** powers[:, None]

    out = _integrate_pieces(measure, f, k_max + 1, tol=tol) if measure.ac_pieces \
        else np.zeros(k_max + 1)
    for x, m in measure.atoms:
        out += m * np.asarray([x ** k for k in powers], dtype=float)
    return out


def quadrature_discretize(measure: SpectralMeasure, points_per_piece: int) -> SpectralMeasure:
    """Replace each ac piece by its mapped Gauss rule (node t_i, weight
    = GL weight x jacobian x density); atoms pass through unchanged.
    Spectral accuracy of the rule preserves the total mass and low moments."""
    if points_per_piece < 1:
        raise ValueError("points_per_piece must be >= 1")
    if measure.is_atomic():
        return measure
    th, w = _gl_rule(points_per_piece)
    new_atoms = list(measure.atoms)
    for piece in measure.ac_pieces:
        mid, half = 0.5 * (piece.lo + piece.hi), 0.5 * (piece.hi - piece.lo)
        t = mid + half * np.sin(th)
        wt = w * half * np.cos(th) * measure.density_on_arc(piece, th)
        new_atoms.extend(zip(t.tolist(), wt.tolist()))
    new_atoms.sort()
    return SpectralMeasure(None, (), tuple(new_atoms))


def nodes_weights_csv(measure: SpectralMeasure) -> str:
    """CSV text of (node, weight) rows for an atoms-only measure."""
    if not measure.is_atomic():
        raise ValueError("discretize the measure first")
    lines = ["node,weight"]
    lines += [f"{x!r},{m!r}" for x, m in measure.atoms]
    return "\n".join(lines) + "\n"
