r"""Whole-line and half-line Jacobi operators.

A Jacobi matrix acts on ell^2(Z) by (Ju)_n = a_n u_{n+1} + a_{n-1} u_{n-1}
+ b_n u_n with a_n > 0.  Coefficients are stored as an explicit window plus
a tail descriptor (free, constant, or periodic), which makes diagonal Green
functions computable two independent ways:

* a finite truncation sized by a Combes-Thomas decay estimate, and
* the Weyl m-function recursion m_k = 1/(b_k - z - a_k^2 m_{k+1}) closed at
  the tails by the attracting fixed point of the one-period Moebius map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import solve_banded

from .errors import NumericError
from .sets import CompactSet

__all__ = [
    "Tail",
    "JacobiCoefficients",
    "HalfLineRestriction",
    "shift",
    "coefficient_metric",
    "green_diag",
    "reflectionless_residual",
]


@dataclass(frozen=True)
class Tail:
    """Coefficient values outside the explicit window.

    kind "free": a = 1, b = 0.  kind "constant": a = a_const, b = b_const.
    kind "periodic": blocks tile outward from the window edges (to the right
    the block starts right after the window, to the left it ends right
    before it).
    """

    kind: Literal["free", "constant", "periodic"]
    a_const: float = 1.0
    b_const: float = 0.0
    a_block: tuple[float, ...] = ()
    b_block: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "constant":
            if not self.a_const > 0:
                raise ValueError("constant tail needs a > 0")
        elif self.kind == "periodic":
            if len(self.a_block) != len(self.b_block) or not self.a_block:
                raise ValueError("periodic tail needs equal-length nonempty blocks")
            if any(a <= 0 for a in self.a_block):
                raise ValueError("periodic tail needs a > 0")
        elif self.kind != "free":
            raise ValueError(f"unknown tail kind {self.kind!r}")

    @classmethod
    def free(cls) -> "Tail":
        return cls("free")

    @classmethod
    def constant(cls, a: float, b: float) -> "Tail":
        return cls("constant", a_const=float(a), b_const=float(b))

    @classmethod
    def periodic(cls, a_block, b_block) -> "Tail":
        return cls("periodic", a_block=tuple(float(a) for a in a_block),
                   b_block=tuple(float(b) for b in b_block))

    @property
    def period(self) -> int:
        return len(self.a_block) if self.kind == "periodic" else 1

    def right_values(self, offset: int) -> tuple[float, float]:
        """(a, b) at `offset` >= 0 sites past the right window edge."""
        if self.kind == "free":
            return 1.0, 0.0
        if self.kind == "constant":
            return self.a_const, self.b_const
        i = offset % len(self.a_block)
        return self.a_block[i], self.b_block[i]

    def left_values(self, offset: int) -> tuple[float, float]:
        """(a, b) at `offset` >= 1 sites before the left window edge."""
        if self.kind == "free":
            return 1.0, 0.0
        if self.kind == "constant":
            return self.a_const, self.b_const
        i = (-offset) % len(self.a_block)
        return self.a_block[i], self.b_block[i]

    def to_dict(self) -> dict:
        if self.kind == "free":
            return {"kind": "free"}
        if self.kind == "constant":
            return {"kind": "constant", "a": self.a_const, "b": self.b_const}
        return {"kind": "periodic", "a": list(self.a_block), "b": list(self.b_block)}

    @classmethod
    def from_dict(cls, data: dict) -> "Tail":
        kind = data["kind"]
        if kind == "free":
            return cls.free()
        if kind == "constant":
            return cls.constant(data["a"], data["b"])
        return cls.periodic(data["a"], data["b"])


@dataclass(frozen=True)
class JacobiCoefficients:
    """Bounded two-sided coefficient sequences (a_n > 0, b_n real): explicit
    values on the window [n_lo, n_hi], a tail descriptor outside."""

    n_lo: int
    n_hi: int
    a_window: tuple[float, ...]
    b_window: tuple[float, ...]
    tail: Tail = field(default_factory=Tail.free)

    def __post_init__(self):
        if self.n_lo > self.n_hi:
            raise ValueError("window indices require n_lo <= n_hi")
        w = self.n_hi - self.n_lo + 1
        if len(self.a_window) != w or len(self.b_window) != w:
            raise ValueError("window arrays must match window size")
        if any(a <= 0 for a in self.a_window):
            raise ValueError("all a_n must be positive")
        object.__setattr__(self, "a_window", tuple(float(x) for x in self.a_window))
        object.__setattr__(self, "b_window", tuple(float(x) for x in self.b_window))

    # -- factories ---------------------------------------------------------
    @classmethod
    def free(cls, n_lo: int = 0, n_hi: int = 0) -> "JacobiCoefficients":
        w = n_hi - n_lo + 1
        return cls(n_lo, n_hi, (1.0,) * w, (0.0,) * w, Tail.free())

    @classmethod
    def constant(cls, a: float, b: float, n_lo: int = 0, n_hi: int = 0) -> "JacobiCoefficients":
        w = n_hi - n_lo + 1
        return cls(n_lo, n_hi, (float(a),) * w, (float(b),) * w, Tail.constant(a, b))

    @classmethod
    def periodic(cls, a_block, b_block, n_lo: int = 0) -> "JacobiCoefficients":
        """Globally periodic operator whose window holds one block starting
        at n_lo."""
        tail = Tail.periodic(a_block, b_block)
        p = tail.period
        return cls(n_lo, n_lo + p - 1, tail.a_block, tail.b_block, tail)

    @classmethod
    def from_overrides(cls, a_overrides: dict[int, float] | None = None,
                       b_overrides: dict[int, float] | None = None,
                       tail: Tail | None = None) -> "JacobiCoefficients":
        """Tail values everywhere except finitely many overridden sites."""
        a_overrides = a_overrides or {}
        b_overrides = b_overrides or {}
        tail = tail or Tail.free()
        if tail.kind == "periodic":
            raise ValueError("from_overrides supports free/constant tails; "
                             "use JacobiCoefficients.periodic instead")
        keys = list(a_overrides) + list(b_overrides)
        n_lo, n_hi = (min(keys), max(keys)) if keys else (0, 0)
        a, b = [], []
        for n in range(n_lo, n_hi + 1):
            ta, tb = tail.right_values(0)
            a.append(a_overrides.get(n, ta))
            b.append(b_overrides.get(n, tb))
        return cls(n_lo, n_hi, tuple(a), tuple(b), tail)

    # -- accessors ----------------------------------------------------------
    def a(self, n: int) -> float:
        if self.n_lo <= n <= self.n_hi:
            return self.a_window[n - self.n_lo]
        if n > self.n_hi:
            return self.tail.right_values(n - self.n_hi - 1)[0]
        return self.tail.left_values(self.n_lo - n)[0]

    def b(self, n: int) -> float:
        if self.n_lo <= n <= self.n_hi:
            return self.b_window[n - self.n_lo]
        if n > self.n_hi:
            return self.tail.right_values(n - self.n_hi - 1)[1]
        return self.tail.left_values(self.n_lo - n)[1]

    def arrays(self, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
        """(a, b) on lo..hi inclusive."""
        rng = range(lo, hi + 1)
        return (np.array([self.a(n) for n in rng]),
                np.array([self.b(n) for n in rng]))

    def sup_bounds(self) -> tuple[float, float]:
        """(sup |a_n|, sup |b_n|), exact from window plus tail values."""
        a_vals = list(self.a_window)
        b_vals = [abs(x) for x in self.b_window]
        if self.tail.kind == "free":
            a_vals.append(1.0)
            b_vals.append(0.0)
        elif self.tail.kind == "constant":
            a_vals.append(self.tail.a_const)
            b_vals.append(abs(self.tail.b_const))
        else:
            a_vals.extend(self.tail.a_block)
            b_vals.extend(abs(x) for x in self.tail.b_block)
        return max(a_vals), max(b_vals)

    def restrict(self, lo: int, hi: int) -> "JacobiCoefficients":
        """Explicit window narrowed/extended to lo..hi (values from
        accessors), same tail."""
        a, b = self.arrays(lo, hi)
        return JacobiCoefficients(lo, hi, tuple(a), tuple(b), self.tail)

    def to_dict(self) -> dict:
        return {"n_lo": self.n_lo, "n_hi": self.n_hi,
                "a": list(self.a_window), "b": list(self.b_window),
                "tail": self.tail.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "JacobiCoefficients":
        return cls(int(data["n_lo"]), int(data["n_hi"]),
                   tuple(data["a"]), tuple(data["b"]),
                   Tail.from_dict(data["tail"]))


@dataclass(frozen=True)
class HalfLineRestriction:
    """The operator restricted to sites n >= start (Dirichlet cut)."""

    base: JacobiCoefficients
    start: int = 0

    def a(self, n: int) -> float:
        if n < self.start:
            raise ValueError("site below the half-line start")
        return self.base.a(n)

    def b(self, n: int) -> float:
        if n < self.start:
            raise ValueError("site below the half-line start")
        return self.base.b(n)


def shift(j: JacobiCoefficients, k: int) -> JacobiCoefficients:
    """The shifted operator S^k J with coefficients a'_n = a_{n+k},
    b'_n = b_{n+k}."""
    return JacobiCoefficients(j.n_lo - k, j.n_hi - k, j.a_window, j.b_window, j.tail)


def _tails_equal_beyond(j1: JacobiCoefficients, j2: JacobiCoefficients,
                        lo: int, hi: int) -> bool:
    """True if a/b of both operators agree at every site outside [lo, hi].
    Checked on one common period beyond each edge; both tails are eventually
    periodic so agreement there propagates."""
    p = int(np.lcm(j1.tail.period, j2.tail.period))
    for n in range(hi + 1, hi + 1 + p):
        if j1.a(n) != j2.a(n) or j1.b(n) != j2.b(n):
            return False
    for n in range(lo - p, lo):
        if j1.a(n) != j2.a(n) or j1.b(n) != j2.b(n):
            return False
    return True


def coefficient_metric(j1: JacobiCoefficients, j2: JacobiCoefficients,
                       tol: float = 1e-12, max_terms: int = 100_000) -> float:
    """d(J, J') = sum_n 2^{-|n|} (|a_n - a'_n| + |b_n - b'_n|).

    When the two operators agree site-by-site beyond the union of their
    windows the sum is finite and exact; otherwise it is truncated at an
    index M with remainder <= (sup-sum of coefficient bounds) * 2^{1-M},
    chosen so the truncation error is below `tol`.
    """
    lo = min(j1.n_lo, j2.n_lo)
    hi = max(j1.n_hi, j2.n_hi)
    if _tails_equal_beyond(j1, j2, lo, hi):
        span = range(lo, hi + 1)
    else:
        sup = sum(j1.sup_bounds()) + sum(j2.sup_bounds())
        if tol <= 0:
            raise ValueError("tol must be positive")
        m = max(abs(lo), abs(hi), math.ceil(math.log2(max(2.0 * sup / tol, 2.0))) + 1)
        if 2 * m + 1 > max_terms:
            raise NumericError(
                f"metric needs {2 * m + 1} terms for tol={tol}, over the cap {max_terms}")
        span = range(-m, m + 1)
    total = 0.0
    for n in span:
        d = abs(j1.a(n) - j2.a(n)) + abs(j1.b(n) - j2.b(n))
        if d:
            total += 2.0 ** (-abs(n)) * d
    return total


# ---------------------------------------------------------------------------
# Green functions
# ---------------------------------------------------------------------------

def _attracting_fixed_point(m00: complex, m01: complex, m10: complex,
                            m11: complex) -> complex:
    """Attracting fixed point of the Moebius map w -> (m00 w + m01)/(m10 w + m11).

    For Im z > 0 the one-period transfer map of the Weyl recursion contracts
    the upper half plane, so its attracting fixed point is the half-line
    m-function.
    """
    if m10 == 0:
        if m00 == m11:
            raise NumericError("degenerate tail closure (parabolic map)")
        return m01 / (m11 - m00)
    disc = np.sqrt((m11 - m00) ** 2 + 4.0 * m01 * m10)
    r1 = ((m00 - m11) + disc) / (2.0 * m10)
    r2 = ((m00 - m11) - disc) / (2.0 * m10)
    d1, d2 = abs(m10 * r1 + m11), abs(m10 * r2 + m11)
    if abs(d1 - d2) <= 1e-13 * max(d1, d2):
        raise NumericError("tail fixed points indistinguishable (z too close to the band)")
    return r1 if d1 > d2 else r2


def _riccati_step(m_next: complex, a: float, b: float, z: complex) -> complex:
    return 1.0 / (b - z - a * a * m_next)


def _tail_m(pairs: list[tuple[float, float]], z: complex) -> complex:
    """m at the first site of an infinite half line whose (a, b) repeat the
    given one-period list toward the far end."""
    m00, m01, m10, m11 = 1.0 + 0j, 0j, 0j, 1.0 + 0j
    for a, b in pairs:
        # compose with [[0, 1], [-a^2, b - z]] on the right
        n00 = m01 * (-a * a)
        n01 = m00 + m01 * (b - z)
        n10 = m11 * (-a * a)
        n11 = m10 + m11 * (b - z)
        m00, m01, m10, m11 = n00, n01, n10, n11
    return _attracting_fixed_point(m00, m01, m10, m11)


def _m_right(j: JacobiCoefficients, k: int, z: complex) -> complex:
    """m-function of J restricted to sites >= k, evaluated at site k."""
    start = max(k, j.n_hi + 1)
    p = j.tail.period
    pairs = []
    for s in range(start, start + p):
        off = s - j.n_hi - 1
        a, b = j.tail.right_values(off)
        pairs.append((a, b))
    m = _tail_m(pairs, z)
    for s in range(start - 1, k - 1, -1):
        m = _riccati_step(m, j.a(s), j.b(s), z)
    return m


def _m_left(j: JacobiCoefficients, k: int, z: complex) -> complex:
    """m-function of J restricted to sites <= k, evaluated at site k.
    Recursion downward: m_k = 1/(b_k - z - a_{k-1}^2 m_{k-1})."""
    start = min(k, j.n_lo - 1)
    p = j.tail.period
    pairs = []
    for s in range(start, start - p, -1):
        off = j.n_lo - s
        _, b = j.tail.left_values(off)
        a_prev, _ = j.tail.left_values(off + 1)
        pairs.append((a_prev, b))
    m = _tail_m(pairs, z)
    for s in range(start + 1, k + 1):
        m = _riccati_step(m, j.a(s - 1), j.b(s), z)
    return m


def _truncation_size(j: JacobiCoefficients, z: complex, tol: float) -> int:
    """Window half-width giving resolvent-entry error below tol, from the
    Combes-Thomas bound |G(m, n)| <= (2/eta) e^{-gamma |m-n|} with
    gamma = log(1 + eta/(4 sup a))."""
    eta = z.imag
    amax, _ = j.sup_bounds()
    gamma = math.log1p(eta / (4.0 * amax))
    c = 8.0 * amax / (eta * eta)
    n = math.ceil(math.log(max(c / tol, 2.0)) / gamma) + 5
    return n


def green_diag(j: JacobiCoefficients, n: int, z: complex,
               method: str = "recursion", tol: float = 1e-10,
               size_cap: int = 10_000) -> complex:
    """Diagonal Green function g_n(z) = <delta_n, (J - z)^{-1} delta_n>,
    Im z > 0.

    method "recursion" (default): Weyl half-line recursion closed at both
    tails; exact up to roundoff for free/constant/periodic tails, stable
    down to tiny Im z.  method "truncation": resolvent entry of a finite
    section sized by the Combes-Thomas estimate for the requested `tol`
    (raises if that exceeds `size_cap`).
    """
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("green_diag requires Im z > 0")
    if method == "recursion":
        mp = _m_right(j, n + 1, z)
        mm = _m_left(j, n - 1, z)
        an, am = j.a(n), j.a(n - 1)
        return 1.0 / (j.b(n) - z - an * an * mp - am * am * mm)
    if method == "truncation":
        half = _truncation_size(j, z, tol)
        if 2 * half + 1 > size_cap:
            raise NumericError(
                f"truncation needs {2 * half + 1} sites at Im z = {z.imag}, over the cap {size_cap}")
        lo, hi = n - half, n + half
        a_arr, b_arr = j.arrays(lo, hi)
        size = hi - lo + 1
        ab = np.zeros((3, size), dtype=complex)
        ab[0, 1:] = a_arr[:-1]
        ab[1, :] = b_arr - z
        ab[2, :-1] = a_arr[:-1]
        e = np.zeros(size, dtype=complex)
        e[n - lo] = 1.0
        x = solve_banded((1, 1), ab, e)
        return complex(x[n - lo])
    raise ValueError(f"unknown method {method!r}")


def reflectionless_residual(j: JacobiCoefficients, m_set: CompactSet,
                            grid: int = 100, eta: float = 1e-6,
                            sites: range = range(-2, 3)) -> float:
    """max over interior grid points t of M and the given sites of
    |Re g_n(t + i0)|, the boundary value taken by Richardson extrapolation
    in eta.  Small residuals certify approximate membership in the
    reflectionless class on M; O(1) values certify violation."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if m_set.total_length <= 0:
        raise ValueError("M must have positive total length")
    points = m_set.interior_grid(grid)
    worst = 0.0
    for n in sites:
        for t in points:
            g1 = green_diag(j, n, complex(t, eta))
            g2 = green_diag(j, n, complex(t, eta / 2.0))
            worst = max(worst, abs((2.0 * g2 - g1).real))
    return worst
