"""Counting formulas and Shannon-function bounds for circuits over NOT, CNOT, 2-CNOT."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .synth import phi_value


def gate_alphabet_size(w: int) -> int:
    """Number of distinct NOT, CNOT and 2-CNOT gates on ``w`` lines: (w^3 - w^2 + 2w) / 2."""
    if w < 1:
        raise ValueError("w must be at least 1")
    return (w**3 - w**2 + 2 * w) // 2


def circuit_count_upto(w: int, s: int) -> int:
    """Exact number of gate sequences of length at most ``s`` on ``w`` lines."""
    if s < 0:
        raise ValueError("s must be non-negative")
    r = gate_alphabet_size(w)
    if r == 1:
        return s + 1
    return (r ** (s + 1) - 1) // (r - 1)


def census_upper_bound(w: int, s: int) -> Fraction:
    """(w^3/2)^s * (1 + 1/(w-1)), which dominates ``circuit_count_upto`` for w >= 2."""
    if w < 2:
        raise ValueError("w must be at least 2")
    return Fraction(w**3, 2) ** s * (1 + Fraction(1, w - 1))


def log2_placements(n: int, q: int) -> float:
    """log2 of the number of ordered choices of n output lines among n + q."""
    return (math.lgamma(n + q + 1) - math.lgamma(q + 1)) / math.log(2)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    q: int
    r: int
    L_lower: float
    D_lower: float
    D0_lower: float | None
    placements_log2: float
    upper_D_3n: float
    upper_q_3n: float
    upper_D_2n: float
    upper_q_2n: float
    phi: float
    in_domain: bool
    clamped: bool

    @property
    def width(self) -> int:
        return self.n + self.q

    def log2_census(self, s: int) -> float:
        """log2 of the number of circuits of complexity at most ``s`` on n + q lines."""
        return math.log2(circuit_count_upto(self.width, s))


def shannon_lower_bounds(n: int, q: int = 0, phi: str | float = "log2") -> BoundsReport:
    """Lower bounds on worst-case complexity and depth with ``q`` ancillae.

    Negative values are clamped to 0 with ``clamped`` set. Rows with
    n + q < 3 are evaluated but flagged ``in_domain=False``. ``D0_lower`` is
    the asymptotic ancilla-free depth indicator 2^n / (3 log2 n), not a
    certified bound at finite n.
    """
    if n < 1 or q < 0:
        raise ValueError(f"bounds need n >= 1 and q >= 0, got n={n}, q={q}")
    w = n + q
    lg = math.log2(w)
    if lg > 0:
        raw = (2.0**n * (n - 2) - n * lg) / (3 * lg)
    else:
        raw = 0.0
    L_lower = max(raw, 0.0)
    D_lower = L_lower / w
    D0 = 2.0**n / (3 * math.log2(n)) if n >= 2 else None
    phi_v = phi_value(max(n, 2), phi)
    return BoundsReport(
        n=n,
        q=q,
        r=gate_alphabet_size(w),
        L_lower=L_lower,
        D_lower=D_lower,
        D0_lower=D0,
        placements_log2=log2_placements(n, q),
        upper_D_3n=3.0 * n,
        upper_q_3n=2.0**n,
        upper_D_2n=2.0 * n,
        upper_q_2n=phi_v * 2.0**n,
        phi=phi_v,
        in_domain=w >= 3,
        clamped=raw < 0 or lg <= 0,
    )
