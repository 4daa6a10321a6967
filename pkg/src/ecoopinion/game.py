"""Symmetric 2x2 games: payoff matrices, environment interpolation, expected
payoffs, and Nash-structure classification.

Everything is written from the row player's point of view; the opponent in a
symmetric game plays the transposed matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

NASH_TOL = 1e-12
WEIGHT_TOL = 1e-12


def _lerp(p: float, q: float, w: float) -> float:
    # Exact at w=0, w=1 and whenever p == q; plain convex combination otherwise.
    if p == q:
        return p
    return w * q + (1.0 - w) * p


@dataclass(frozen=True)
class Payoff2x2:
    """Row player's payoff matrix; aij is the payoff of pure strategy i
    against an opponent playing pure strategy j."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"payoff entry {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def entries(self) -> tuple[float, float, float, float]:
        """Row-major (a11, a12, a21, a22)."""
        return (self.a11, self.a12, self.a21, self.a22)


@dataclass(frozen=True)
class GamePair:
    """Environment-conditioned game: a0 applies when the environment is
    depleted, a1 when it is replenished."""

    a0: Payoff2x2
    a1: Payoff2x2


def interpolate(pair: GamePair, w: float) -> Payoff2x2:
    """Entrywise convex combination w*a1 + (1-w)*a0.

    w outside [0, 1] by more than WEIGHT_TOL is rejected: it means the caller's
    state escaped the unit cube.
    """
    if not math.isfinite(w) or w < -WEIGHT_TOL or w > 1.0 + WEIGHT_TOL:
        raise ValueError(f"interpolation weight {w!r} outside [0, 1]")
    if w < 0.0:
        w = 0.0
    elif w > 1.0:
        w = 1.0
    p, q = pair.a0, pair.a1
    return Payoff2x2(
        _lerp(p.a11, q.a11, w),
        _lerp(p.a12, q.a12, w),
        _lerp(p.a21, q.a21, w),
        _lerp(p.a22, q.a22, w),
    )


def _check_share(x: float) -> None:
    if not math.isfinite(x) or x < -WEIGHT_TOL or x > 1.0 + WEIGHT_TOL:
        raise ValueError(f"population share {x!r} outside [0, 1]")


def expected_payoff(a: Payoff2x2, i: int, x: float) -> float:
    """Payoff of pure strategy i against a random opponent drawn from a
    population playing strategy 1 with probability x."""
    _check_share(x)
    if i == 1:
        return a.a11 * x + a.a12 * (1.0 - x)
    if i == 2:
        return a.a21 * x + a.a22 * (1.0 - x)
    raise ValueError(f"strategy index must be 1 or 2, got {i!r}")


def average_payoff(a: Payoff2x2, x: float) -> float:
    """Population-average payoff at strategy-1 share x."""
    return x * expected_payoff(a, 1, x) + (1.0 - x) * expected_payoff(a, 2, x)


def hawk_dove_matrix(v: float, c: float) -> Payoff2x2:
    """Contest game over a resource worth v with fight cost c.

    Requires 0 < v < c, which places the interior mixed equilibrium at hawk
    share v/c.
    """
    if not (math.isfinite(v) and math.isfinite(c) and 0.0 < v < c):
        raise ValueError(f"hawk-dove game needs 0 < v < c, got v={v!r}, c={c!r}")
    return Payoff2x2((v - c) / 2.0, v, 0.0, v / 2.0)


def hawk_dove_pair(v0: float, c0: float, v1: float, c1: float) -> GamePair:
    """Hawk-dove games for the depleted (v0, c0) and replenished (v1, c1)
    environment."""
    return GamePair(hawk_dove_matrix(v0, c0), hawk_dove_matrix(v1, c1))


@dataclass(frozen=True)
class EquilibriumReport:
    """Nash profiles of the symmetric two-player game (A, A^T).

    pure_symmetric lists strategies i for which (i, i) is an equilibrium;
    pure_asymmetric lists ordered profiles (i, j) with i != j; mixed_interior
    is the strategy-1 share of the interior symmetric equilibrium when one
    exists. degenerate marks the fully tied matrix (both rows identical
    columnwise), where every profile is trivially indifferent and no
    classification is reported.
    """

    pure_symmetric: tuple[int, ...]
    pure_asymmetric: tuple[tuple[int, int], ...]
    mixed_interior: float | None
    degenerate: bool = False


def classify_2x2(a: Payoff2x2, tol: float = NASH_TOL) -> EquilibriumReport:
    """Classify the Nash equilibria of the symmetric game (A, A^T).

    Best-response checks are non-strict with slack tol. The interior mixed
    equilibrium is computed from the indifference condition and reported only
    when the denominator is safely nonzero, the share lies strictly inside
    (0, 1), and payoff equalization actually holds at it.
    """
    if abs(a.a11 - a.a21) <= tol and abs(a.a12 - a.a22) <= tol:
        return EquilibriumReport((), (), None, degenerate=True)

    sym = []
    if a.a11 >= a.a21 - tol:
        sym.append(1)
    if a.a22 >= a.a12 - tol:
        sym.append(2)

    asym = []
    if a.a12 >= a.a22 - tol and a.a21 >= a.a11 - tol:
        asym.extend([(1, 2), (2, 1)])

    mixed = None
    den = a.a11 - a.a12 - a.a21 + a.a22
    if abs(den) >= tol:
        xs = (a.a22 - a.a12) / den
        if 0.0 < xs < 1.0:
            gap = expected_payoff(a, 1, xs) - expected_payoff(a, 2, xs)
            if abs(gap) <= tol:
                mixed = xs

    return EquilibriumReport(tuple(sym), tuple(asym), mixed)


def check_pd_conditions(pair: GamePair) -> bool:
    """True when strategy 1 strictly dominates in the depleted game while
    strategy 2 strictly dominates in the replenished game."""
    a0, a1 = pair.a0, pair.a1
    return (
        a0.a11 > a0.a21
        and a0.a12 > a0.a22
        and a1.a11 < a1.a21
        and a1.a12 < a1.a22
    )
