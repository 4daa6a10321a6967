"""Fixed-point enumeration, basin-of-attraction scans along one
initial-condition axis, and basin-boundary bisection."""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import BlowupError, SystemState, make_rhs
from .game import expected_payoff, interpolate
from .integrate import simulate
from .scenario import AXES

RESIDUAL_TOL = 1e-10
LABEL_RADIUS = 1e-3
FAMILY_SAMPLES = (0.0, 0.25, 0.5, 0.75, 1.0)

_SCAN_SAMPLES = 1001
_ZERO_TOL = 1e-12
_SNAP_TOL = 1e-9


class NoBoundaryError(ValueError):
    """Both bisection endpoints resolve to the same basin."""


class UnresolvedCellError(RuntimeError):
    """A terminal state matched no known fixed point within LABEL_RADIUS."""


@dataclass(frozen=True)
class FixedPointRecord:
    """A verified stationary state.

    kind is a structural label: "corner" (all coordinates on the cube
    boundary), "replicator-interior" (only x interior),
    "environment-interior" (n interior, which requires the environment drift
    factor to vanish at this x), or "mixed" (anything else, in particular
    interior y). family="n" marks records on a line where the environment
    factor vanishes: there every n is stationary and the record's n is just a
    representative sample.
    """

    state: SystemState
    residual: float
    kind: str
    family: str | None = None


@dataclass(frozen=True)
class BasinCell:
    """Outcome of one grid cell of a basin scan."""

    initial: float
    terminal: SystemState | None
    label: str | None
    converged: bool
    unresolved: bool
    error: str | None = None


@dataclass(frozen=True)
class BasinMap:
    """Per-cell terminal labels along one initial-condition axis."""

    axis: str
    grid: tuple[float, ...]
    cells: tuple[BasinCell, ...]


def label_for(record: FixedPointRecord) -> str:
    """Human-readable basin label; the free axis of a family prints as *."""
    n_part = "*" if record.family == "n" else f"{record.state.n:.4f}"
    return f"x={record.state.x:.4f} n={n_part} y={record.state.y:.4f}"


def distance_to(record: FixedPointRecord, state: SystemState) -> float:
    """Sup-norm distance from state to the record, measured along the family
    line when the record has a free axis."""
    dx = abs(state.x - record.state.x)
    dy = abs(state.y - record.state.y)
    dn = 0.0 if record.family == "n" else abs(state.n - record.state.n)
    return max(dx, dn, dy)


def nearest_fixed_point(state: SystemState, records):
    """Nearest record and its distance; (None, inf) when records is empty."""
    best = None
    best_dist = float("inf")
    for record in records:
        dist = distance_to(record, state)
        if dist < best_dist:
            best = record
            best_dist = dist
    return best, best_dist


def _bisect_root(g, lo, hi, vlo):
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        vm = g(mid)
        if vm is None or vm == 0.0:
            return mid
        if (vm > 0.0) == (vlo > 0.0):
            lo, vlo = mid, vm
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def _scalar_roots(g, lo=0.0, hi=1.0, samples=_SCAN_SAMPLES, zero_tol=_ZERO_TOL):
    """Roots of a piecewise-smooth scalar function on [lo, hi].

    Dense scan plus bisection refinement; g may return None where undefined.
    Runs of near-zero samples collapse to their midpoint, so an identically
    vanishing stretch yields one representative root instead of a root per
    sample.
    """
    step = (hi - lo) / (samples - 1)
    pts = [lo + step * i for i in range(samples)]
    vals = [g(p) for p in pts]
    roots = []
    i = 0
    while i < samples:
        v = vals[i]
        if v is not None and abs(v) <= zero_tol:
            j = i
            while j + 1 < samples and vals[j + 1] is not None and abs(vals[j + 1]) <= zero_tol:
                j += 1
            roots.append(0.5 * (pts[i] + pts[j]))
            i = j + 1
        else:
            i += 1
    for i in range(samples - 1):
        va, vb = vals[i], vals[i + 1]
        if va is None or vb is None:
            continue
        if abs(va) <= zero_tol or abs(vb) <= zero_tol:
            continue
        if (va > 0.0) != (vb > 0.0):
            roots.append(_bisect_root(g, pts[i], pts[i + 1], va))
    return sorted(roots)


def _snap01(value: float) -> float:
    if abs(value) <= _SNAP_TOL:
        return 0.0
    if abs(value - 1.0) <= _SNAP_TOL:
        return 1.0
    return value


def find_fixed_points(scenario) -> list[FixedPointRecord]:
    """Enumerate and verify stationary points of the coupled system.

    Candidates come from the structural nulls of each line: x on a boundary
    or at the replicator-indifference root given y; n on a boundary, or
    anywhere once the environment drift factor theta*x + psi*(1-x) vanishes
    (then representative n samples are emitted and flagged family="n"); y on
    a boundary, at a scanned imitation-balance root, or at the opinion weight
    that nulls the replicator bracket. Every candidate is kept only if the
    sup norm of the full derivative is below RESIDUAL_TOL.
    """
    pair, env, trust = scenario.pair, scenario.env, scenario.trust
    f = make_rhs(pair, env, trust, scenario.protocol_matrix_mode)
    theta, psi = env.theta, env.psi

    def env_factor(x):
        return theta * x + psi * (1.0 - x)

    def x_root_given_y(y):
        # Interior solution of u1 == u2 under the opinion-interpolated game.
        m = interpolate(pair, y)
        den = m.a11 - m.a12 - m.a21 + m.a22
        if abs(den) < 1e-12:
            return None
        root = (m.a22 - m.a12) / den
        return root if 0.0 < root < 1.0 else None

    def bracket_null_y(x):
        # The replicator bracket at fixed x is affine in y; return its root,
        # "all" when it vanishes identically, None when no root lies in [0,1].
        g0 = expected_payoff(pair.a0, 1, x) - expected_payoff(pair.a0, 2, x)
        g1 = expected_payoff(pair.a1, 1, x) - expected_payoff(pair.a1, 2, x)
        den = g0 - g1
        if abs(den) < 1e-14:
            return "all" if abs(g0) <= 1e-12 else None
        root = g0 / den
        if -1e-12 <= root <= 1.0 + 1e-12:
            return min(1.0, max(0.0, root))
        return None

    candidates: list[tuple[float, float, float]] = []

    # Boundary x: scan the opinion line at each (x, n); when the environment
    # factor vanishes here (psi == 0 at x = 0), n is free and gets sampled.
    for x in (0.0, 1.0):
        n_values = FAMILY_SAMPLES if abs(env_factor(x)) <= _ZERO_TOL else (0.0, 1.0)
        for n in n_values:
            roots = _scalar_roots(lambda yy: f(x, n, yy)[2])
            for y in sorted({0.0, 1.0} | set(roots)):
                candidates.append((x, n, y))

    # Interior x through the replicator null, boundary n.
    for n in (0.0, 1.0):
        def h(yy, n=n):
            xr = x_root_given_y(yy)
            return None if xr is None else f(xr, n, yy)[2]

        roots = _scalar_roots(h)
        for y in sorted({0.0, 1.0} | set(roots)):
            xr = x_root_given_y(y)
            if xr is not None:
                candidates.append((xr, n, y))

    # Environment-null line: interior x where the drift factor vanishes makes
    # n a free parameter; the replicator bracket then pins y.
    if theta != psi:
        x_env = -psi / (theta - psi)
        if 0.0 < x_env < 1.0:
            null = bracket_null_y(x_env)
            if null == "all":
                y_values = list(FAMILY_SAMPLES)
            elif null is None:
                y_values = []
            else:
                y_values = [null]
            for n in FAMILY_SAMPLES:
                for y in y_values:
                    candidates.append((x_env, n, y))

    records = []
    kept: list[tuple[float, float, float]] = []
    for cx, cn, cy in candidates:
        cx, cn, cy = _snap01(cx), _snap01(cn), _snap01(cy)
        if any(max(abs(cx - px), abs(cn - pn), abs(cy - py)) < _SNAP_TOL
               for px, pn, py in kept):
            continue
        d = f(cx, cn, cy)
        residual = max(abs(d[0]), abs(d[1]), abs(d[2]))
        if residual >= RESIDUAL_TOL:
            continue
        kept.append((cx, cn, cy))
        family = "n" if abs(env_factor(cx)) <= _ZERO_TOL else None
        interior_x = 0.0 < cx < 1.0
        interior_n = 0.0 < cn < 1.0
        interior_y = 0.0 < cy < 1.0
        if not (interior_x or interior_n or interior_y):
            kind = "corner"
        elif interior_x and not interior_n and not interior_y:
            kind = "replicator-interior"
        elif interior_n and not interior_y:
            kind = "environment-interior"
        else:
            kind = "mixed"
        records.append(FixedPointRecord(SystemState(cx, cn, cy), residual, kind, family))

    records.sort(key=lambda r: (r.state.x, r.state.n, r.state.y))
    return records


def _check_axis(axis: str) -> None:
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")


def basin_scan(scenario, axis: str, grid, fixed_points=None) -> BasinMap:
    """Run one simulation per grid value of the chosen initial-condition axis
    and label each terminal state by its nearest fixed point.

    Cells whose terminal lies further than LABEL_RADIUS from every known
    fixed point are flagged unresolved; per-cell simulation failures are
    recorded in the cell without aborting the scan. Cells are independent, so
    the scan could run them in parallel; assembly always follows grid order.
    """
    _check_axis(axis)
    grid = tuple(float(g) for g in grid)
    for g in grid:
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"grid value {g!r} outside [0, 1]")
    records = list(fixed_points) if fixed_points is not None else find_fixed_points(scenario)

    cells = []
    for g in grid:
        try:
            trajectory = simulate(scenario.with_initial(axis, g))
        except BlowupError as err:
            cells.append(BasinCell(g, None, None, False, True, str(err)))
            continue
        record, dist = nearest_fixed_point(trajectory.terminal, records)
        if record is not None and dist <= LABEL_RADIUS:
            cells.append(BasinCell(g, trajectory.terminal, label_for(record),
                                   trajectory.converged, False))
        else:
            cells.append(BasinCell(g, trajectory.terminal, None,
                                   trajectory.converged, True))
    return BasinMap(axis, grid, tuple(cells))


def threshold_bisect(scenario, axis: str, lo: float, hi: float, max_iters: int = 60,
                     fixed_points=None, target_width: float = 1e-4) -> float:
    """Bisect one initial-condition axis for the boundary between two basins.

    The endpoints must resolve to different basin labels. Bisection runs
    until the bracket is narrower than target_width or max_iters is
    exhausted, and returns the midpoint of the final bracket. An endpoint or
    midpoint that resolves to no fixed point raises UnresolvedCellError;
    simulation failures propagate.
    """
    _check_axis(axis)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got lo={lo!r}, hi={hi!r}")
    records = list(fixed_points) if fixed_points is not None else find_fixed_points(scenario)

    def label_at(value):
        trajectory = simulate(scenario.with_initial(axis, value))
        record, dist = nearest_fixed_point(trajectory.terminal, records)
        if record is None or dist > LABEL_RADIUS:
            raise UnresolvedCellError(
                f"terminal state at {axis}={value:g} matches no known fixed point "
                f"(nearest distance {dist:.3g})"
            )
        return label_for(record)

    lo_label = label_at(lo)
    hi_label = label_at(hi)
    if lo_label == hi_label:
        raise NoBoundaryError(
            f"both endpoints of [{lo:g}, {hi:g}] resolve to {lo_label!r}; no boundary to bisect"
        )
    iters = 0
    while hi - lo >= target_width and iters < max_iters:
        mid = 0.5 * (lo + hi)
        mid_label = label_at(mid)
        if mid_label == lo_label:
            lo = mid
        else:
            # Covers both the hi label and any third basin appearing in the
            # middle; either way a boundary stays inside [lo, mid].
            hi = mid
            hi_label = mid_label
        iters += 1
    return 0.5 * (lo + hi)
