"""Grid models of continuous functions on (0,1) and the unit disc.

Compact exhaustions carry the sup seminorms; homeomorphism constructors
build exhaustion-preserving maps (monotone rearrangements on the
interval, radial twists on the disc); the analysis entry points test
operators for isometry, recover the weight and point map of a surjective
isometry, and check the decomposition bound that survives in the
nonsurjective case.

Grid surrogates replace the continuum notions: surjectivity means every
target node lies within one grid cell of the image, injectivity means no
two nodes more than two cells apart land within half a cell of each
other, and every comparison carries an interpolation budget derived from
finite-difference Lipschitz estimates of the probes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "Exhaustion1D",
    "ExhaustionDisc",
    "IntervalGrid",
    "DiscGrid",
    "GridFunction",
    "PiecewiseLinearMap",
    "PiecewiseLinearHomeo",
    "AnnulusHomeo",
    "NotWeightedComposition",
    "sup_seminorm_grid",
    "weighted_composition_grid",
    "make_composition_operator",
    "interpolation_budget",
    "isometry_test_grid",
    "GridIsometryReport",
    "recover_weight_and_map",
    "recover_h_phi",
    "RecoveredSymbol",
    "decomposition_bound_check",
    "DecompositionReport",
    "build_interval_homeo",
    "random_interval_homeo",
    "build_zigzag_fold",
    "build_annulus_homeo",
    "random_annulus_homeo",
    "random_probe",
    "unimodular_field",
]


class NotWeightedComposition(RuntimeError):
    """Recovery refused: the operator fails the named certificate check."""

    def __init__(self, check: str, details: str = "", certificate: dict | None = None):
        super().__init__(
            f"not a weighted composition at grid scale: {check}"
            + (f" ({details})" if details else "")
        )
        self.check = check
        self.details = details
        self.certificate = dict(certificate or {})


# ---------------------------------------------------------------------------
# exhaustions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exhaustion1D:
    """Nested closed intervals [a_n, b_n] inside (0,1).

    a_n strictly decreases and b_n strictly increases with the level, so
    the intervals nest upward; the innermost may be a single point.
    """

    intervals: tuple

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        if not iv:
            raise ValueError("need at least one interval")
        a0, b0 = iv[0]
        if not 0 < a0 <= b0 < 1:
            raise ValueError("innermost interval must satisfy 0 < a <= b < 1")
        for (ap, bp), (an, bn) in zip(iv, iv[1:]):
            if not (0 < an < ap and bp < bn < 1):
                raise ValueError("intervals must nest strictly and stay inside (0,1)")
        object.__setattr__(self, "intervals", iv)

    @classmethod
    def default(cls, levels: int = 3):
        return cls(tuple((1.0 / (n + 5), 1.0 - 1.0 / (n + 5)) for n in range(levels)))

    @property
    def levels(self) -> int:
        return len(self.intervals)

    @property
    def outer(self):
        return self.intervals[-1]

    def breakpoints(self):
        """All endpoints, ascending, duplicates removed (degenerate core)."""
        pts = sorted({x for ab in self.intervals for x in ab})
        return np.array(pts)


@dataclass(frozen=True)
class ExhaustionDisc:
    """Closed discs of strictly increasing radii inside the unit disc."""

    radii: tuple

    def __post_init__(self):
        r = tuple(float(x) for x in self.radii)
        if not r:
            raise ValueError("need at least one radius")
        if r[0] < 0 or r[-1] >= 1 or any(y <= x for x, y in zip(r, r[1:])):
            raise ValueError("radii must be strictly increasing in [0, 1)")
        object.__setattr__(self, "radii", r)

    @classmethod
    def default(cls):
        return cls((0.25, 0.8))

    @property
    def levels(self) -> int:
        return len(self.radii)

    @property
    def outer(self) -> float:
        return self.radii[-1]


# ---------------------------------------------------------------------------
# grids and grid functions
# ---------------------------------------------------------------------------


_EDGE = 1e-12


@dataclass(frozen=True)
class IntervalGrid:
    """Sorted sample nodes covering the outermost exhaustion interval."""

    nodes: tuple

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        if x.size < 2 or np.any(np.diff(x) <= 0):
            raise ValueError("nodes must be strictly increasing, at least two")
        object.__setattr__(self, "nodes", tuple(float(v) for v in x))

    @classmethod
    def build(cls, exh: Exhaustion1D, count: int = 4096):
        """Equispaced nodes on the outer interval plus every level endpoint."""
        a, b = exh.outer
        base = np.linspace(a, b, count)
        pts = np.unique(np.concatenate([base, exh.breakpoints()]))
        return cls(tuple(pts))

    @property
    def array(self):
        return np.asarray(self.nodes)

    @property
    def cell(self) -> float:
        return float(np.max(np.diff(self.array)))

    def points_planar(self):
        x = self.array
        return np.column_stack([x, np.zeros_like(x)])


@dataclass(frozen=True)
class DiscGrid:
    """Polar grid: sorted radii (starting at 0) times equispaced angles.

    The center row is geometrically a single point; point_list collapses
    it so node-set arguments see each location once.
    """

    radii: tuple
    angle_count: int = 512

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size < 2 or r[0] != 0.0 or np.any(np.diff(r) <= 0) or r[-1] >= 1:
            raise ValueError("radii must start at 0, increase strictly, stay below 1")
        if self.angle_count < 8:
            raise ValueError("need at least 8 angles")
        object.__setattr__(self, "radii", tuple(float(v) for v in r))

    @classmethod
    def build(cls, exh: ExhaustionDisc, radial_count: int = 256, angle_count: int = 512):
        base = np.linspace(0.0, exh.outer, radial_count)
        r = np.unique(np.concatenate([base, np.asarray(exh.radii)]))
        return cls(tuple(r), angle_count)

    @property
    def radii_array(self):
        return np.asarray(self.radii)

    @property
    def angles(self):
        return 2.0 * np.pi * np.arange(self.angle_count) / self.angle_count

    @property
    def nodes(self):
        """Complex node array, shape (radial, angular)."""
        return self.radii_array[:, None] * np.exp(1j * self.angles)[None, :]

    @property
    def cell(self) -> float:
        dr = float(np.max(np.diff(self.radii_array)))
        arc = self.radii[-1] * 2.0 * np.pi / self.angle_count
        return max(dr, arc)

    def point_list(self):
        """Unique node positions as complex values: center once, then rings."""
        rings = self.nodes[1:].ravel()
        return np.concatenate([[0.0 + 0.0j], rings])

    def flatten_values(self, values):
        return np.concatenate([[values[0, 0]], values[1:].ravel()])


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on an interval or disc grid.

    Values are stored immutably; interpolation is linear between nodes
    (bilinear in polar coordinates on the disc).
    """

    grid: IntervalGrid | DiscGrid
    values: tuple = field(compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if isinstance(self.grid, IntervalGrid):
            if v.shape != (len(self.grid.nodes),):
                raise ValueError("value count must match the grid nodes")
        else:
            want = (len(self.grid.radii), self.grid.angle_count)
            if v.shape != want:
                raise ValueError(f"values must have shape {want}")
            if np.ptp(v[0].real) > 0 or np.ptp(v[0].imag) > 0:
                raise ValueError("center row must hold a single repeated value")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def domain(self) -> str:
        return "interval" if isinstance(self.grid, IntervalGrid) else "disc"

    @property
    def array(self):
        return np.asarray(self.values)

    @classmethod
    def sample(cls, grid, fn):
        if isinstance(grid, IntervalGrid):
            return cls(grid, fn(grid.array))
        vals = np.asarray(fn(grid.nodes), dtype=complex)
        vals[0, :] = vals[0, 0]
        return cls(grid, vals)

    @classmethod
    def constant(cls, grid, c=1.0):
        return cls.sample(grid, lambda z: np.full(np.shape(z), complex(c)))

    @classmethod
    def coordinate(cls, grid):
        """The identity function: x on the interval, z on the disc."""
        return cls.sample(grid, lambda z: np.asarray(z, dtype=complex))

    def interpolate(self, where):
        """Evaluate at off-grid points; raises if a point leaves the grid."""
        v = self.array
        if isinstance(self.grid, IntervalGrid):
            x = np.asarray(where, dtype=float)
            nodes = self.grid.array
            if np.any(x < nodes[0] - _EDGE) or np.any(x > nodes[-1] + _EDGE):
                raise ValueError("interpolation point leaves the grid domain")
            return np.interp(np.clip(x, nodes[0], nodes[-1]), nodes, v)
        z = np.asarray(where, dtype=complex)
        r = np.abs(z)
        radii = self.grid.radii_array
        if np.any(r > radii[-1] + _EDGE):
            raise ValueError("interpolation point leaves the grid domain")
        r = np.minimum(r, radii[-1])
        theta = np.mod(np.angle(z), 2.0 * np.pi)
        na = self.grid.angle_count
        ti = theta * na / (2.0 * np.pi)
        j0 = np.floor(ti).astype(int) % na
        wj = ti - np.floor(ti)
        i1 = np.clip(np.searchsorted(radii, r, side="right"), 1, radii.size - 1)
        i0 = i1 - 1
        denom = radii[i1] - radii[i0]
        wi = (r - radii[i0]) / denom
        j1 = (j0 + 1) % na
        return (
            v[i0, j0] * (1 - wi) * (1 - wj)
            + v[i0, j1] * (1 - wi) * wj
            + v[i1, j0] * wi * (1 - wj)
            + v[i1, j1] * wi * wj
        )

    def lipschitz_estimate(self) -> float:
        """Max finite-difference slope over grid edges (modulus of continuity)."""
        v = self.array
        if isinstance(self.grid, IntervalGrid):
            return float(np.max(np.abs(np.diff(v)) / np.diff(self.grid.array)))
        radii = self.grid.radii_array
        dr = np.diff(radii)[:, None]
        radial = np.max(np.abs(np.diff(v, axis=0)) / dr) if v.shape[0] > 1 else 0.0
        arc = radii[1:, None] * (2.0 * np.pi / self.grid.angle_count)
        dv = np.abs(v[1:] - np.roll(v[1:], 1, axis=1))
        angular = np.max(dv / arc) if v.shape[0] > 1 else 0.0
        return float(max(radial, angular))


def _freeze(arr):
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


def _level_mask_flat(grid, exh, level: int):
    """Boolean mask over the unique point list for membership in K_level."""
    if isinstance(grid, IntervalGrid):
        a, b = exh.intervals[level]
        x = grid.array
        return (x >= a - _EDGE) & (x <= b + _EDGE)
    rho = exh.radii[level]
    pts = grid.point_list()
    return np.abs(pts) <= rho + _EDGE


def sup_seminorm_grid(f: GridFunction, level: int, exh) -> float:
    """Max of |f| over the grid nodes inside exhaustion level K_level."""
    if isinstance(f.grid, IntervalGrid):
        flat = np.abs(f.array)
    else:
        flat = np.abs(f.grid.flatten_values(f.array))
    mask = _level_mask_flat(f.grid, exh, level)
    if not np.any(mask):
        raise ValueError(f"grid does not resolve exhaustion level {level}")
    return float(np.max(flat[mask]))


# ---------------------------------------------------------------------------
# homeomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Piecewise-linear map of an interval, not necessarily injective."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        x = np.asarray(self.xs, dtype=float)
        y = np.asarray(self.ys, dtype=float)
        if x.size != y.size or x.size < 2 or np.any(np.diff(x) <= 0):
            raise ValueError("breakpoints must be strictly increasing in x")
        object.__setattr__(self, "xs", tuple(float(v) for v in x))
        object.__setattr__(self, "ys", tuple(float(v) for v in y))

    def __call__(self, x):
        return np.interp(x, np.asarray(self.xs), np.asarray(self.ys))


@dataclass(frozen=True)
class PiecewiseLinearHomeo(PiecewiseLinearMap):
    """Strictly monotone piecewise-linear bijection of an interval.

    orientation records the monotonicity direction; validation against
    an exhaustion checks the boundary rules (increasing maps fix every
    level endpoint, decreasing maps swap them).
    """

    orientation: str = "increasing"

    def __post_init__(self):
        super().__post_init__()
        dy = np.diff(np.asarray(self.ys))
        if self.orientation == "increasing":
            ok = np.all(dy > 0)
        elif self.orientation == "decreasing":
            ok = np.all(dy < 0)
        else:
            raise ValueError("orientation must be 'increasing' or 'decreasing'")
        if not ok:
            raise ValueError(f"breakpoint images are not strictly {self.orientation}")

    def validate_against(self, exh: Exhaustion1D, tol: float = 1e-12):
        """Check the orientation rule at every exhaustion endpoint."""
        a_outer, b_outer = exh.outer
        if self.xs[0] > a_outer + tol or self.xs[-1] < b_outer - tol:
            raise ValueError("homeomorphism does not cover the outer interval")
        for a, b in exh.intervals:
            fa, fb = float(self(a)), float(self(b))
            want_a, want_b = (a, b) if self.orientation == "increasing" else (b, a)
            if abs(fa - want_a) > tol or abs(fb - want_b) > tol:
                raise ValueError(
                    f"level [{a:g}, {b:g}] maps to [{fa:g}, {fb:g}], breaking the "
                    f"{self.orientation} boundary rule"
                )
        return self


def build_interval_homeo(
    exh: Exhaustion1D, orientation: str = "increasing", controls=()
) -> PiecewiseLinearHomeo:
    """Assemble a validated exhaustion-preserving interval homeomorphism.

    Mandatory breakpoints send each level endpoint to itself (increasing)
    or to its opposite endpoint (decreasing).  controls is an iterable of
    extra (x, y) pairs strictly inside the bands between consecutive
    endpoints; any pair breaking strict monotonicity is rejected.
    """
    pts = exh.breakpoints()
    if orientation == "increasing":
        pairs = {float(x): float(x) for x in pts}
    elif orientation == "decreasing":
        images = {}
        for a, b in exh.intervals:
            images[float(a)] = float(b)
            images[float(b)] = float(a)
        pairs = images
    else:
        raise ValueError("orientation must be 'increasing' or 'decreasing'")
    for x, y in controls:
        x, y = float(x), float(y)
        if x in pairs and pairs[x] != y:
            raise ValueError(f"control at x={x:g} collides with a level endpoint")
        pairs[x] = y
    xs = np.array(sorted(pairs))
    ys = np.array([pairs[x] for x in xs])
    homeo = PiecewiseLinearHomeo(tuple(xs), tuple(ys), orientation=orientation)
    return homeo.validate_against(exh)


def random_interval_homeo(
    exh: Exhaustion1D,
    rng,
    orientation: str = "increasing",
    max_controls_per_band: int = 2,
    slope_range=(0.45, 1.9),
):
    """Random exhaustion-preserving homeomorphism with bounded slopes.

    Slopes are kept inside slope_range so grid-scale surjectivity (one
    cell) and injectivity (half a cell at distance two cells) hold with
    margin; draws are rejected until every band satisfies the bounds.
    """
    base = build_interval_homeo(exh, orientation)
    xs = np.asarray(base.xs)
    ys = np.asarray(base.ys)
    lo, hi = slope_range
    controls = []
    for (x0, x1), (y0, y1) in zip(zip(xs, xs[1:]), zip(ys, ys[1:])):
        m = int(rng.integers(0, max_controls_per_band + 1))
        if m == 0 or x1 - x0 < 1e-9:
            continue
        for _ in range(200):
            cx = np.sort(rng.uniform(x0, x1, size=m))
            cy = y0 + (y1 - y0) * np.sort(rng.uniform(0.05, 0.95, size=m))
            gx = np.diff(np.concatenate([[x0], cx, [x1]]))
            gy = np.diff(np.concatenate([[y0], cy, [y1]]))
            slopes = np.abs(gy) / gx
            if np.all((slopes >= lo) & (slopes <= hi)) and np.all(np.abs(gx) > 1e-7):
                controls.extend(zip(cx, cy))
                break
    return build_interval_homeo(exh, orientation, controls)


def build_zigzag_fold(exh: Exhaustion1D, grid: IntervalGrid) -> PiecewiseLinearMap:
    """Noninjective fold of the outermost level onto itself.

    Identity up to the second-outermost right endpoint, then a rise of
    slope at most two to the outer right endpoint, then a steep fall back
    to the outer left endpoint.  Every level still maps onto itself, so
    sup seminorms are preserved, but the outer ring is covered twice.
    The rise turns at a grid node at or past the midpoint so the image
    leaves gaps of at most two cells (one cell after halving).
    """
    if exh.levels < 2:
        raise ValueError("fold needs at least two exhaustion levels")
    a_out, b_out = exh.outer
    b_prev = exh.intervals[-2][1]
    mid = 0.5 * (b_prev + b_out)
    nodes = grid.array
    inside = nodes[(nodes >= mid) & (nodes < b_out - 1e-12)]
    if inside.size == 0:
        raise ValueError("grid too coarse to place the fold turn")
    p = float(inside[0])
    return PiecewiseLinearMap((a_out, b_prev, p, b_out), (a_out, b_prev, b_out, a_out))


@dataclass(frozen=True)
class AnnulusHomeo:
    """Radial twist of the disc: z maps to |z| e^{i(arg z + twist(|z|))}.

    The twist angle is piecewise linear in the radius, so every circle
    (in particular every exhaustion circle) maps rigidly onto itself and
    each annulus between consecutive exhaustion radii is preserved.
    """

    twist_breaks: tuple
    twist_values: tuple

    def __post_init__(self):
        r = np.asarray(self.twist_breaks, dtype=float)
        v = np.asarray(self.twist_values, dtype=float)
        if r.size != v.size or r.size < 2 or np.any(np.diff(r) <= 0) or r[0] < 0:
            raise ValueError("twist profile needs increasing radii from 0")
        object.__setattr__(self, "twist_breaks", tuple(float(x) for x in r))
        object.__setattr__(self, "twist_values", tuple(float(x) for x in v))

    def twist(self, r):
        return np.interp(r, np.asarray(self.twist_breaks), np.asarray(self.twist_values))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return z * np.exp(1j * self.twist(r))


def build_annulus_homeo(exh: ExhaustionDisc, twist_profiles) -> AnnulusHomeo:
    """Assemble a radial twist from per-annulus angle profiles.

    Annulus i lies between boundary radii R_i and R_{i+1}, where R runs
    over 0 followed by the exhaustion radii.  twist_profiles maps an
    annulus index to (radius, angle) pairs inside that annulus; an absent
    annulus is untwisted.  The assembled profile must be continuous at
    every shared boundary (untwisted neighbors force the twist to vanish
    there), otherwise the construction is rejected.
    """
    bounds = np.concatenate([[0.0], np.asarray(exh.radii)])
    edge_vals: dict[int, dict[float, float]] = {}
    interior: list[tuple[float, float]] = []
    for idx, prof in dict(twist_profiles).items():
        idx = int(idx)
        if not 0 <= idx < bounds.size - 1:
            raise ValueError(f"annulus index {idx} out of range")
        lo, hi = bounds[idx], bounds[idx + 1]
        edge_vals.setdefault(idx, {})
        for r, ang in prof:
            r, ang = float(r), float(ang)
            if r < lo - _EDGE or r > hi + _EDGE:
                raise ValueError(f"profile point r={r:g} outside annulus {idx}")
            if abs(r - lo) <= _EDGE or abs(r - hi) <= _EDGE:
                edge_vals[idx][round(r, 15)] = ang
            else:
                interior.append((r, ang))
    # continuity at every internal boundary: both sides must agree, with
    # an untwisted side contributing zero
    breaks = [0.0]
    values = [edge_vals.get(0, {}).get(0.0, 0.0)]
    for k in range(1, bounds.size - 1):
        r = float(bounds[k])
        left = edge_vals.get(k - 1, {}).get(round(r, 15), 0.0)
        right = edge_vals.get(k, {}).get(round(r, 15), 0.0)
        if abs(left - right) > 1e-12:
            raise ValueError(
                f"twist profile discontinuous at r={r:g}: {left:g} vs {right:g}"
            )
        breaks.append(r)
        values.append(left)
    r_top = float(bounds[-1])
    top = edge_vals.get(bounds.size - 2, {}).get(round(r_top, 15), 0.0)
    breaks.append(r_top)
    values.append(top)
    for r, ang in interior:
        breaks.append(r)
        values.append(ang)
    order = np.argsort(breaks)
    br = np.asarray(breaks)[order]
    vl = np.asarray(values)[order]
    if np.any(np.diff(br) <= 0):
        raise ValueError("duplicate radii in twist profile")
    return AnnulusHomeo(tuple(br), tuple(vl))


def random_annulus_homeo(
    exh: ExhaustionDisc, rng, max_step: float = 0.3, slope_cap: float = 4.0
):
    """Random continuous radial twist, gentle enough for the grid checks.

    Boundary twists are drawn first (shared by adjacent annuli, so the
    assembled profile is automatically continuous); each annulus then
    gets up to two interior wobbles bounded by max_step.  Draws are
    rejected until the twist slope stays below slope_cap everywhere,
    which keeps the map clear of the grid injectivity threshold.
    """
    bounds = np.concatenate([[0.0], np.asarray(exh.radii)])
    for _ in range(500):
        edge_twist = rng.uniform(-0.5, 0.5, size=bounds.size)
        profiles = {}
        for i in range(bounds.size - 1):
            lo, hi = bounds[i], bounds[i + 1]
            pts = [(lo, edge_twist[i]), (hi, edge_twist[i + 1])]
            if hi - lo > 0.05:
                m = int(rng.integers(0, 3))
                rs = np.sort(rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo), m))
                for r in rs:
                    base = np.interp(r, [lo, hi], [edge_twist[i], edge_twist[i + 1]])
                    pts.append((float(r), float(base + rng.uniform(-max_step, max_step))))
            profiles[i] = pts
        homeo = build_annulus_homeo(exh, profiles)
        slopes = np.abs(np.diff(homeo.twist_values)) / np.diff(homeo.twist_breaks)
        if float(np.max(slopes)) <= slope_cap:
            return homeo
    raise RuntimeError("could not draw a twist profile under the slope cap")


# ---------------------------------------------------------------------------
# operators on grid functions
# ---------------------------------------------------------------------------


def weighted_composition_grid(h: GridFunction, phi, f: GridFunction) -> GridFunction:
    """Node-wise h(z) * f(phi(z)), interpolating f at the mapped nodes.

    phi may be a PiecewiseLinearMap, an AnnulusHomeo, or any callable on
    node coordinates; it must keep every node inside the grid domain.
    Isometry additionally needs |h| = 1, which is not enforced here (the
    non-unimodular case is a deliberate counterexample input).
    """
    if h.grid is not f.grid and h.grid != f.grid:
        raise ValueError("weight and argument must share one grid")
    if isinstance(f.grid, IntervalGrid):
        targets = phi(f.grid.array)
    else:
        targets = np.asarray(phi(f.grid.nodes), dtype=complex)
        targets[0, :] = targets[0, 0]
    vals = h.array * f.interpolate(targets)
    if isinstance(f.grid, DiscGrid):
        vals = np.array(vals)
        vals[0, :] = vals[0, 0]
    return GridFunction(f.grid, vals)


def make_composition_operator(h: GridFunction, phi):
    """Close over (h, phi) as an opaque linear map on grid functions."""

    def op(f: GridFunction) -> GridFunction:
        return weighted_composition_grid(h, phi, f)

    return op


def random_probe(grid, rng, degree: int = 6):
    """Smooth random probe: low-degree trigonometric (1D) or polynomial (disc)."""
    k = np.arange(degree + 1)
    c = (rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)) / (1.0 + k)
    if isinstance(grid, IntervalGrid):
        x = grid.array
        vals = np.exp(2j * np.pi * np.outer(x, k)) @ c
        return GridFunction(grid, vals)

    def poly(z):
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for ck in c[::-1]:
            out = out * z + ck
        return out

    return GridFunction.sample(grid, poly)


def unimodular_field(grid, rng, degree: int = 4, amplitude: float = 1.5):
    """Random unimodular weight exp(i psi) with smooth real phase psi."""
    k = np.arange(1, degree + 1)
    a = rng.normal(size=degree) * amplitude / (1.0 + k)
    b = rng.uniform(0, 2 * np.pi, size=degree)
    if isinstance(grid, IntervalGrid):
        x = grid.array
        psi = np.cos(2 * np.pi * np.outer(x, k) + b) @ a
        return GridFunction(grid, np.exp(1j * psi))

    def phase(z):
        z = np.asarray(z, dtype=complex)
        psi = np.zeros(z.shape, dtype=float)
        for kk, aa, bb in zip(k, a, b):
            psi += aa * np.cos(kk * np.angle(z) + bb) * np.abs(z) ** kk
        return np.exp(1j * psi)

    return GridFunction.sample(grid, phase)


def interpolation_budget(probes, cell: float) -> float:
    """Error allowance for grid comparisons: worst probe slope times cell."""
    lip = max(p.lipschitz_estimate() for p in probes)
    return float(lip * cell)


@dataclass(frozen=True)
class GridIsometryReport:
    max_gap: float
    budget: float
    tol: float
    level_gaps: tuple

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tol + self.budget

    def as_record(self) -> dict:
        return {
            "max_gap": self.max_gap,
            "budget": self.budget,
            "tol": self.tol,
            "passed": self.passed,
        }


def isometry_test_grid(T, exh, probes, tol: float = 1e-9) -> GridIsometryReport:
    """Compare level sups of probes and their images, minus the budget."""
    if not probes:
        raise ValueError("probe set must be nonempty")
    budget = interpolation_budget(probes, probes[0].grid.cell)
    gaps = []
    for f in probes:
        g = T(f)
        for n in range(exh.levels):
            a = sup_seminorm_grid(f, n, exh)
            b = sup_seminorm_grid(g, n, exh)
            gaps.append((n, abs(a - b)))
    max_gap = max(g for _, g in gaps)
    return GridIsometryReport(float(max_gap), budget, tol, tuple(gaps))


# ---------------------------------------------------------------------------
# recovery of the weight and point map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecoveredSymbol:
    weight: GridFunction
    point_map: GridFunction
    certificate: dict

    def as_record(self) -> dict:
        return {f"certificate.{k}": v for k, v in sorted(self.certificate.items())}


def _flat_points(grid):
    if isinstance(grid, IntervalGrid):
        x = grid.array
        return x.astype(complex)
    return grid.point_list()


def _flat_values(grid, values):
    if isinstance(grid, IntervalGrid):
        return np.asarray(values)
    return grid.flatten_values(np.asarray(values))


def _planar(pts):
    pts = np.asarray(pts)
    return np.column_stack([pts.real, pts.imag])


def recover_weight_and_map(T, exh, grid=None, tol: float = 1e-9, rng=None) -> RecoveredSymbol:
    """Extract (weight, point map) from a surjective grid isometry.

    The weight is the image of the constant one and must be unimodular at
    every node; the point map is the conjugate weight times the image of
    the coordinate.  The certificate verifies, per level: containment of
    the mapped nodes, grid-surjectivity (every level node within one cell
    of the image), grid-injectivity (no two nodes farther apart than two
    cells land within half a cell), and reconstruction of T on random
    probes within the interpolation budget.  The first failing check
    raises NotWeightedComposition carrying the partial certificate.
    """
    if grid is None:
        grid = (
            IntervalGrid.build(exh)
            if isinstance(exh, Exhaustion1D)
            else DiscGrid.build(exh)
        )
    cert: dict = {}
    cell = grid.cell
    one = GridFunction.constant(grid, 1.0)
    h = T(one)
    unim_gap = float(np.max(np.abs(np.abs(h.array) - 1.0)))
    cert["unimodularity_gap"] = unim_gap
    if unim_gap > max(tol, 1e-9):
        raise NotWeightedComposition(
            "unimodularity", f"|T(1)| deviates from 1 by {unim_gap:g}", cert
        )

    e1 = GridFunction.coordinate(grid)
    phi_vals = np.conj(h.array) * T(e1).array
    if isinstance(grid, DiscGrid):
        phi_vals = np.array(phi_vals)
        phi_vals[0, :] = phi_vals[0, 0]
    phi_gf = GridFunction(grid, phi_vals)

    pts = _flat_points(grid)
    images = _flat_values(grid, phi_vals)

    # (a) containment and grid-surjectivity, level by level
    worst_contain = 0.0
    worst_surj = 0.0
    for n in range(exh.levels):
        mask = _level_mask_flat(grid, exh, n)
        img = images[mask]
        if isinstance(exh, Exhaustion1D):
            a, b = exh.intervals[n]
            stick_out = np.maximum(a - img.real, img.real - b)
            breach = float(np.max(np.maximum(stick_out, np.abs(img.imag))))
        else:
            breach = float(np.max(np.abs(img) - exh.radii[n]))
        worst_contain = max(worst_contain, breach)
        tree = cKDTree(_planar(img))
        dists, _ = tree.query(_planar(pts[mask]), k=1)
        worst_surj = max(worst_surj, float(np.max(dists)))
    cert["containment_breach"] = worst_contain
    cert["surjectivity_gap"] = worst_surj
    if worst_contain > 0.5 * cell:
        raise NotWeightedComposition(
            "containment", f"mapped nodes leave their level by {worst_contain:g}", cert
        )
    if worst_surj > cell * (1 + 1e-9):
        raise NotWeightedComposition(
            "surjectivity", f"image misses level nodes by {worst_surj:g}", cert
        )

    # (b) grid-injectivity over the whole outer level
    tree = cKDTree(_planar(images))
    pairs = tree.query_pairs(0.5 * cell, output_type="ndarray")
    collapsed = 0
    if pairs.size:
        src = np.abs(pts[pairs[:, 0]] - pts[pairs[:, 1]])
        collapsed = int(np.sum(src > 2.0 * cell))
    cert["collapsed_pairs"] = collapsed
    if collapsed > 0:
        raise NotWeightedComposition(
            "injectivity", f"{collapsed} distant node pairs land within half a cell", cert
        )

    # (c) reconstruction on random probes
    rng = np.random.default_rng(0) if rng is None else rng
    probes = [random_probe(grid, rng) for _ in range(3)]
    budget = interpolation_budget(probes, cell)
    where = phi_vals.real if isinstance(grid, IntervalGrid) else phi_vals
    recon = 0.0
    for f in probes:
        direct = T(f).array
        rebuilt = h.array * f.interpolate(where)
        recon = max(recon, float(np.max(np.abs(direct - rebuilt))))
    cert["reconstruction_gap"] = recon
    cert["reconstruction_budget"] = budget
    if recon > budget + tol:
        raise NotWeightedComposition(
            "reconstruction", f"T deviates from the rebuilt form by {recon:g}", cert
        )
    return RecoveredSymbol(h, phi_gf, cert)


recover_h_phi = recover_weight_and_map


# ---------------------------------------------------------------------------
# nonsurjective decomposition bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionReport:
    worst_slack: float
    budget: float
    linearity_gap: float
    dual_norm_max: float
    equicontinuity_gap: float

    @property
    def passed(self) -> bool:
        return self.worst_slack >= 0.0

    def as_record(self) -> dict:
        return {
            "worst_slack": self.worst_slack,
            "budget": self.budget,
            "linearity_gap": self.linearity_gap,
            "dual_norm_max": self.dual_norm_max,
            "passed": self.passed,
        }


def decomposition_bound_check(T, exh, probes, tol: float = 1e-9) -> DecompositionReport:
    """Certify |conj(h) T(f)| at each node against the containing levels.

    For every probe and node the functional value must stay below the
    smallest seminorm among levels containing the node, plus the
    interpolation budget; worst_slack is the minimum remaining margin
    (nonnegative means the bound holds everywhere).  Linearity of T is
    spot-checked on probe combinations, the dual-norm estimate records
    the largest ratio |value| / (level seminorm), and a soft
    equicontinuity figure tracks the functional's variation between
    adjacent nodes relative to the probe size.
    """
    if not probes:
        raise ValueError("probe set must be nonempty")
    grid = probes[0].grid
    cell = grid.cell
    one = GridFunction.constant(grid, 1.0)
    h = T(one)
    unim = float(np.max(np.abs(np.abs(h.array) - 1.0)))
    if unim > 1e-6:
        raise ValueError(f"T(1) must be unimodular (gap {unim:g})")
    budget = interpolation_budget(probes, cell)

    # smallest containing level per flat node
    pts = _flat_points(grid)
    n_levels = exh.levels
    level_of = np.full(pts.size, n_levels, dtype=int)
    for n in range(n_levels - 1, -1, -1):
        level_of[_level_mask_flat(grid, exh, n)] = n
    if np.any(level_of == n_levels):
        raise ValueError("grid extends beyond the outermost level")

    worst_slack = np.inf
    dual_max = 0.0
    equi = 0.0
    hconj = np.conj(h.array)
    for f in probes:
        phi_vals = _flat_values(grid, hconj * T(f).array)
        sems = np.array([sup_seminorm_grid(f, n, exh) for n in range(n_levels)])
        bound = sems[level_of] + budget
        slack = bound - np.abs(phi_vals)
        worst_slack = min(worst_slack, float(np.min(slack)))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.abs(phi_vals) / sems[level_of]
        dual_max = max(dual_max, float(np.nanmax(ratios)))
        scale = max(float(np.max(np.abs(phi_vals))), 1e-300)
        if isinstance(grid, IntervalGrid):
            equi = max(equi, float(np.max(np.abs(np.diff(phi_vals)))) / scale)
        else:
            rows = np.asarray(hconj * T(f).array)
            gap = max(
                float(np.max(np.abs(np.diff(rows, axis=0)))),
                float(np.max(np.abs(rows - np.roll(rows, 1, axis=1)))),
            )
            equi = max(equi, gap / scale)

    rng = np.random.default_rng(1)
    lin_gap = 0.0
    for _ in range(3):
        i, j = rng.integers(0, len(probes), size=2)
        c1, c2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        combo = GridFunction(grid, c1 * probes[i].array + c2 * probes[j].array)
        lhs = T(combo).array
        rhs = c1 * T(probes[i]).array + c2 * T(probes[j]).array
        scale = max(float(np.max(np.abs(rhs))), 1e-300)
        lin_gap = max(lin_gap, float(np.max(np.abs(lhs - rhs))) / scale)
    if lin_gap > max(tol, 1e-9):
        raise ValueError(f"operator is not linear on probes (gap {lin_gap:g})")

    return DecompositionReport(
        float(worst_slack), float(budget), float(lin_gap), float(dual_max), float(equi)
    )
