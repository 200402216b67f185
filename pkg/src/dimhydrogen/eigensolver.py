"""Bound states of the reduced radial equation on a uniform mesh.

Discretisation
--------------
The radial kinetic operator is discretised in conservative (finite-volume)
form on cell centres r_i = r_min + (i - 1/2) h.  Writing u = r^{(D-1)/2} w,
the D-dimensional radial Laplacian is (1/ρ)(ρ w')' with ρ = r^{D-1}; after
symmetrising back to u the operator is tridiagonal with

    diag_i = (ρ_{i+1/2} + ρ_{i-1/2}) / (2 h² ρ_i) + l(l+D-2)/(2 r_i²) + V(r_i)
    off_i  = -ρ_{i+1/2} / (2 h² sqrt(ρ_i ρ_{i+1}))

It reproduces K/r² to O(h²) and, because ρ vanishes at the origin for D >= 2,
imposes the regular small-r behaviour exactly, including the marginal channel
K = -1/8 (D = 2, l = 0) where the pointwise K/r² stencil converges only
logarithmically.  Walls away from the origin (and the origin itself in D = 1)
are Dirichlet walls, enforced with an antisymmetric ghost cell.

Eigenvalues come from bisection on Sturm counts, eigenvectors from inverse
iteration, and energies are Richardson-extrapolated over a ladder of grids
with h halved per rung.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .potentials import potential_energy
from .radial import RadialProblem, StabilityKind, classify_stability, effective_potential

log = logging.getLogger(__name__)

DEFAULT_POINTS = 20000
DEFAULT_LADDER = 3
DEFAULT_RUNGS = 4
BISECTION_RTOL = 1e-12
NUMEROV_TOLERANCE = 1e-5
# confining boxes: required margin V(r_max) - E and WKB attenuation exponent
CONFINING_MARGIN = 5.0
CONFINING_BARRIER = 20.0
_PIVMIN = np.finfo(float).tiny


class SupercriticalError(ValueError):
    """The spectrum is unbounded below; use collapse_diagnostic instead."""


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centred mesh on [r_min, r_max] with ``interior_points`` cells.

    ``r_min = 0`` places the inner wall at the origin.
    """

    r_min: float
    r_max: float
    interior_points: int

    def __post_init__(self):
        if not (0 <= self.r_min < self.r_max and math.isfinite(self.r_max)):
            raise ValueError(f"need 0 <= r_min < r_max, got {self.r_min!r}, {self.r_max!r}")
        if int(self.interior_points) != self.interior_points or self.interior_points < 3:
            raise ValueError(f"need at least 3 points, got {self.interior_points!r}")
        object.__setattr__(self, "interior_points", int(self.interior_points))

    @property
    def spacing(self):
        return (self.r_max - self.r_min) / self.interior_points

    def nodes(self):
        i = np.arange(1, self.interior_points + 1)
        return self.r_min + (i - 0.5) * self.spacing

    def refined(self, factor=2):
        return GridSpec(self.r_min, self.r_max, self.interior_points * factor)


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: Optional[GridSpec] = None

    def __post_init__(self):
        d = np.ascontiguousarray(self.diagonal, dtype=float)
        e = np.ascontiguousarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
            raise ValueError("off-diagonal must have one entry fewer than the diagonal")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("operator entries must be finite")
        if np.any(e >= 0):
            raise ValueError("off-diagonal entries must be strictly negative")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)
        object.__setattr__(self, "_off_sq", e * e)

    @property
    def size(self):
        return self.diagonal.size

    def gershgorin(self):
        radius = np.zeros_like(self.diagonal)
        radius[:-1] += np.abs(self.off_diagonal)
        radius[1:] += np.abs(self.off_diagonal)
        return float(np.min(self.diagonal - radius)), float(np.max(self.diagonal + radius))

    def norm_estimate(self):
        lo, hi = self.gershgorin()
        return max(abs(lo), abs(hi))

    def shifted(self, c):
        return TridiagonalOperator(self.diagonal + c, self.off_diagonal, self.grid)

    def matvec(self, x):
        y = self.diagonal * x
        y[:-1] += self.off_diagonal * x[1:]
        y[1:] += self.off_diagonal * x[:-1]
        return y


def _pivmin(op):
    return _PIVMIN * max(1.0, float(np.max(op._off_sq, initial=0.0)))


def _log_cell_offset(t):
    """Mean of ln(r'/r) weighted by r' over a cell [r(1-t), r(1+t)]."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t < 0.01
    t2 = t[small] ** 2
    out[small] = t2 * (1 / 6 + t2 * (1 / 60 + t2 / 210))
    tb = t[~small]
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(tb < 1, (1 - tb) ** 2 * np.log1p(-tb), 0.0)
    out[~small] = ((1 + tb) ** 2 * np.log1p(tb) - lower) / (4 * tb) - 0.5
    return out


def _cell_potential(model, r, h):
    # The logarithm is averaged over each cell with the radial weight r: the
    # midpoint value would leave an h² ln h error that Richardson cannot remove.
    # For every other supported potential V·r^(D-1) is smooth enough that the
    # cell-centre value is already second order without a logarithm.
    if model.confining and model.dimension == 2:
        slope = model.source_strength / (2.0 * math.pi)
        return potential_energy(model, r) + slope * _log_cell_offset(0.5 * h / r)
    return potential_energy(model, r)


def discretize(problem, grid):
    """Symmetric tridiagonal matrix of -1/2 d²/dr² + U_eff on ``grid``."""
    d = problem.dimension
    l = problem.angular_momentum
    h = grid.spacing
    r = grid.nodes()
    m = d - 1
    inner = r - 0.5 * h
    outer = r + 0.5 * h
    with np.errstate(divide="ignore"):
        down = (inner / r) ** m   # ρ_{i-1/2}/ρ_i, zero at the origin when D >= 2
        up = (outer / r) ** m     # ρ_{i+1/2}/ρ_i
        coupling = (outer[:-1] ** 2 / (r[:-1] * r[1:])) ** (0.5 * m)
    diag = (up + down) / (2 * h * h)
    # Dirichlet walls: ghost value mirrors the boundary cell with opposite sign
    if grid.r_min > 0 or d == 1:
        diag[0] += down[0] / (2 * h * h)
    diag[-1] += up[-1] / (2 * h * h)
    if l:
        diag += l * (l + d - 2) / (2 * r * r)
    diag += _cell_potential(problem.potential, r, h)
    if not np.all(np.isfinite(diag)):
        raise ValueError("effective potential is not finite on the grid")
    return TridiagonalOperator(diag, -coupling / (2 * h * h), grid)


def count_below(op, lam):
    """Number of eigenvalues of ``op`` strictly below ``lam`` (Sturm count)."""
    if lam == -math.inf:
        return 0
    if lam == math.inf:
        return op.size
    return kernels.sturm_count(op.diagonal, op._off_sq, lam, _pivmin(op))


def eigen_lowest(op, count):
    """The ``count`` smallest eigenvalues, ascending, by Sturm bisection."""
    if int(count) != count or not 1 <= count <= op.size:
        raise ValueError(f"count must be in 1..{op.size}, got {count!r}")
    lo, hi = op.gershgorin()
    lo -= 1.0
    hi += 1.0
    return kernels.bisect_lowest(op.diagonal, op._off_sq, int(count), lo, hi,
                                 BISECTION_RTOL, BISECTION_RTOL, _pivmin(op))


def _quadrature_step(op):
    return op.grid.spacing if op.grid is not None else 1.0


def eigenfunction(op, energy, max_iterations=50):
    """Eigenvector for ``energy`` by inverse iteration from the all-ones vector.

    The result is normalised to h·Σu² = 1 and its sign fixed so that the first
    component above 1e-12 of the maximum modulus is positive.
    """
    shifted = op.diagonal - energy
    pivmin = _pivmin(op)
    scale = op.norm_estimate()
    x = np.ones(op.size) / math.sqrt(op.size)
    residual = math.inf
    for iteration in range(1, max_iterations + 1):
        y = kernels.tridiag_solve(shifted, op.off_diagonal, x, pivmin)
        norm = np.linalg.norm(y)
        if not np.isfinite(norm) or norm == 0:
            raise ConvergenceError("inverse iteration broke down", residual)
        x = y / norm
        residual = float(np.linalg.norm(op.matvec(x) - energy * x))
        if iteration >= 2 and residual <= 1e-8 * scale:
            break
    else:
        raise ConvergenceError(
            f"inverse iteration did not converge in {max_iterations} steps "
            f"(residual {residual:.3e})", residual)
    big = np.abs(x) > 1e-12 * np.max(np.abs(x))
    if x[np.argmax(big)] < 0:
        x = -x
    return x / math.sqrt(_quadrature_step(op) * float(np.dot(x, x)))


def count_nodes(u, rtol=1e-10):
    """Sign changes of ``u``, ignoring entries below ``rtol`` of the maximum.

    A vanishing entry between two entries of opposite sign counts once.
    """
    u = np.asarray(u, dtype=float)
    significant = u[np.abs(u) > rtol * np.max(np.abs(u))]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


class Extrapolation(NamedTuple):
    energy: float
    order: float
    reliable: bool


def richardson_extrapolate(pairs):
    """Fit E(h) = E0 + C h^p through the last three (h, E) pairs.

    Returns the finest value with ``reliable=False`` (and ``order`` NaN) when
    the three energies are not monotone in h.
    """
    if len(pairs) < 3:
        raise ValueError("Richardson extrapolation needs at least three grids")
    (h1, e1), (h2, e2), (h3, e3) = sorted(pairs[-3:], key=lambda p: -p[0])
    q1, q2 = h1 / h2, h2 / h3
    if not (q1 > 1 and math.isclose(q1, q2, rel_tol=1e-9)):
        raise ValueError("grid spacings must shrink by a constant ratio")
    d1, d2 = e1 - e2, e2 - e3
    if d1 == 0 and d2 == 0:
        return Extrapolation(e3, math.nan, True)
    if d1 * d2 <= 0 or abs(d2) >= abs(d1):
        return Extrapolation(e3, math.nan, False)
    order = math.log(d1 / d2) / math.log(q1)
    return Extrapolation(e3 - d2 / (q1**order - 1.0), order, True)


@dataclass(eq=False)
class BoundState:
    energy: float
    node_count: int
    wavefunction: np.ndarray
    grid: GridSpec
    extrapolated: bool
    estimated_order: float = math.nan
    index: int = 0
    problem: Optional[RadialProblem] = None
    ladder_energies: tuple = ()
    order_reliable: bool = True
    numerov_defect: float = math.nan

    @property
    def radii(self):
        return self.grid.nodes()


@dataclass(eq=False)
class Spectrum:
    """Bound states of one (D, l) channel; iterates like a list of BoundState."""

    problem: RadialProblem
    grid: GridSpec
    requested: int
    states: list = field(default_factory=list)

    @property
    def found(self):
        return len(self.states)

    @property
    def energies(self):
        return np.array([s.energy for s in self.states])

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, item):
        return self.states[item]


def _wkb_barrier(problem, energy, r_max, samples=4000):
    """∫ sqrt(2 max(U_eff - E, 0)) dr from the outermost turning point to r_max."""
    r = np.linspace(r_max / samples, r_max, samples)
    excess = effective_potential(problem, r) - energy
    allowed = np.flatnonzero(excess < 0)
    start = allowed[-1] if allowed.size else 0
    k = np.sqrt(2.0 * np.clip(excess[start:], 0.0, None))
    return float(np.sum(0.5 * (k[1:] + k[:-1]) * np.diff(r[start:])))


def default_r_max(problem, n_states=1):
    """Box radius for ``n_states`` states.

    Decaying potentials use 15 (n_states + l + D/2)² / Z, a multiple of the
    Coulomb radius.  Confining potentials start from 2 and double until the
    highest requested level (estimated on a coarse mesh) sits 5 Hartree below
    V(r_max) behind a WKB barrier of exponent at least 20.
    """
    model = problem.potential
    if not model.confining:
        m = n_states + problem.angular_momentum + problem.dimension / 2
        return 15.0 * m * m / model.charge
    r_max = 2.0
    for _ in range(60):
        op = discretize(problem, GridSpec(0.0, r_max, 2000))
        top = float(eigen_lowest(op, n_states)[-1])
        margin = potential_energy(model, r_max) - top
        if margin >= CONFINING_MARGIN and _wkb_barrier(problem, top, r_max) >= CONFINING_BARRIER:
            return r_max
        r_max *= 2.0
    raise ConvergenceError("could not find a confining box radius")


def default_grid(problem, n_states=1, points=DEFAULT_POINTS):
    return GridSpec(0.0, default_r_max(problem, n_states), points)


def _cross_check(state, tolerance):
    from .shooting import numerov_energy, shoot_numerov

    problem, grid, k = state.problem, state.grid, state.index
    shot_nodes, defect = shoot_numerov(problem, grid, state.energy)
    state.numerov_defect = defect
    if shot_nodes != k:
        raise ConvergenceError(
            f"Numerov cross-check failed for state {k}: shooting sees {shot_nodes} nodes")
    if abs(defect) <= tolerance:
        return
    # The log-derivative defect grows like r_match² per unit of energy, so for
    # very diffuse states compare the Numerov eigenvalue itself instead.
    try:
        gap = abs(numerov_energy(problem, grid, state.energy) - state.energy)
    except ArithmeticError:
        gap = math.inf
    if not gap <= tolerance * abs(state.energy):
        raise ConvergenceError(
            f"Numerov cross-check failed for state {k}: matching defect {defect:.3e}, "
            f"eigenvalue gap {gap:.3e}")


def solve_states(problem, grid=None, n_states=1, *, ladder=DEFAULT_LADDER,
                 points=DEFAULT_POINTS, cross_check=True,
                 numerov_tolerance=NUMEROV_TOLERANCE):
    """Lowest ``n_states`` bound states of ``problem``.

    Energies are computed on ``ladder`` grids (h, h/2, ...) and extrapolated
    when ``ladder >= 3``; wavefunctions live on the finest grid.  For
    potentials with an ionisation threshold, levels at or above E = 0 are
    dropped, so fewer than ``n_states`` states may come back (compare
    ``Spectrum.found`` with ``Spectrum.requested``).  Each state is checked
    against Numerov shooting on a logarithmic mesh unless ``cross_check`` is off.
    """
    stability = classify_stability(problem)
    if stability.kind is StabilityKind.SUPERCRITICAL:
        raise SupercriticalError(
            f"D={problem.dimension}, l={problem.angular_momentum}: the effective potential "
            "falls to the centre (supercritical); run collapse_diagnostic for a report")
    if int(n_states) != n_states or n_states < 1:
        raise ValueError("n_states must be a positive integer")
    if ladder < 1:
        raise ValueError("ladder needs at least one grid")
    if grid is None:
        grid = default_grid(problem, n_states, points)
    grids = [grid.refined(2**j) for j in range(ladder)]
    count = min(int(n_states), grid.interior_points)
    finest_op = None
    ladder_values = []
    for g in grids:
        op = discretize(problem, g)
        ladder_values.append(eigen_lowest(op, count))
        finest_op = op
    ladder_values = np.array(ladder_values)
    finest = grids[-1]

    spectrum = Spectrum(problem, grid, int(n_states))
    threshold = None if problem.potential.confining else 0.0
    for k in range(count):
        column = ladder_values[:, k]
        if ladder >= 3:
            fit = richardson_extrapolate([(g.spacing, e) for g, e in zip(grids, column)])
            energy, order, reliable, extrapolated = fit.energy, fit.order, fit.reliable, True
        else:
            energy, order, reliable, extrapolated = float(column[-1]), math.nan, True, False
        if threshold is not None and (energy >= threshold or column[-1] >= threshold):
            break
        u = eigenfunction(finest_op, float(column[-1]))
        nodes = count_nodes(u)
        if nodes != k:
            raise ConvergenceError(f"state {k} has {nodes} nodes")
        state = BoundState(energy, nodes, u, finest, extrapolated, order, k, problem,
                           tuple(float(e) for e in column), reliable)
        if cross_check:
            _cross_check(state, numerov_tolerance)
        spectrum.states.append(state)
    if spectrum.found < spectrum.requested:
        log.info("%d of %d requested states are bound", spectrum.found, spectrum.requested)
    return spectrum


class CollapseClass(str, Enum):
    STABLE = "Stable"
    NO_BOUND_STATES = "NoBoundStates"
    COLLAPSE = "Collapse"


@dataclass
class CollapseReport:
    ladder: list
    classification: CollapseClass
    extrapolated_energy: float = math.nan


def collapse_base_grid(problem, points=DEFAULT_POINTS):
    """Default first rung: wall one spacing off the origin."""
    r_max = default_r_max(problem, 1)
    return GridSpec(r_max / (points + 1), r_max, points)


def collapse_diagnostic(problem, base_grid=None, rungs=DEFAULT_RUNGS):
    """Ground energy while the inner wall and the spacing shrink together.

    Each rung halves r_min and doubles the number of cells at fixed r_max.
    Collapse: E0 < 0 and |E0| at least doubles per rung.  NoBoundStates: no
    level below zero on any rung (decaying potentials only).  Stable otherwise.
    """
    if rungs < 4:
        raise ValueError("the collapse ladder needs at least four rungs")
    if base_grid is None:
        base_grid = collapse_base_grid(problem)
    if base_grid.r_min <= 0:
        raise ValueError("the collapse ladder needs an inner wall r_min > 0")
    ladder = []
    bound = []
    for k in range(rungs):
        g = GridSpec(base_grid.r_min / 2**k, base_grid.r_max, base_grid.interior_points * 2**k)
        op = discretize(problem, g)
        ladder.append((g, float(eigen_lowest(op, 1)[0])))
        bound.append(problem.potential.confining or count_below(op, 0.0) > 0)
    energies = [e for _, e in ladder]
    if not any(bound):
        return CollapseReport(ladder, CollapseClass.NO_BOUND_STATES)
    doubling = all(energies[k + 1] <= 2.0 * energies[k] for k in range(rungs - 1))
    if all(e < 0 for e in energies) and doubling:
        return CollapseReport(ladder, CollapseClass.COLLAPSE)
    # the wall moves with the mesh, so spacings halve only approximately;
    # extrapolate in the nominal spacing h0 / 2^k
    h0 = base_grid.spacing
    fit = richardson_extrapolate([(h0 / 2**k, e) for k, (_, e) in enumerate(ladder)])
    return CollapseReport(ladder, CollapseClass.STABLE, fit.energy)


def bracket_critical_charge(dimension, convention, l=0, z_lo=0.5, z_hi=2.0,
                            tolerance=1e-3, points=2**20):
    """Bracket the charge at which the consistent potential starts to bind.

    Bisects on whether the lowest level of a fine mesh (wall one spacing off
    the origin) dips below zero; returns (largest non-binding Z, smallest
    binding Z).
    """
    from .potentials import Family, PotentialModel

    def binds(z):
        model = PotentialModel(Family.DIMENSION_CONSISTENT, dimension, z, convention)
        problem = RadialProblem(dimension, l, model)
        return count_below(discretize(problem, grid), 0.0) > 0

    reference = RadialProblem(dimension, l,
                              PotentialModel(Family.DIMENSION_CONSISTENT, dimension, 1.0, convention))
    r_max = default_r_max(reference, 1)
    grid = GridSpec(r_max / (points + 1), r_max, points)
    if binds(z_lo) or not binds(z_hi):
        raise ValueError(f"[{z_lo}, {z_hi}] does not bracket the binding threshold")
    while z_hi - z_lo > tolerance:
        mid = 0.5 * (z_lo + z_hi)
        if binds(mid):
            z_hi = mid
        else:
            z_lo = mid
    return z_lo, z_hi
