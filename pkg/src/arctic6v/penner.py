"""Saddle-point analysis of the free-fermion emptiness probability.

In the scaling limit the s-fold contour integral behaves like a matrix-model
partition function for s unit charges on the real line, with logarithmic
repulsion and an external potential with three logarithmic wells: charges
1, x/y, and -(1/y - 1) at positions 1, 0, and -1/tau.  Here x = r/N and
y = s/N are the rescaled cut coordinates (x from the right edge, y from the
top).  The stationarity conditions are the coupled equations

    1/(w_j - 1) + (x/y)/w_j - (1/y - 1) tau/(tau w_j + 1)
        = (2/s) sum_{k != j} 1/(w_j - w_k).

Bringing the left side to a common denominator produces the quadratic
numerator  alpha z^2 + beta z + gamma  with

    alpha = tau (2 - (1-x)/y),
    beta  = tau/y + (1-tau)(1 + x/y),
    gamma = -x/y,

and the complementary combination (positive for interior points)

    alpha~ = 2 tau - alpha,  beta~ = 2 - beta,  gamma~ = -gamma.

The resolvent G_s(z) = (1/s) sum 1/(z - w_j) of any solution satisfies an
exact second-order algebraic ODE; dropping the O(s) terms for large s gives
a quadratic equation whose solution with G ~ 1/z at infinity is

    G(z) = [ (alpha z^2 + beta z + gamma) + sqrt(radicand) ]
           / (2 z (z-1) (tau z + 1)),

with a quartic radicand whose two cuts carry the charge density.  When the
first moment of the charges equals 1 the radicand collapses to the perfect
square (alpha~ z^2 + beta~ z + gamma~)^2; if moreover that quadratic has a
double root, G(z) reduces to 1/(z - 1), a single unit pole: all charges have
condensed at z = 1.  The double-root condition beta~^2 = 4 alpha~ gamma~ is
the arctic curve, an ellipse through the contact points (tau/(1+tau), 0) and
(1, 1/(1+tau)); at tau = 1 it is the circle of radius 1/2 about the center
of the square.

Scalar helpers in this module avoid numpy deliberately so that exact
rational inputs (fractions.Fraction) propagate exactly through the
coefficient algebra; the Newton solver and root finding use numpy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

#: exclusion radius around the potential singularities 0, 1, -1/tau and
#: around charge collisions
SINGULAR_TOL = 1e-13


class ConvergenceError(RuntimeError):
    """Equilibrium iteration failed to reach the residual tolerance."""


class ChargeCollisionError(ConvergenceError):
    """Two charges approached within the collision tolerance."""


class BranchCutError(ValueError):
    """Square-root evaluation requested on (or too close to) a branch cut."""


@dataclass(frozen=True)
class ScaledPoint:
    """Rescaled cut coordinates (x, y) with anisotropy slope tau.

    x in [0, 1] is the cut position measured from the right edge, y in
    (0, 1] the depth from the top.  Fields may be floats or exact rationals;
    the coefficient algebra preserves whichever is supplied.
    """

    x: object
    y: object
    tau: object

    def __post_init__(self):
        if not 0 <= self.x <= 1:
            raise ValueError(f"x must lie in [0, 1], got {self.x!r}")
        if not 0 < self.y <= 1:
            raise ValueError(f"y must lie in (0, 1], got {self.y!r}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")


class ActionCoefficients(NamedTuple):
    alpha: object
    beta: object
    gamma: object


class TildeCoefficients(NamedTuple):
    alpha: object
    beta: object
    gamma: object


def action_coeffs(p: ScaledPoint) -> ActionCoefficients:
    """Quadratic numerator coefficients of the confining force."""
    x, y, tau = p.x, p.y, p.tau
    return ActionCoefficients(
        alpha=tau * (2 - (1 - x) / y),
        beta=tau / y + (1 - tau) * (1 + x / y),
        gamma=-x / y,
    )


def tilde_coeffs(p: ScaledPoint) -> TildeCoefficients:
    """Complementary coefficients (2 tau - alpha, 2 - beta, -gamma).

    alpha~ and gamma~ are positive for interior points; gamma~ = x/y equals
    1 on the diagonal x = y.
    """
    x, y, tau = p.x, p.y, p.tau
    return TildeCoefficients(
        alpha=tau * (1 - x) / y,
        beta=(tau * (x + y - 1) + (y - x)) / y,
        gamma=x / y,
    )


@dataclass(frozen=True)
class SaddleConfiguration:
    """s real charge positions attached to a scaled point.

    Positions must avoid the potential singularities 0, 1, -1/tau and each
    other (the pairwise interaction diverges at collisions).
    """

    point: ScaledPoint
    omegas: np.ndarray

    def __post_init__(self):
        om = np.atleast_1d(np.asarray(self.omegas, dtype=float))
        if om.ndim != 1 or om.size == 0:
            raise ValueError("omegas must be a non-empty 1-d array")
        object.__setattr__(self, "omegas", om)
        tau = float(self.point.tau)
        for w in om:
            for sing in (0.0, 1.0, -1.0 / tau):
                if abs(w - sing) < SINGULAR_TOL:
                    raise ValueError(f"charge at {w!r} sits on the singularity {sing!r}")
        if om.size > 1:
            diffs = np.abs(om[:, None] - om[None, :])
            np.fill_diagonal(diffs, np.inf)
            if diffs.min() < SINGULAR_TOL:
                raise ChargeCollisionError(f"charges within {SINGULAR_TOL} of each other")

    @property
    def s(self) -> int:
        return self.omegas.size


def spe_residual(cfg: SaddleConfiguration) -> np.ndarray:
    """Stationarity residual, one entry per charge; zero at equilibrium.

    Relabeling the charges permutes the entries identically.
    """
    om = cfg.omegas
    s = om.size
    x = float(cfg.point.x)
    y = float(cfg.point.y)
    tau = float(cfg.point.tau)
    base = 1.0 / (om - 1.0) + (x / y) / om - (1.0 / y - 1.0) * tau / (tau * om + 1.0)
    if s == 1:
        return base
    diff = om[:, None] - om[None, :]
    np.fill_diagonal(diff, np.inf)
    return base - (2.0 / s) * (1.0 / diff).sum(axis=1)


def _spe_jacobian(om: np.ndarray, x: float, y: float, tau: float) -> np.ndarray:
    s = om.size
    jac = np.zeros((s, s))
    diag = (
        -1.0 / (om - 1.0) ** 2
        - (x / y) / om**2
        + (1.0 / y - 1.0) * tau**2 / (tau * om + 1.0) ** 2
    )
    if s > 1:
        diff = om[:, None] - om[None, :]
        np.fill_diagonal(diff, np.inf)
        inv2 = 1.0 / diff**2
        jac[:] = -(2.0 / s) * inv2
        diag = diag + (2.0 / s) * inv2.sum(axis=1)
    np.fill_diagonal(jac, diag)
    return jac


def _positions_admissible(om: np.ndarray, tau: float) -> bool:
    if not np.all(np.isfinite(om)):
        return False
    if np.max(np.abs(om)) > 1e8:  # charge escaping to infinity, not a root
        return False
    for sing in (0.0, 1.0, -1.0 / tau):
        if np.min(np.abs(om - sing)) < SINGULAR_TOL:
            return False
    if om.size > 1:
        diffs = np.abs(om[:, None] - om[None, :])
        np.fill_diagonal(diffs, np.inf)
        if diffs.min() < SINGULAR_TOL:
            return False
    return True


def solve_equilibrium(
    s: int,
    point: ScaledPoint,
    init: Sequence[float],
    tol: float = 1e-10,
    max_iter: int = 500,
) -> SaddleConfiguration:
    """Damped Newton iteration for the s-charge equilibrium.

    ``init`` supplies the s starting positions; a starting collision is
    resolved by a tiny deterministic perturbation.  Raises ConvergenceError
    when the residual cannot be driven below ``tol`` (including charges
    escaping to infinity, where the raw residual decays without a root) and
    ChargeCollisionError when charges collapse onto each other.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    om = np.array(init, dtype=float)
    if om.size != s:
        raise ValueError(f"init has {om.size} entries, expected {s}")
    x = float(point.x)
    y = float(point.y)
    tau = float(point.tau)

    if om.size > 1:
        diffs = np.abs(om[:, None] - om[None, :])
        np.fill_diagonal(diffs, np.inf)
        if diffs.min() < 1e-9:
            om = om + 1e-6 * np.arange(s)

    if not _positions_admissible(om, tau):
        raise ValueError("initial positions sit on a singularity of the potential")

    def norm_of(positions: np.ndarray) -> float:
        cfg = SaddleConfiguration(point, positions)
        return float(np.max(np.abs(spe_residual(cfg))))

    res = norm_of(om)
    for _ in range(max_iter):
        if res <= tol:
            return SaddleConfiguration(point, om)
        cfg = SaddleConfiguration(point, om)
        vec = spe_residual(cfg)
        jac = _spe_jacobian(om, x, y, tau)
        try:
            step = np.linalg.solve(jac, -vec)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at {om!r}") from exc
        # clamp absurd steps so a near-singular Jacobian cannot eject charges
        limit = 10.0 * (1.0 + float(np.max(np.abs(om))))
        big = float(np.max(np.abs(step)))
        if big > limit:
            step *= limit / big
        lam = 1.0
        while lam > 1e-12:
            trial = om + lam * step
            if _positions_admissible(trial, tau):
                trial_res = norm_of(trial)
                if trial_res < res:
                    om = trial
                    res = trial_res
                    break
            lam *= 0.5
        else:
            if om.size > 1:
                diffs = np.abs(om[:, None] - om[None, :])
                np.fill_diagonal(diffs, np.inf)
                if diffs.min() < 10 * SINGULAR_TOL:
                    raise ChargeCollisionError(f"charges collided near {om!r}")
            raise ConvergenceError(f"stalled at residual {res:.3e} (positions {om!r})")
    if res <= tol:
        return SaddleConfiguration(point, om)
    raise ConvergenceError(f"no convergence after {max_iter} iterations, residual {res:.3e}")


def decoupled_saddle(x: float, tau: float) -> float:
    """Common stationary point x / (tau (1 - x)) of the decoupled regime.

    For finite s and a shallow cut the coupled equations decouple at leading
    order and every charge sits here; it crosses 1 exactly at the contact
    abscissa x = tau/(1+tau).
    """
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    return x / (tau * (1.0 - x))


def decoupled_residual(omega: float, x: float, tau: float) -> float:
    """Leading-order stationarity residual tau/(1 + tau w) - x/w."""
    return tau / (1.0 + tau * omega) - x / omega


def solve_decoupled(
    x: float, tau: float, init: float | None = None, tol: float = 1e-12, max_iter: int = 200
) -> float:
    """Safeguarded Newton for the decoupled equation.

    The residual crosses zero exactly once on the positive axis (negative
    below the root, positive and decaying above), so the root is first
    bracketed and Newton steps falling outside the bracket are replaced by
    bisection.  Pure Newton would run away on the decaying tail.
    """
    if not (0 < x < 1 and tau > 0):
        raise ValueError(f"need 0 < x < 1 and tau > 0, got x={x!r} tau={tau!r}")
    lo = 1e-12
    hi = float(init) if init is not None and init > 0 else 1.0
    for _ in range(200):
        if decoupled_residual(hi, x, tau) > 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the decoupled root")

    def polish(w: float) -> float:
        # the residual can be flat near the root, so once inside the basin
        # drive the position itself to machine precision
        for _ in range(5):
            f = decoupled_residual(w, x, tau)
            fp = -(tau**2) / (1.0 + tau * w) ** 2 + x / w**2
            if fp == 0.0:
                break
            step = f / fp
            w -= step
            if abs(step) <= 1e-15 * (1.0 + abs(w)):
                break
        return w

    w = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = decoupled_residual(w, x, tau)
        if abs(f) <= tol:
            return polish(w)
        if f < 0:
            lo = w
        else:
            hi = w
        fp = -(tau**2) / (1.0 + tau * w) ** 2 + x / w**2
        step_ok = fp != 0.0
        if step_ok:
            trial = w - f / fp
            step_ok = lo < trial < hi
        w = trial if step_ok else 0.5 * (lo + hi)
    raise ConvergenceError(f"decoupled iteration stalled at {w!r}")


def green_finite(cfg: SaddleConfiguration, z: complex) -> complex:
    """Finite-s resolvent (1/s) sum 1/(z - w_j); poles are rejected."""
    z = complex(z)
    om = cfg.omegas
    if np.min(np.abs(z - om)) < 1e-12 * (1.0 + abs(z)):
        raise ValueError(f"evaluation point {z!r} coincides with a charge")
    return complex(np.mean(1.0 / (z - om)))


def omega_moment(cfg: SaddleConfiguration) -> float:
    """First moment of the charge positions, (1/s) sum w_j."""
    return float(np.mean(cfg.omegas))


def diffeq_residual(cfg: SaddleConfiguration, z: complex) -> complex:
    """Defect of the exact finite-s resolvent ODE at z.

    Vanishes (to rounding, roughly 1e-8 relative to the term magnitudes)
    when the configuration solves the stationarity equations; configurations
    that do not solve them leave an O(1) defect, which makes this a sharp
    diagnostic.  The resolvent and its derivative are evaluated exactly from
    the rational sum, no differencing involved.
    """
    z = complex(z)
    om = cfg.omegas
    s = cfg.s
    tau = float(cfg.point.tau)
    alpha, beta, gamma = (float(v) for v in action_coeffs(cfg.point))
    scale = 1.0 + abs(z)
    if np.min(np.abs(z - om)) < 1e-12 * scale:
        raise ValueError(f"evaluation point {z!r} coincides with a charge")
    for sing in (0.0, 1.0, -1.0 / tau):
        if abs(z - sing) < 1e-12 * scale:
            raise ValueError(f"evaluation point {z!r} sits on the singularity {sing!r}")
    green = np.mean(1.0 / (z - om))
    green_prime = -np.mean(1.0 / (z - om) ** 2)
    first = np.mean(om)
    lhs = z * (z - 1.0) * (tau * z + 1.0) * (s * green_prime + s * s * green * green)
    lhs -= s * (alpha * z * z + beta * z + gamma) * s * green
    rhs = (tau * s * (s - 1) - alpha * s * s) * z
    rhs += (1.0 - tau) * s * (s - 1) - beta * s * s
    rhs += first * (2.0 * tau * s * (s - 1) - alpha * s * s)
    return complex(lhs - rhs)


def radicand_coeffs(p: ScaledPoint, first_moment) -> list:
    """Quartic under the square root of the asymptotic resolvent.

    Coefficients, highest power first, of

        (alpha z^2 + beta z + gamma)^2
        + 4 z (z-1) (tau z + 1) [ (tau - alpha) z
                                  + first_moment (2 tau - alpha) + 1 - tau - beta ].

    The algebra is done with plain scalar operations, so exact rational
    inputs yield exact rational coefficients.  The leading coefficient is
    identically (2 tau - alpha)^2 and the constant one gamma^2.
    """
    alpha, beta, gamma = action_coeffs(p)
    tau = p.tau
    square = _poly_mul([alpha, beta, gamma], [alpha, beta, gamma])
    cubic = [4 * tau, 4 * (1 - tau), -4, 0]
    linear = [tau - alpha, first_moment * (2 * tau - alpha) + 1 - tau - beta]
    return _poly_add(square, _poly_mul(cubic, linear))


def _poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_add(p: list, q: list) -> list:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    off = len(p) - len(q)
    for j, qj in enumerate(q):
        out[off + j] += qj
    return out


def _poly_val(p: list, z):
    acc = 0
    for c in p:
        acc = acc * z + c
    return acc


def _segment_distance(point: complex, a: complex, b: complex) -> float:
    """Distance from a complex point to the segment [a, b]."""
    if a == b:
        return abs(point - a)
    t = ((point - a) * (b - a).conjugate()).real / abs(b - a) ** 2
    t = min(1.0, max(0.0, t))
    return abs(point - (a + t * (b - a)))


def _sqrt_continued(coeffs: list, z: complex, base_point: float | None) -> complex:
    """Square root of the quartic, continued from the positive real axis.

    The branch is anchored at a real base point beyond every root of the
    radicand, where the root is taken positive, and continued analytically
    along the straight segment from there to z.  Along a segment the
    argument of (z - root) turns by less than pi for any root off the
    segment, so the continued value is the product of principal square
    roots of the ratios (z - root)/(base - root).  A root lying on the
    segment means z is being evaluated on a branch cut; that is flagged.
    """
    roots = np.roots(coeffs)
    top = float(max(np.abs(roots), default=0.0))
    z0 = 2.0 * (1.0 + top) if base_point is None else float(base_point)
    if base_point is not None and z0 <= top:
        raise ValueError(f"base point {z0!r} does not lie beyond all radicand roots")
    anchor = float(_poly_val([float(c) for c in coeffs], z0))
    if not anchor > 0:
        raise BranchCutError(f"radicand not positive at the anchor {z0!r}")
    for q in roots:
        if _segment_distance(complex(q), complex(z0), complex(z)) < 1e-9 * (1.0 + abs(q)):
            raise BranchCutError(
                f"continuation path from {z0!r} to {z!r} passes through the radicand root {q!r}"
            )
    value = complex(math.sqrt(anchor))
    for q in roots:
        value *= cmath.sqrt((z - q) / (z0 - q))
    return value


def green_asymptotic(z: complex, p: ScaledPoint, first_moment, base_point: float | None = None) -> complex:
    """Large-s resolvent with the branch normalized to G ~ 1/z at infinity.

    When the radicand is a perfect square (the condensation value of the
    first moment) its only analytic square roots are the quadratic itself
    and its negative; the anchor at large positive z picks the former, and
    on the arctic curve the whole expression collapses to 1/(z-1).  In the
    generic two-cut case the square root is continued from the anchor along
    the straight segment to z; evaluation on a branch cut raises
    BranchCutError.
    """
    z = complex(z)
    tau = float(p.tau)
    alpha, beta, gamma = (float(v) for v in action_coeffs(p))
    quartic = [float(c) for c in radicand_coeffs(p, first_moment)]
    tilde = [float(v) for v in tilde_coeffs(p)]
    square = _poly_mul(tilde, tilde)
    scale = max(abs(c) for c in quartic) or 1.0
    if all(abs(qc - sc) <= 1e-10 * scale for qc, sc in zip(quartic, square)):
        root_part = complex(_poly_val(tilde, z))
    else:
        root_part = _sqrt_continued(quartic, z, base_point)
    denom = 2.0 * z * (z - 1.0) * (tau * z + 1.0)
    if abs(denom) < 1e-300:
        raise ValueError(f"evaluation point {z!r} is a pole of the resolvent prefactor")
    return ((alpha * z + beta) * z + gamma + root_part) / denom


def condensation_discriminant(p: ScaledPoint):
    """beta~^2 - 4 alpha~ gamma~; zero exactly on the arctic curve.

    Exact for rational inputs.
    """
    at, bt, gt = tilde_coeffs(p)
    return bt * bt - 4 * at * gt


def arctic_y_of_x(x: float, tau: float) -> float:
    """Depth y(x) of the upper-left arctic arc for x in [tau/(1+tau), 1].

    Root of ((1+tau) y + (tau-1) x - tau)^2 = 4 tau x (1-x) on the branch
    passing through both contact points (the minus branch); the contact
    values y = 0 and y = 1/(1+tau) are returned exactly at the endpoints.
    """
    tau = float(tau)
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    x0 = tau / (1.0 + tau)
    if x < x0 - 1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"x={x!r} outside the arc range [{x0!r}, 1]")
    if x <= x0:
        return 0.0
    if x >= 1.0:
        return 1.0 / (1.0 + tau)
    radicand = max(tau * x * (1.0 - x), 0.0)
    return (tau - (tau - 1.0) * x - 2.0 * math.sqrt(radicand)) / (1.0 + tau)


def arctic_implicit(x, y, tau):
    """Implicit quadratic of the arctic ellipse; vanishes on the curve.

    (1+tau)^2 x^2 + (1+tau)^2 y^2 - 2 (1-tau^2) x y
    - 2 tau (1+tau) x - 2 tau (1+tau) y + tau^2.

    At tau = 1 this is 4 [(x-1/2)^2 + (y-1/2)^2 - 1/4], the circle of radius
    1/2 about the center of the square.  Exact for rational inputs.
    """
    one = 1 + tau
    return (
        one * one * x * x
        + one * one * y * y
        - 2 * (1 - tau * tau) * x * y
        - 2 * tau * one * x
        - 2 * tau * one * y
        + tau * tau
    )


def contact_points(tau: float) -> tuple:
    """Where the arc meets the bottom and right sides of the unit square:
    (tau/(1+tau), 0) and (1, 1/(1+tau))."""
    tau = float(tau)
    return ((tau / (1.0 + tau), 0.0), (1.0, 1.0 / (1.0 + tau)))


def is_frozen_nw(p: ScaledPoint) -> bool:
    """True when the point lies strictly inside the frozen corner region.

    The region sits between the arc and the lattice's top-left corner, which
    in the (x, y) coordinates (x from the right, y from the top) is the
    corner (1, 0); there the emptiness probability tends to 1.
    """
    tau = float(p.tau)
    x = float(p.x)
    y = float(p.y)
    x0 = tau / (1.0 + tau)
    if x <= x0:
        return False
    return y < arctic_y_of_x(x, tau)


def efp_limit_step(x: float, tau: float) -> float:
    """Limiting shallow-cut profile: the unit step at x0 = tau/(1+tau).

    Returns 0 below the contact abscissa, 1 above it, and by convention 1/2
    exactly at the discontinuity.
    """
    if not 0 <= x <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    x0 = tau / (1.0 + tau)
    if x < x0:
        return 0.0
    if x > x0:
        return 1.0
    return 0.5


@dataclass(frozen=True)
class ArcticCurve:
    """Upper-left arctic arc for a fixed slope tau, with sampling helpers."""

    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")

    @property
    def contact_points(self) -> tuple:
        return contact_points(self.tau)

    def y_of_x(self, x: float) -> float:
        return arctic_y_of_x(x, self.tau)

    def implicit(self, x: float, y: float) -> float:
        return arctic_implicit(x, y, self.tau)

    def sample(self, count: int) -> list:
        """``count`` points (x, y) along the arc, endpoints included."""
        if count < 2:
            raise ValueError(f"need at least 2 samples, got {count}")
        x0 = self.tau / (1.0 + self.tau)
        return [
            (x, arctic_y_of_x(x, self.tau))
            for x in (x0 + (1.0 - x0) * k / (count - 1) for k in range(count))
        ]
