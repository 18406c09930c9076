"""First-order rotational distortion of a polytrope.

A slowly rotating polytrope with rotation parameter b = Omega^2 / (4 pi G
rho_O) keeps a Lane-Emden profile to first order, corrected by two radial
functions: a spherical response h0 and a quadrupolar response psi2,

    (1/xi^2) (xi^2 h0')'   + n theta^(n-1) h0            = 1,
    (1/xi^2) (xi^2 psi2')' + (n theta^(n-1) - 6/xi^2) psi2 = 0,

with regular centers h0 = xi^2/6 + O(xi^4) and psi2 = xi^2 (1 + O(xi^2)).
Matching the quadrupole to a decaying exterior harmonic fixes the
amplitude A2 = -(5/6) xi1^2 / (3 psi2(xi1) + xi1 psi2'(xi1)), which is
negative while psi2(xi1) stays positive for the polytropic range handled
here.  The distorted profile and its boundary are then

    Theta(xi, zeta)  = theta(xi) + b [h0(xi) + A2 psi2(xi) P2(zeta)],
    Xi1(zeta)        = xi1 + (xi1^2 / mu1) [h0(xi1) + A2 psi2(xi1) P2(zeta)] b,

an even curve in zeta = cos(angle from the rotation axis) that bulges at
the equator.  Everything here is first order in b; quadratic remainders
are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import StellarMatchError

# Above this rotation parameter the first-order truncation is advisory only.
FIRST_ORDER_ADVISORY_B = 0.05
# Radial evaluations may overshoot xi1 by at most this much (Taylor range).
EXTENSION_SPAN = 0.5


def legendre_p2(zeta):
    """Second Legendre polynomial, (3 zeta^2 - 1) / 2, on [-1, 1]."""
    zeta = np.asarray(zeta, dtype=float)
    if np.any(np.abs(zeta) > 1.0 + 1e-12):
        raise ValueError("zeta must lie in [-1, 1]")
    out = 0.5 * (3.0 * zeta**2 - 1.0)
    return float(out) if out.ndim == 0 else out


def _surface_coefficient(base, xi):
    """n theta^(n-1) with theta clamped at zero; finite for n >= 1."""
    theta = max(float(base.theta_at(xi)), 0.0)
    return base.n * theta ** (base.n - 1.0)


class RadialSolution:
    """One radial response on [0, xi1]: series core, dense middle, and a
    short linear Taylor extension past the surface for evaluating inside
    the rotational bulge."""

    def __init__(self, base, dense, xi_start, series, d_series):
        self.base = base
        self.xi1 = base.xi1
        self._dense = dense
        self._xi_start = xi_start
        self._series = series
        self._d_series = d_series
        surf = dense(self.xi1)
        self._f1, self._df1 = float(surf[0]), float(surf[1])

    def _eval(self, xi, component):
        xi = np.asarray(xi, dtype=float)
        scalar = xi.ndim == 0
        xi = np.atleast_1d(xi)
        if np.any(xi < 0.0) or np.any(xi > self.xi1 + EXTENSION_SPAN):
            raise ValueError("xi outside [0, xi1 + extension span]")
        out = np.empty_like(xi)
        core = xi < self._xi_start
        beyond = xi > self.xi1
        mid = ~core & ~beyond
        if np.any(core):
            fn = self._series if component == 0 else self._d_series
            out[core] = fn(xi[core])
        if np.any(mid):
            out[mid] = self._dense(xi[mid])[component]
        if np.any(beyond):
            s = xi[beyond] - self.xi1
            if component == 0:
                out[beyond] = self._f1 + self._df1 * s
            else:
                out[beyond] = self._df1
        return float(out[0]) if scalar else out

    def at(self, xi):
        return self._eval(xi, 0)

    def d_at(self, xi):
        return self._eval(xi, 1)

    @property
    def surface_value(self):
        return self._f1

    @property
    def surface_slope(self):
        return self._df1


def _solve_radial(base, rhs_extra, series, d_series, rtol, atol):
    xi_s = base.xi_start

    def rhs(xi, y):
        f, df = y
        return [df, rhs_extra(xi, f) - 2.0 * df / xi]

    sol = solve_ivp(
        rhs,
        (xi_s, base.xi1),
        [float(series(xi_s)), float(d_series(xi_s))],
        method="RK45",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if not sol.success:
        raise StellarMatchError("radial response integration failed: %s" % sol.message)
    return RadialSolution(base, sol.sol, xi_s, series, d_series)


def solve_h0(base, rtol=1e-12, atol=1e-14):
    """Spherical response: (1/xi^2)(xi^2 h0')' + n theta^(n-1) h0 = 1,
    regular center h0 = xi^2/6 - n xi^4/120 + ..."""
    n = base.n

    def series(xi):
        return xi**2 / 6.0 - n * xi**4 / 120.0

    def d_series(xi):
        return xi / 3.0 - n * xi**3 / 30.0

    def extra(xi, f):
        return 1.0 - _surface_coefficient(base, xi) * f

    return _solve_radial(base, extra, series, d_series, rtol, atol)


def solve_psi2(base, rtol=1e-12, atol=1e-14):
    """Quadrupolar response: (1/xi^2)(xi^2 psi2')' +
    (n theta^(n-1) - 6/xi^2) psi2 = 0, normalized to unit xi^2 leading
    coefficient: psi2 = xi^2 (1 - n xi^2/14 + ...)."""
    n = base.n

    def series(xi):
        return xi**2 * (1.0 - n * xi**2 / 14.0)

    def d_series(xi):
        return 2.0 * xi - 4.0 * n * xi**3 / 14.0

    def extra(xi, f):
        return (6.0 / xi**2 - _surface_coefficient(base, xi)) * f

    return _solve_radial(base, extra, series, d_series, rtol, atol)


def compute_a2(base, psi2):
    """Quadrupole amplitude from decaying exterior matching:
    A2 = -(5/6) xi1^2 / (3 psi2(xi1) + xi1 psi2'(xi1))."""
    denom = 3.0 * psi2.surface_value + base.xi1 * psi2.surface_slope
    if abs(denom) < 1e-12 * max(1.0, abs(psi2.surface_value)):
        raise StellarMatchError(
            "degenerate exterior matching: 3 psi2 + xi1 psi2' vanishes at the surface"
        )
    return -(5.0 / 6.0) * base.xi1**2 / denom


@dataclass
class DistortionSolution:
    """First-order distortion of one Lane-Emden base solution."""

    base: object
    h0: RadialSolution
    psi2: RadialSolution
    a2: float

    def distortion_field(self, xi, zeta):
        """Combined response h0(xi) + A2 psi2(xi) P2(zeta)."""
        return self.h0.at(xi) + self.a2 * self.psi2.at(xi) * legendre_p2(zeta)

    def profile(self, points=500):
        """Arrays (xi, h0, psi2) on [0, xi1] for export."""
        xi = np.linspace(0.0, self.base.xi1, points)
        return {"xi": xi, "h0": self.h0.at(xi), "psi2": self.psi2.at(xi)}

    def describe(self):
        return {
            "n": self.base.n,
            "xi1": self.base.xi1,
            "mu1": self.base.mu1,
            "a2": self.a2,
            "h0_surface": self.h0.surface_value,
            "psi2_surface": self.psi2.surface_value,
        }


def solve_distortion(base, rtol=1e-12, atol=1e-14):
    """Solve both radial responses and fix the quadrupole amplitude."""
    if base.n < 1.0:
        raise ValueError(
            "surface coefficient theta^(n-1) diverges for n < 1; "
            "polytropic index out of the supported range"
        )
    h0 = solve_h0(base, rtol=rtol, atol=atol)
    psi2 = solve_psi2(base, rtol=rtol, atol=atol)
    a2 = compute_a2(base, psi2)
    return DistortionSolution(base=base, h0=h0, psi2=psi2, a2=a2)


@dataclass
class SurfaceCurve:
    """Distorted boundary Xi1(zeta) with its quadratic regrouping
    Xi1 = c0 + (c1 - c2 zeta^2) b.  ``first_order_advisory`` flags
    rotation parameters where the truncation is no longer trustworthy."""

    b: float
    zeta: np.ndarray
    values: np.ndarray
    c0: float
    c1: float
    c2: float
    first_order_advisory: bool = False

    def as_rows(self):
        return list(zip(self.zeta.tolist(), self.values.tolist()))

    def describe(self):
        return {
            "b": self.b,
            "c0": self.c0,
            "c1": self.c1,
            "c2": self.c2,
            "first_order_advisory": self.first_order_advisory,
            "n_zeta": int(len(self.zeta)),
        }


def surface_curve(dist, b, zeta=None):
    """Distorted surface Xi1(zeta) = xi1 + (xi1^2/mu1) field(xi1, zeta) b.

    Also reports the quadratic coefficients c0 = xi1,
    c1 = (xi1^2/mu1)(h0(xi1) - A2 psi2(xi1)/2) and
    c2 = -(3/2)(xi1^2/mu1) A2 psi2(xi1), which regroup the same formula;
    c2 > 0 because A2 < 0 and psi2(xi1) > 0.
    """
    if b < 0.0:
        raise ValueError("rotation parameter b must be nonnegative")
    if zeta is None:
        zeta = np.linspace(-1.0, 1.0, 201)
    zeta = np.asarray(zeta, dtype=float)
    base = dist.base
    gain = base.xi1**2 / base.mu1
    values = base.xi1 + gain * dist.distortion_field(base.xi1, zeta) * b
    c0 = base.xi1
    c1 = gain * (dist.h0.surface_value - dist.a2 * dist.psi2.surface_value / 2.0)
    c2 = -1.5 * gain * dist.a2 * dist.psi2.surface_value
    return SurfaceCurve(
        b=float(b),
        zeta=zeta,
        values=values,
        c0=c0,
        c1=c1,
        c2=c2,
        first_order_advisory=b > FIRST_ORDER_ADVISORY_B,
    )


def boundary_radius(dist, b, zeta):
    """Xi1 at a single zeta (or array), without building a SurfaceCurve."""
    base = dist.base
    return base.xi1 + base.xi1**2 / base.mu1 * dist.distortion_field(base.xi1, zeta) * b


def theta_distorted(dist, xi, zeta, b):
    """Distorted profile Theta = theta(xi) + b field(xi, zeta) for
    0 <= xi <= Xi1(zeta).  Past the spherical surface xi1 (inside the
    bulge) theta continues on its vacuum branch."""
    if b < 0.0:
        raise ValueError("rotation parameter b must be nonnegative")
    limit = boundary_radius(dist, b, zeta)
    if xi < 0.0 or xi > limit * (1.0 + 1e-12):
        raise ValueError("xi outside [0, Xi1(zeta)]")
    theta = dist.base.theta_extended(xi) if xi > dist.base.xi1 else dist.base.theta_at(xi)
    return float(theta) + b * dist.distortion_field(xi, zeta)


@dataclass
class LevelSurface:
    """Curve xi*(zeta) where the distorted profile equals theta_star."""

    theta_star: float
    zeta: np.ndarray
    xi_star: np.ndarray

    def as_rows(self):
        return list(zip(self.zeta.tolist(), self.xi_star.tolist()))


def level_surface(dist, b, theta_star, zeta=None, margin=1e-3):
    """Level set Theta(xi, zeta) = theta_star, one bracketed root per zeta.

    theta_star must keep ``margin`` away from both the center value 1 and
    the surface value 0 so the bracket [0, Xi1(zeta)] straddles the level.
    """
    if not (margin <= theta_star <= 1.0 - margin):
        raise ValueError("theta_star must lie in [margin, 1 - margin]")
    if zeta is None:
        zeta = np.linspace(-1.0, 1.0, 201)
    zeta = np.asarray(zeta, dtype=float)
    xi_star = np.empty_like(zeta)
    for k, z in enumerate(zeta):
        limit = float(boundary_radius(dist, b, z))

        def objective(xi):
            return theta_distorted(dist, xi, z, b) - theta_star

        lo, hi = 0.0, limit
        if objective(lo) <= 0.0 or objective(hi) >= 0.0:
            raise StellarMatchError(
                "level %g not bracketed on [0, Xi1] at zeta = %g" % (theta_star, z)
            )
        xi_star[k] = brentq(objective, lo, hi, xtol=1e-13, rtol=4e-15)
    return LevelSurface(theta_star=float(theta_star), zeta=zeta, xi_star=xi_star)


def dimensional_scale(rho_o, a_const, gamma, grav=1.0):
    """Length unit a = sqrt(A gamma rho_O^(gamma-2) / (4 pi G (gamma-1)))
    relating xi to physical radius for given surface density and EOS."""
    if rho_o <= 0.0 or a_const <= 0.0 or grav <= 0.0 or gamma <= 1.0:
        raise ValueError("scale needs rho_o, A, G > 0 and gamma > 1")
    return math.sqrt(
        a_const * gamma * rho_o ** (gamma - 2.0) / (4.0 * math.pi * grav * (gamma - 1.0))
    )
