"""Classic polytrope profile: theta'' + (2/xi) theta' + theta^n = 0.

Solved with theta(0) = 1, theta'(0) = 0 via a series start at a small offset
(the origin is a removable singularity of the radial Laplacian).  The first
zero xi1 gives the surface, mu1 = -xi1^2 theta'(xi1) the mass integral.

The right-hand side uses (theta v 0)^n, so past the zero the integration
continues as the vacuum solution; a short guarded continuation beyond xi1 is
kept internally because the distorted surface of a slowly rotating body pokes
outside xi1 on the equator.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import NonTerminationError

XI_START_DEFAULT = 1e-4
XI_MAX_DEFAULT = 1e4
EXTEND_FACTOR_DEFAULT = 1.35


def _theta_pow(theta, n):
    """(theta v 0)^n with the n = 0 convention (theta v 0)^0 = 1 inside."""
    if n == 0.0:
        return np.where(np.asarray(theta) > 0.0, 1.0, 0.0)
    return np.power(np.maximum(theta, 0.0), n)


def _series_theta(xi, n):
    return 1.0 - xi**2 / 6.0 + n * xi**4 / 120.0


def _series_dtheta(xi, n):
    return -xi / 3.0 + n * xi**3 / 30.0


class LaneEmdenSolution:
    """Profile with located surface.  Evaluate through theta_at/dtheta_at on
    [0, xi1]; the guarded continuation past xi1 is internal."""

    def __init__(self, n, xi1, mu1, dense_in, dense_ext, xi_start, xi_extended,
                 rtol, atol):
        self.n = float(n)
        self.xi1 = float(xi1)
        self.mu1 = float(mu1)
        self.xi_start = float(xi_start)
        self.xi_extended = float(xi_extended)
        self.rtol = rtol
        self.atol = atol
        self._dense_in = dense_in
        self._dense_ext = dense_ext

    @property
    def theta1_prime(self):
        return -self.mu1 / self.xi1**2

    def _eval(self, xi, component, limit):
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
        if np.any(xi_arr < 0.0) or np.any(xi_arr > limit * (1.0 + 1e-12)):
            raise ValueError("xi outside [0, %.6g]" % limit)
        out = np.empty_like(xi_arr)
        series = xi_arr < self.xi_start
        if component == 0:
            out[series] = _series_theta(xi_arr[series], self.n)
        else:
            out[series] = _series_dtheta(xi_arr[series], self.n)
        inner = (~series) & (xi_arr <= self.xi1)
        if inner.any():
            out[inner] = self._dense_in(xi_arr[inner])[component]
        outer = xi_arr > self.xi1
        if outer.any():
            out[outer] = self._dense_ext(xi_arr[outer])[component]
        return out[0] if np.ndim(xi) == 0 else out

    def theta_at(self, xi):
        """theta on [0, xi1]."""
        return self._eval(xi, 0, self.xi1)

    def dtheta_at(self, xi):
        """theta' on [0, xi1]."""
        return self._eval(xi, 1, self.xi1)

    def theta_extended(self, xi):
        """theta on [0, xi_extended], continuing the guarded equation past
        the zero (vacuum branch, theta < 0)."""
        return self._eval(xi, 0, self.xi_extended)

    def dtheta_extended(self, xi):
        return self._eval(xi, 1, self.xi_extended)

    def mass_integral(self):
        """int_0^xi1 theta^n xi^2 dxi, which the equation makes equal to
        mu1; used as an independent identity check."""
        val, _ = quad(lambda x: float(_theta_pow(self.theta_at(x), self.n))
                      * x**2, 0.0, self.xi1, epsabs=1e-13, epsrel=1e-12,
                      limit=200)
        return float(val)

    def profile(self, points=500):
        """Arrays (xi, theta, dtheta) spanning [0, xi1] for export."""
        xi = np.linspace(0.0, self.xi1, points)
        return {"xi": xi, "theta": self.theta_at(xi),
                "dtheta": self.dtheta_at(xi)}


def solve(n, rtol=1e-12, atol=1e-14, xi_start=XI_START_DEFAULT,
          xi_max=XI_MAX_DEFAULT, extend_factor=EXTEND_FACTOR_DEFAULT):
    """Integrate to the first zero and a short guarded stretch beyond it.

    n = 0 is accepted (closed form 1 - xi^2/6); n >= 5 has no finite zero
    and raises NonTerminationError without integrating; n < 0 raises
    ValueError.
    """
    n = float(n)
    if n < 0.0:
        raise ValueError("polytropic index must be >= 0, got %r" % n)
    if n >= 5.0:
        raise NonTerminationError(
            "no-finite-zero", "theta has no zero for n >= 5 (n = %g)" % n)

    def rhs(xi, y):
        theta, dtheta = y
        return [dtheta, -float(_theta_pow(theta, n)) - 2.0 * dtheta / xi]

    def surface(_xi, y):
        return y[0]
    surface.terminal = True
    surface.direction = -1

    y0 = [_series_theta(xi_start, n), _series_dtheta(xi_start, n)]
    sol = solve_ivp(rhs, (xi_start, xi_max), y0, method="RK45", rtol=rtol,
                    atol=atol, dense_output=True, events=[surface])
    if not sol.success:
        raise NonTerminationError("integrator-failure", sol.message)
    if sol.t_events[0].size == 0:
        raise NonTerminationError(
            "no-zero-within-guard",
            "no surface located below xi = %g (n = %g)" % (xi_max, n))
    xi1 = float(sol.t_events[0][0])
    dtheta1 = float(sol.sol(xi1)[1])
    mu1 = -xi1**2 * dtheta1

    # vacuum continuation for the distorted-surface work
    xi_ext = extend_factor * xi1
    sol_ext = solve_ivp(rhs, (xi1, xi_ext), [0.0, dtheta1], method="RK45",
                        rtol=rtol, atol=atol, dense_output=True)
    if not sol_ext.success:
        raise NonTerminationError("integrator-failure", sol_ext.message)

    return LaneEmdenSolution(n=n, xi1=xi1, mu1=mu1, dense_in=sol.sol,
                             dense_ext=sol_ext.sol, xi_start=xi_start,
                             xi_extended=xi_ext, rtol=rtol, atol=atol)
