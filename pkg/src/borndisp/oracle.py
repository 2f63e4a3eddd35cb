"""
Independent brute-force references: direct evaluation of B_{theta,2} in polar
coordinates about -k theta, a 1-d principal-value integrator for closed-form
checks, the sphere trace-constant ratio, and the sphere-kernel integral bound.

These deliberately avoid the Ewald-sphere parametrization and the PV
machinery of the dispersion module so agreement is an end-to-end test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import integrate, interpolate

from .geometry import Direction, SphereRule, chart
from .potentials import Potential
from .spectral import Domain, Field, TransformDirection, fourier

EULER_GAMMA = 0.5772156649015328606


class ToleranceNotReached(RuntimeError):
    pass


def exp1_series(x: float, terms: int = 60) -> float:
    """E_1(x) = -gamma - log x + sum (-1)^{k+1} x^k / (k k!), for x > 0."""
    if x <= 0:
        raise ValueError("series valid for x > 0")
    total = -EULER_GAMMA - np.log(x)
    term = 1.0
    for k in range(1, terms + 1):
        term *= -x / k
        total -= term / k
    return total


def pv_1d(f, singularity: float, domain: tuple[float, float], tol: float = 1e-9) -> float:
    """p.v. integral of f over the domain, f having a simple-pole singularity.

    Symmetric pairing on the largest window around the pole that fits the
    domain; adaptive quadrature outside.
    """
    a, b = domain
    s = singularity
    if not a < s < b:
        raise ValueError("singularity must lie inside the domain")
    w = min(s - a, b - s if np.isfinite(b) else np.inf)
    if not np.isfinite(w):
        w = min(s - a, 1.0)
    x, gw = np.polynomial.legendre.leggauss(96)
    u = 0.5 * w * (x + 1.0)
    wu = 0.5 * w * gw
    inner = float(np.dot(wu, [f(s + ui) + f(s - ui) for ui in u]))
    total = inner
    err = 0.0
    if a < s - w:
        lo, e1 = integrate.quad(f, a, s - w, epsabs=tol / 4, epsrel=tol / 4, limit=400)
        total += lo
        err += e1
    if (np.isfinite(b) and s + w < b) or not np.isfinite(b):
        hi, e2 = integrate.quad(f, s + w, b, epsabs=tol / 4, epsrel=tol / 4, limit=400)
        total += hi
        err += e2
    if err > tol:
        raise ToleranceNotReached(f"quadrature error estimate {err:.2e} > tol {tol:.2e}")
    return total


def brute_b_theta2(
    q: Potential,
    theta: Direction,
    eta,
    resolution: int = 2048,
    t_max: float | None = None,
) -> complex:
    """Direct evaluation of B_{theta,2}(q)(eta) for n = 2.

    Sphere term by dense trapezoid on the circle; principal-value term as
    p.v. integral over R^2 of q_hat(xi) q_hat(eta - xi) / (xi.(xi + 2k theta))
    in polar coordinates (t, phi) about -k theta, where the denominator is
    t^2 - k^2, with symmetric pairing in t at t = k.
    """
    eta = np.asarray(eta, dtype=float)
    if eta.shape[0] != 2:
        raise ValueError("brute-force reference is restricted to n = 2")
    if not q.analytic_fourier:
        raise ValueError("brute-force reference requires an analytic q_hat")
    ch = chart(eta, theta)
    k = ch.k
    M = resolution
    phi = 2.0 * np.pi * np.arange(M) / M
    omega = np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    # Sphere term: S_{theta,1} = (1/(2k)) * k * integral over angles.
    xi1 = k * omega - k * theta.components
    F1 = q.fourier_eval(xi1) * q.fourier_eval(eta - xi1)
    sphere = 0.5 * (2.0 * np.pi / M) * np.sum(F1)

    def ring(t):
        xi = -k * theta.components + t * omega
        vals = q.fourier_eval(xi) * q.fourier_eval(eta - xi)
        return (2.0 * np.pi / M) * np.sum(vals)

    def g(t):
        return t * ring(t) / (k**2 - t**2)

    if t_max is None:
        t_max = k + float(np.linalg.norm(eta)) + 12.0
    delta = 0.5
    x, gw = np.polynomial.legendre.leggauss(96)
    u = 0.5 * delta * k * (x + 1.0)
    wu = 0.5 * delta * k * gw
    inner = np.dot(wu, [g(k - ui) + g(k + ui) for ui in u])
    lo, _ = integrate.quad_vec(g, 0.0, (1.0 - delta) * k, epsabs=1e-12, epsrel=1e-10)
    hi, _ = integrate.quad_vec(g, (1.0 + delta) * k, t_max, epsabs=1e-12, epsrel=1e-10)
    pv_term = inner + lo + hi
    return complex(1j * np.pi * sphere + pv_term)


# ---------------------------------------------------------------------------
# Trace constant (sphere trace inequality with constant 1)

_SPHERE_AREA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


def trace_ratio(f, rho: float, rule: SphereRule | None = None) -> float:
    """Ratio of the sphere-trace integral to the full W^{1,2} energy:

        integral_{S_rho} |f|^2 dsigma  /  (integral |f|^2 + integral |grad f|^2)

    For a radial Potential both sides reduce to 1-d quadratures on the
    frequency and space sides; for a Field the numerator interpolates the
    spatial samples on the sphere (a rule is then required) and the
    denominator is the frequency-side Riemann sum.
    """
    if isinstance(f, Potential):
        if not f.is_radial:
            raise ValueError("trace_ratio supports radial potentials or Fields")
        n = f.dimension
        area = _SPHERE_AREA[n]
        fval = float(np.abs(f.spatial_eval(np.array([rho] + [0.0] * (n - 1)))) ** 2)
        numer = fval * area * rho ** (n - 1)

        def dens(s):
            pt = np.zeros(n)
            pt[0] = s
            return float(np.abs(f.fourier_eval(pt)) ** 2) * (1.0 + s**2) * s ** (n - 1)

        integral, _ = integrate.quad(dens, 0.0, np.inf, limit=400)
        denom = area * integral / (2.0 * np.pi) ** n
        if denom == 0.0:
            return 0.0
        return numer / denom

    field = f
    if rule is None:
        raise ValueError("trace_ratio on a Field requires a sphere rule")
    grid = field.grid
    n = grid.dimension
    if field.domain is not Domain.SPACE:
        raise ValueError("trace_ratio expects a space-domain field")
    axis = grid.space_axis()
    interp = interpolate.RegularGridInterpolator(
        (axis,) * n, field.samples, bounds_error=False, fill_value=0.0
    )
    pts = rho * rule.nodes
    numer = float(np.dot(rule.weights, np.abs(interp(pts)) ** 2) * rho ** (n - 1))
    fhat = fourier(field, TransformDirection.FORWARD)
    weight = 1.0 + grid.freq_radius() ** 2
    denom = float(
        np.sum(weight * np.abs(fhat.samples) ** 2)
        * grid.freq_spacing**n
        / (2.0 * np.pi) ** n
    )
    if denom == 0.0:
        return 0.0
    return numer / denom


def sphere_kernel_bound(
    x, rho: float, lam: float, n: int, rule: SphereRule
) -> float:
    """integral_{S_rho} |x - y|^{-(n-1-2 lam)} dsigma(y) / rho^{2 lam}.

    Reduced to a polar integral about the direction of x; panels are graded
    geometrically toward the near point, with counts tied to the rule level
    so refinement is meaningful.
    """
    if not 0.0 < lam <= (n - 1) / 2.0:
        raise ValueError(f"lambda must be in (0, (n-1)/2], got {lam}")
    x = np.asarray(x, dtype=float)
    e = (n - 1) - 2.0 * lam
    R = float(np.linalg.norm(x))
    area = _SPHERE_AREA[n]
    if e == 0.0:
        return area * rho ** (n - 1) / rho ** (2.0 * lam)
    if R == 0.0:
        return area * rho ** (n - 1) * rho ** (-e) / rho ** (2.0 * lam)

    panels = 8 * rule.level
    nodes = 8 + 2 * rule.level
    gx, gw = np.polynomial.legendre.leggauss(nodes)

    def panel_integral(fn, lo, hi, sing_at_hi):
        # geometric grading toward the singular end
        edges = hi - (hi - lo) * np.geomspace(1.0, 1e-12, panels + 1) if sing_at_hi else None
        if edges is None:
            edges = np.linspace(lo, hi, panels + 1)
        total = 0.0
        for aa, bb in zip(edges[:-1], edges[1:]):
            lo_, hi_ = min(aa, bb), max(aa, bb)
            mid, half = 0.5 * (lo_ + hi_), 0.5 * (hi_ - lo_)
            total += half * np.dot(gw, fn(mid + half * gx))
        return total

    if n == 3:
        # u = cos(angle to x): 2 pi rho^2 integral (R^2+rho^2-2 R rho u)^{-e/2} du
        def fn(u):
            return (R**2 + rho**2 - 2.0 * R * rho * u) ** (-e / 2.0)

        val = 2.0 * np.pi * rho**2 * panel_integral(fn, -1.0, 1.0, sing_at_hi=True)
    else:
        # 2 rho integral_0^pi (R^2+rho^2-2 R rho cos p)^{-e/2} dp, singular at
        # p=0; written as (R-rho)^2 + 4 R rho sin^2(p/2) to avoid cancellation
        def fn(p):
            return ((R - rho) ** 2 + 4.0 * R * rho * np.sin(0.5 * p) ** 2) ** (
                -e / 2.0
            )

        val = 2.0 * rho * panel_integral(fn, np.pi, 0.0, sing_at_hi=True)
        val = abs(val)
    return float(val / rho ** (2.0 * lam))


def dump_fixtures(fixtures: dict, path) -> None:
    """Oracle results as JSON so library tests can consume frozen values."""
    with open(path, "w") as fh:
        json.dump(fixtures, fh, indent=2, sort_keys=True)
        fh.write("\n")
