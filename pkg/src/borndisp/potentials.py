"""
Test potential families: the compactly supported counterexample g_beta
(bump times Bessel kernel), Gaussians with exact Fourier pairs, and
self-convolved mollifier bumps phi = psi * psi.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .spectral import (
    Domain,
    Field,
    Grid,
    RadialProfile,
    TransformDirection,
    bessel_weight,
    bessel_weight_radius,
    fourier,
    radial_fourier,
)

log = logging.getLogger(__name__)


class GridTooCoarseError(RuntimeError):
    """The frequency lattice truncates the Bessel kernel too early."""


@dataclass
class Potential:
    """A test potential with paired spatial and Fourier evaluators.

    Evaluators are vectorized over point arrays of shape (..., n). For radial
    potentials the Fourier evaluator dispatches on |xi| through a radial
    profile with power-law tail extrapolation beyond the tabulated range.
    """

    label: str
    dimension: int
    spatial_eval: Callable
    fourier_eval: Callable
    support_radius: float
    is_real: bool
    is_radial: bool
    fourier_nonneg: bool
    fourier_grad: Callable | None = None
    fourier_profile: RadialProfile | None = None
    analytic_fourier: bool = False
    meta: dict = field(default_factory=dict)


def eval_fourier(q: Potential, xi) -> np.ndarray:
    """q_hat at xi; single entry point used by every Ewald-sphere quadrature."""
    return q.fourier_eval(np.asarray(xi, dtype=float))


def bessel_kernel_hat(xi, beta: float, n: int) -> np.ndarray:
    """G_beta_hat(xi) = <xi>^{-n/2-beta}, the Bessel-kernel symbol."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return bessel_weight(xi, -(n / 2.0 + beta))


def gaussian_potential(a: float, grid: Grid) -> Potential:
    """q(x) = exp(-a|x|^2) with exact Fourier pair; analytic oracle family."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    n = grid.dimension
    amp = (np.pi / a) ** (n / 2.0)

    def spatial(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-a * np.sum(x**2, axis=-1))

    def fhat(xi):
        xi = np.asarray(xi, dtype=float)
        return amp * np.exp(-np.sum(xi**2, axis=-1) / (4.0 * a))

    def fgrad(xi):
        xi = np.asarray(xi, dtype=float)
        return -xi / (2.0 * a) * fhat(xi)[..., None]

    return Potential(
        label=f"gaussian(a={a})",
        dimension=n,
        spatial_eval=spatial,
        fourier_eval=fhat,
        support_radius=np.inf,
        is_real=True,
        is_radial=True,
        fourier_nonneg=True,
        fourier_grad=fgrad,
        analytic_fourier=True,
        meta={"a": a},
    )


def _radial_potential_evals(profile: RadialProfile):
    def fhat(xi):
        xi = np.asarray(xi, dtype=float)
        return profile(np.sqrt(np.sum(xi**2, axis=-1)))

    def fgrad(xi):
        xi = np.asarray(xi, dtype=float)
        rho = np.sqrt(np.sum(xi**2, axis=-1))
        slope = profile.derivative(rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(rho[..., None] > 0, xi / np.where(rho == 0, 1, rho)[..., None], 0.0)
        return slope[..., None] * unit

    return fhat, fgrad


def standard_mollifier(r, radius: float) -> np.ndarray:
    """exp(-1/(1-(r/radius)^2)) on r < radius, 0 outside."""
    r = np.asarray(r, dtype=float)
    u = r / radius
    out = np.zeros_like(u)
    inside = u < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def make_bump(radius: float, grid: Grid) -> Potential:
    """phi = psi * psi for the standard mollifier psi of the given radius.

    phi_hat = psi_hat^2 is nonnegative by construction; the spatial profile
    comes from the inverse radial transform, clipped to the exact support
    |x| < 2 radius of the convolution.
    """
    if 2.0 * radius > grid.half_extent / 2.0:
        raise ValueError(
            f"bump radius {radius} too large for grid half extent {grid.half_extent}"
        )
    n = grid.dimension
    r_in = np.linspace(0.0, radius, 513)
    psi_prof = RadialProfile(r_in, standard_mollifier(r_in, radius))
    rho = np.linspace(0.0, grid.nyquist_radius, 512)
    psi_hat = radial_fourier(psi_prof, n, TransformDirection.FORWARD, out_radii=rho)
    phi_hat = RadialProfile(rho, psi_hat.values**2)
    phi_hat.fit_tail()

    r_out = np.linspace(0.0, 2.0 * radius, 512)
    phi_prof = radial_fourier(phi_hat, n, TransformDirection.INVERSE, out_radii=r_out)

    fhat, fgrad = _radial_potential_evals(phi_hat)

    def spatial(x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x**2, axis=-1))
        out = phi_prof(r)
        return np.where(r < 2.0 * radius, out, 0.0)

    return Potential(
        label=f"bump(radius={radius})",
        dimension=n,
        spatial_eval=spatial,
        fourier_eval=fhat,
        support_radius=2.0 * radius,
        is_real=True,
        is_radial=True,
        fourier_nonneg=True,
        fourier_grad=fgrad,
        fourier_profile=phi_hat,
        meta={"bump_radius": radius},
    )


@dataclass(frozen=True)
class GBetaSpec:
    beta: float
    bump_radius: float
    grid: Grid

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if 2.0 * self.bump_radius > self.grid.half_extent / 2.0:
            raise ValueError("bump support must fit the grid with margin")


def _shell_average(radius_grid: np.ndarray, values: np.ndarray, bin_width: float):
    """Mean of values over lattice shells of the given width; returns
    (mean radius per shell, mean value per shell)."""
    r = radius_grid.ravel()
    v = values.ravel()
    idx = np.floor(r / bin_width).astype(int)
    count = np.bincount(idx)
    mean_r = np.bincount(idx, weights=r) / count
    mean_v = np.bincount(idx, weights=v) / count
    return mean_r, mean_v


def make_gbeta(spec: GBetaSpec) -> Potential:
    """g_beta = phi * G_beta synthesized on the grid.

    Pipeline: sample G_beta_hat on the frequency lattice, inverse transform,
    multiply pointwise by the discrete self-convolution phi of the mollifier,
    transform forward, and shell-average g_beta_hat into a radial profile
    with fitted power-law tail. Nonnegativity of the discrete g_beta_hat is
    inherited from phi_hat = psi_hat^2 >= 0 on the lattice.
    """
    grid, n, beta = spec.grid, spec.grid.dimension, spec.beta
    # The lattice represents radial frequencies out to the corner radius
    # sqrt(n) * Nyquist; truncation of G_beta_hat happens there.
    xi_cut = np.sqrt(n) * grid.nyquist_radius
    peak = 1.0
    tail = bessel_weight_radius(xi_cut, -(n / 2.0 + beta))
    if tail > 1e-3 * peak:
        raise GridTooCoarseError(
            f"G_beta_hat at the lattice corner radius is {tail:.2e} of the "
            f"peak (> 1e-3); refine the grid for beta = {beta}"
        )

    freq_r = grid.freq_radius()
    ghat_kernel = Field(grid, bessel_weight_radius(freq_r, -(n / 2.0 + beta)).astype(complex),
                        Domain.FREQUENCY)
    G = fourier(ghat_kernel, TransformDirection.INVERSE).samples.real

    space_r = grid.space_radius()
    psi = Field(grid, standard_mollifier(space_r, spec.bump_radius).astype(complex),
                Domain.SPACE)
    psi_hat = fourier(psi, TransformDirection.FORWARD).samples.real
    phi = fourier(Field(grid, (psi_hat**2).astype(complex), Domain.FREQUENCY),
                  TransformDirection.INVERSE).samples.real

    g = phi * G
    ghat = fourier(Field(grid, g.astype(complex), Domain.SPACE),
                   TransformDirection.FORWARD).samples.real

    radii, values = _shell_average(freq_r, ghat, grid.freq_spacing)
    keep = radii <= 0.98 * xi_cut  # outermost corner shells are undersampled
    profile = RadialProfile(radii[keep], values[keep])
    profile.fit_tail()

    sp_radii, sp_values = _shell_average(space_r, g, grid.spacing)
    sp_keep = sp_radii <= 2.0 * spec.bump_radius + 2.0 * grid.spacing
    spatial_prof = RadialProfile(sp_radii[sp_keep], sp_values[sp_keep])
    support = 2.0 * spec.bump_radius

    fhat, fgrad = _radial_potential_evals(profile)

    def spatial(x):
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x**2, axis=-1))
        out = spatial_prof(np.clip(r, None, spatial_prof.radii[-1]))
        return np.where(r <= support, out, 0.0)

    return Potential(
        label=f"gbeta(n={n},beta={beta})",
        dimension=n,
        spatial_eval=spatial,
        fourier_eval=fhat,
        support_radius=support,
        is_real=True,
        is_radial=True,
        fourier_nonneg=True,
        fourier_grad=fgrad,
        fourier_profile=profile,
        meta={
            "beta": beta,
            "bump_radius": spec.bump_radius,
            "ghat_min": float(ghat.min()),
            "ghat_zero": float(profile(0.0)),
            "grid": {"n": n, "N": grid.samples_per_axis, "L": grid.half_extent},
        },
    )


def export_potential(q: Potential, json_path, csv_path=None) -> None:
    """JSON descriptor plus, for radial potentials, the Fourier-side radial
    profile as a radius,value CSV."""
    desc = {
        "label": q.label,
        "dimension": q.dimension,
        "support_radius": None if np.isinf(q.support_radius) else q.support_radius,
        "is_real": q.is_real,
        "is_radial": q.is_radial,
        "fourier_nonneg": q.fourier_nonneg,
        "meta": {k: v for k, v in q.meta.items() if not isinstance(v, np.ndarray)},
    }
    if q.fourier_profile is not None:
        desc["tail_exponent"] = q.fourier_profile.tail_exponent
        desc["tail_coefficient"] = q.fourier_profile.tail_coefficient
    with open(json_path, "w") as fh:
        json.dump(desc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if csv_path is not None and q.fourier_profile is not None:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["radius", "value"])
            for r, v in zip(q.fourier_profile.radii, q.fourier_profile.values):
                writer.writerow([f"{r:.17g}", f"{v:.17g}"])
