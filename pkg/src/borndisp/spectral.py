"""
Uniform grids, discrete Fourier transforms, radial transforms and weighted
Sobolev norms.

Fourier convention (used everywhere in this package):

    forward   f_hat(xi) = integral exp(-i x.xi) f(x) dx
    inverse   f(x)      = (2 pi)^{-n} integral exp(i x.xi) f_hat(xi) dxi

The discrete transforms are scaled so that samples approximate the continuum
integrals (forward carries h^n, inverse carries the matching 1/h^n).
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, interpolate, special


class Domain(enum.Enum):
    SPACE = 0
    FREQUENCY = 1


class TransformDirection(enum.Enum):
    FORWARD = 0
    INVERSE = 1


class DomainMismatchError(ValueError):
    """Transform direction incompatible with the field's current domain."""


@dataclass(frozen=True)
class Grid:
    """Uniform n-dimensional lattice on [-L, L)^n with its frequency dual."""

    dimension: int
    samples_per_axis: int
    half_extent: float

    def __post_init__(self) -> None:
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")
        if self.samples_per_axis % 2 != 0 or self.samples_per_axis < 8:
            raise ValueError(
                f"samples_per_axis must be even and >= 8, got {self.samples_per_axis}"
            )
        if self.half_extent <= 0:
            raise ValueError(f"half_extent must be positive, got {self.half_extent}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.samples_per_axis

    @property
    def freq_spacing(self) -> float:
        return np.pi / self.half_extent

    @property
    def nyquist_radius(self) -> float:
        return np.pi * self.samples_per_axis / (2.0 * self.half_extent)

    def space_axis(self) -> np.ndarray:
        N = self.samples_per_axis
        return -self.half_extent + self.spacing * np.arange(N)

    def freq_axis(self) -> np.ndarray:
        N = self.samples_per_axis
        return self.freq_spacing * (np.arange(N) - N // 2)

    def _radius(self, axis: np.ndarray) -> np.ndarray:
        mesh = np.meshgrid(*([axis] * self.dimension), indexing="ij")
        return np.sqrt(sum(m**2 for m in mesh))

    def space_radius(self) -> np.ndarray:
        return self._radius(self.space_axis())

    def freq_radius(self) -> np.ndarray:
        return self._radius(self.freq_axis())

    def space_points(self) -> np.ndarray:
        """All lattice points as an array of shape (N^n, n)."""
        mesh = np.meshgrid(*([self.space_axis()] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def freq_points(self) -> np.ndarray:
        mesh = np.meshgrid(*([self.freq_axis()] * self.dimension), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def make_grid(n: int, N: int, L: float) -> Grid:
    return Grid(dimension=n, samples_per_axis=N, half_extent=float(L))


@dataclass(frozen=True)
class Field:
    """Complex samples on a grid, in either the space or frequency domain."""

    grid: Grid
    samples: np.ndarray
    domain: Domain

    def __post_init__(self) -> None:
        N, n = self.grid.samples_per_axis, self.grid.dimension
        if self.samples.shape != (N,) * n:
            raise ValueError(
                f"samples shape {self.samples.shape} does not match grid {(N,) * n}"
            )


def field_from_function(grid: Grid, f: Callable, domain: Domain = Domain.SPACE) -> Field:
    """Sample a radius- or point-valued function on the grid."""
    pts = grid.space_points() if domain is Domain.SPACE else grid.freq_points()
    vals = np.asarray(f(pts), dtype=complex)
    shape = (grid.samples_per_axis,) * grid.dimension
    return Field(grid, vals.reshape(shape), domain)


def fourier(field: Field, direction: TransformDirection) -> Field:
    """Scaled n-dimensional DFT between the space and frequency lattices."""
    h = field.grid.spacing
    n = field.grid.dimension
    if direction is TransformDirection.FORWARD:
        if field.domain is not Domain.SPACE:
            raise DomainMismatchError("forward transform needs a space-domain field")
        out = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(field.samples))) * h**n
        return Field(field.grid, out, Domain.FREQUENCY)
    if field.domain is not Domain.FREQUENCY:
        raise DomainMismatchError("inverse transform needs a frequency-domain field")
    out = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(field.samples))) / h**n
    return Field(field.grid, out, Domain.SPACE)


def bessel_weight(xi, alpha: float) -> np.ndarray:
    """<xi>^alpha = (1 + |xi|^2)^{alpha/2}, vectorized over points (last axis)."""
    xi = np.asarray(xi, dtype=float)
    return (1.0 + np.sum(xi**2, axis=-1)) ** (alpha / 2.0)


def bessel_weight_radius(rho, alpha: float) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    return (1.0 + rho**2) ** (alpha / 2.0)


@dataclass(frozen=True)
class SobolevIndex:
    alpha: float
    delta: float = 0.0


def sobolev_norm(f: Field, idx: SobolevIndex) -> float:
    """Discrete W^{alpha,2}_delta norm: <xi>^alpha multiplier in frequency,
    <x>^delta weight in space, Riemann-sum L^2."""
    grid = f.grid
    if f.domain is Domain.SPACE:
        fhat = fourier(f, TransformDirection.FORWARD)
    else:
        fhat = f
    mult = bessel_weight_radius(grid.freq_radius(), idx.alpha)
    smoothed = fourier(Field(grid, fhat.samples * mult, Domain.FREQUENCY),
                       TransformDirection.INVERSE)
    weight = bessel_weight_radius(grid.space_radius(), idx.delta)
    vals = smoothed.samples * weight
    return float(np.sqrt(np.sum(np.abs(vals) ** 2) * grid.spacing**grid.dimension))


# ---------------------------------------------------------------------------
# Radial profiles


def _power_law_fit(radii: np.ndarray, values: np.ndarray) -> tuple[float, float]:
    """Fit values ~ c * <rho>^{-p}; returns (p, c)."""
    mask = values > 0
    if mask.sum() < 4:
        return np.inf, 0.0
    x = np.log1p(radii[mask] ** 2) / 2.0  # log <rho>
    y = np.log(values[mask])
    slope, intercept = np.polyfit(x, y, 1)
    return -float(slope), float(np.exp(intercept))


@dataclass
class RadialProfile:
    """Radial function sampled on increasing radii, with a fitted power-law
    tail value(rho) ~ tail_coefficient * <rho>^{-tail_exponent} beyond range."""

    radii: np.ndarray
    values: np.ndarray
    tail_exponent: float | None = None
    tail_coefficient: float | None = None
    _spline: interpolate.CubicSpline = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        self.radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values)
        self.values = values if np.iscomplexobj(values) else values.astype(float)
        if self.radii.ndim != 1 or self.radii.shape != self.values.shape:
            raise ValueError("radii and values must be matching 1-d arrays")
        if np.any(np.diff(self.radii) <= 0):
            raise ValueError("radii must be strictly increasing")
        self._spline = interpolate.CubicSpline(self.radii, self.values)

    def fit_tail(self, window: tuple[float, float] | None = None) -> None:
        """Fit the power-law tail on a top window and anchor it continuously
        at the last sampled radius."""
        r_max = self.radii[-1]
        if window is None:
            window = (0.5 * r_max, r_max)
        mask = (self.radii >= window[0]) & (self.radii <= window[1])
        p, _ = _power_law_fit(self.radii[mask], np.abs(self.values[mask]))
        self.tail_exponent = p
        edge = float(self.values[-1])
        if np.isfinite(p):
            self.tail_coefficient = edge * (1.0 + r_max**2) ** (p / 2.0)
        else:
            self.tail_coefficient = 0.0

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        out = self._spline(np.clip(rho, self.radii[0], self.radii[-1]))
        beyond = rho > self.radii[-1]
        if np.any(beyond):
            if self.tail_exponent is None or not np.isfinite(self.tail_exponent):
                tail = 0.0
            else:
                tail = self.tail_coefficient * bessel_weight_radius(
                    rho, -self.tail_exponent
                )
            out = np.where(beyond, tail, out)
        below = rho < self.radii[0]
        if np.any(below):
            out = np.where(below, self.values[0], out)
        return out if out.ndim else float(out)

    def derivative(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        out = self._spline(np.clip(rho, self.radii[0], self.radii[-1]), 1)
        beyond = rho > self.radii[-1]
        if np.any(beyond):
            if self.tail_exponent is None or not np.isfinite(self.tail_exponent):
                tail = 0.0
            else:
                p, c = self.tail_exponent, self.tail_coefficient
                tail = -c * p * rho * (1.0 + rho**2) ** (-(p + 2.0) / 2.0)
            out = np.where(beyond, tail, out)
        return out if out.ndim else float(out)


def _radial_kernel(n: int, rho: float, r: np.ndarray) -> np.ndarray:
    """Angular part of the n-d Fourier transform of a radial function."""
    if n == 3:
        return 4.0 * np.pi * r**2 * np.sinc(rho * r / np.pi)
    return 2.0 * np.pi * r * special.j0(rho * r)


def radial_fourier(
    profile: RadialProfile,
    n: int,
    direction: TransformDirection,
    out_radii: np.ndarray | None = None,
) -> RadialProfile:
    """Radial profile of the n-dimensional Fourier transform, by adaptive 1-d
    quadrature of the profile's interpolant against the dimensional kernel."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    if np.iscomplexobj(profile.values):
        raise ValueError("radial_fourier requires a real-valued profile")
    r_max = profile.radii[-1]
    if out_radii is None:
        out_radii = profile.radii.copy()
    scale = (2.0 * np.pi) ** (-n) if direction is TransformDirection.INVERSE else 1.0
    out = np.empty_like(np.asarray(out_radii, dtype=float))
    for i, rho in enumerate(np.asarray(out_radii, dtype=float)):
        val, _ = integrate.quad(
            lambda r: _radial_kernel(n, rho, np.asarray(r)) * profile._spline(r),
            0.0,
            r_max,
            limit=400,
        )
        out[i] = scale * val
    return RadialProfile(np.asarray(out_radii, dtype=float), out)


# ---------------------------------------------------------------------------
# Field serialization: header (n:u8, N:u32, L:f64, domain:u8) + complex64 LE

_HEADER = struct.Struct("<BIdB")


def write_field(f: Field, path) -> None:
    with open(path, "wb") as fh:
        fh.write(
            _HEADER.pack(
                f.grid.dimension,
                f.grid.samples_per_axis,
                f.grid.half_extent,
                f.domain.value,
            )
        )
        fh.write(np.ascontiguousarray(f.samples, dtype="<c8").tobytes())


def read_field(path) -> Field:
    with open(path, "rb") as fh:
        n, N, L, dom = _HEADER.unpack(fh.read(_HEADER.size))
        grid = Grid(n, N, L)
        raw = np.frombuffer(fh.read(), dtype="<c8")
    samples = raw.reshape((N,) * n).astype(complex)
    return Field(grid, samples, Domain(dom))
