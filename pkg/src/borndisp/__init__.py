"""Numerical machinery for the quadratic (double dispersion) term of the
fixed-angle Born series: frequency chart, Ewald-sphere operators,
principal-value integration, counterexample potentials, and the
sharp-regularity bound calculators."""

from .analysis import (
    DecayFit,
    RefinementScan,
    Verdict,
    fit_decay,
    gain_scan,
    lemma52_check,
    multi_ray_decay,
)
from .bounds import BoundReport, alpha0, alpha_j, m_threshold, thm_limits
from .dispersion import (
    CutoffSpec,
    DispersionSample,
    PVParams,
    b_theta2,
    bilinear_K,
    cutoff_chi,
    dispersion_batch,
    ds_dr,
    principal_value_op,
    q_full2_hat,
    q_theta2_hat,
    spherical_op,
    write_samples_csv,
)
from .geometry import (
    Chart,
    Direction,
    EwaldSphere,
    NotInHalfSpace,
    SphereRule,
    chart,
    ewald_nodes,
    ewald_sphere,
    in_cone,
    orient_nodes,
    sphere_rule,
)
from .potentials import (
    GBetaSpec,
    GridTooCoarseError,
    Potential,
    bessel_kernel_hat,
    eval_fourier,
    export_potential,
    gaussian_potential,
    make_bump,
    make_gbeta,
)
from .spectral import (
    Domain,
    Field,
    Grid,
    RadialProfile,
    SobolevIndex,
    TransformDirection,
    bessel_weight,
    field_from_function,
    fourier,
    make_grid,
    radial_fourier,
    read_field,
    sobolev_norm,
    write_field,
)

__version__ = "0.1.0"
