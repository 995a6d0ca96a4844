"""Distance distortion of single ReLU layers with random Gaussian weights.

Closed forms for the corrected expected output distance
(0.5*||x-y||^2 - ||x||*||y||*psi) and the original published claim (+psi),
seeded Monte Carlo estimators and independent oracles, experiment sweeps,
and a CLI that statistically discriminates the two hypotheses.
"""

from .backend import BACKEND_NAME
from .geometry import (
    DistanceClaim,
    PairGeometry,
    Variant,
    angle_between,
    angle_map,
    cross_term_closed_form,
    expected_output_cos,
    expected_sq_dist,
    iterate_angle_map,
    pair_geometry_from_angle,
    psi_of_angle,
    shrinkage_bounds,
    unit_shrinkage_ratio,
)
from .layers import (
    ELEMENT_CAP,
    GaussianLayer,
    LayerStack,
    load_layer,
    relu_forward,
    sample_layer,
    save_layer,
    sq_dist_realization,
    stack_forward,
)
from .estimators import (
    MomentEstimate,
    VerdictKind,
    ZScoreVerdict,
    cross_term_mc_2d,
    mc_output_cos,
    mc_sq_dist,
    mean_width_estimate,
    quadrature_cross_integral,
    refutation_test,
)
from .experiments import (
    ClassConfig,
    SeparationReport,
    SweepRecord,
    concentration_sweep,
    depth_sweep,
    fit_loglog_slope,
    generate_classes,
    planar_pair,
    separation_experiment,
    separation_statistics,
    theta_sweep,
)

__version__ = "0.1.0"
