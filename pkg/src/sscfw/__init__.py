"""Projection-free Frank-Wolfe variants over polytopes with short-step chaining.

The library implements the away-step (AFW), pairwise (PFW) and in-face (FDFW)
Frank-Wolfe variants over V-represented polytopes, both with a plain stepsize
rule and wrapped in short step chains that eliminate bad (maximally
truncated) steps, plus the cone geometry and rate verifiers needed to check
the per-step and global convergence guarantees on recorded traces.
"""

from .region import AtomSet, FaceDescriptor, Region, from_atoms, hypercube, l1_ball, nnls, simplex
from .objective import (
    QuadraticObjective,
    SmoothObjective,
    distance_squared,
    indefinite_quadratic,
    power_iteration_radius,
    sc_quadratic,
)
from .directions import (
    ActiveIterate,
    DirectionKind,
    DirectionProposal,
    afw_select,
    apply_step,
    away_direction,
    dsb_measure,
    fdfw_select,
    fw_direction,
    pfw_direction,
)
from .ssc import SSCTrace, TerminationCase, ball_exit_step, beta_step, run_ssc
from .solver import IterationRecord, RunTrace, StepKind, StopReason, run_plain, run_with_ssc
from .geometry import (
    GeometryBounds,
    estimated_bounds,
    pdirw,
    pwidth_estimate,
    pwidth_simplex,
    rate_constants,
    simplex_bounds,
    tau_for_method,
)
from .rates import (
    RateCheck,
    RateReport,
    annotate_hidden_points,
    f_star_oracle,
    fitted_contraction,
    project_onto_region,
    verify_gap_domination,
    verify_linear_rate,
    verify_sqrt_rate,
    verify_sufficient_decrease,
    verify_tail_length,
)
from .bench import BenchConfig, emit_plot_data, run_suite, verify_run_dir

__version__ = "0.1.0"
