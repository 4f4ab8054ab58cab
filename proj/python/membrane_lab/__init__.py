"""Python access to the membrane_lab numerical toolkit."""

from ._core import (
    DegenerateSurfaceError,
    Grid2D,
    PointJet,
    ScalarField,
    WaveProfile,
    TravelingWaveSolution,
    SimConfig,
    Emission,
    RunResult,
    RatioReport,
    __version__,
    affine_subluminal_solution,
    commutator_lambda,
    delta_factor,
    estimate_names,
    estimate_report,
    hardy_family,
    lightspeed_solution,
    membrane_residual,
    null_form,
    residual_convergence,
    run,
    run_cli,
    solve_vtt,
    superluminal_solution,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
