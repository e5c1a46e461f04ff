from ._stokes_mpe import (
    ConvergenceRow,
    ManufacturedSolution,
    Mesh,
    ParameterSet,
    QuadratureRule,
    StudyConfig,
    __version__,
    build_two_square_mesh,
    emit_report,
    facet_counts,
    observed_rate,
    quadrature_rule,
    run_convergence_study,
    solve_single,
    uniform_refine,
)

__all__ = [
    "ConvergenceRow",
    "ManufacturedSolution",
    "Mesh",
    "ParameterSet",
    "QuadratureRule",
    "StudyConfig",
    "__version__",
    "build_two_square_mesh",
    "emit_report",
    "facet_counts",
    "observed_rate",
    "quadrature_rule",
    "run_convergence_study",
    "solve_single",
    "uniform_refine",
]
