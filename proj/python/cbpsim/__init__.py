"""Collapsed branching processes: simulation, graph generators, and analytic
degree distributions."""

from ._core import (
    AgingFunction,
    BirthLog,
    BirthProcessSpec,
    RateSequence,
    aging_tail_report,
    check_supercritical,
    children_count_histogram,
    collapse,
    count_probabilities,
    default_truncation_pam,
    default_truncation_rrg,
    empirical_distribution,
    estimate_growth,
    generate_pam,
    generate_rrg,
    generate_via_embedding,
    limiting_distribution,
    pam_closed_form,
    rrg_closed_form,
    run_experiment,
    simulate_ctbp,
    solve_malthusian,
    tv_distance,
)

__all__ = [
    "AgingFunction",
    "BirthLog",
    "BirthProcessSpec",
    "RateSequence",
    "aging_tail_report",
    "check_supercritical",
    "children_count_histogram",
    "collapse",
    "count_probabilities",
    "default_truncation_pam",
    "default_truncation_rrg",
    "empirical_distribution",
    "estimate_growth",
    "generate_pam",
    "generate_rrg",
    "generate_via_embedding",
    "limiting_distribution",
    "pam_closed_form",
    "rrg_closed_form",
    "run_experiment",
    "simulate_ctbp",
    "solve_malthusian",
    "tv_distance",
]

__version__ = "0.1.0"
