from poolz._analysis import (
    DegreeProfile,
    NeighborBreakdown,
    SelfReturnRecord,
    degree_rank_correlation,
    degree_resolved_states,
    effective_group_size,
    effective_group_size_curve,
    fraction_pii_above_one,
    hub_cooperation,
    l_alpha,
    l_alpha_all,
    neighbor_degree_breakdown,
    pii_by_degree,
    pii_distribution,
    pii_records,
    random_mixing_baseline,
    render_glyphs,
    same_state_edge_fraction,
    snapshot_lattice,
    update_frequency_by_degree,
)
from poolz._config import ExperimentSpec, render_config, resolve_spec
from poolz._dynamics import (
    Absorption,
    Trajectory,
    UpdateStats,
    equilibrium_frequency,
    run,
    run_game,
    validate_sim_config,
)
from poolz._experiments import (
    cmd_pii,
    cmd_run,
    cmd_snapshot,
    cmd_sweep,
    cmd_thresholds,
    get_recipe,
    list_recipes,
)
from poolz._game import Game, SimConfig, StepResult, fermi_prob, fermi_probs, random_state
from poolz._graph import (
    GraphSpec,
    Network,
    build_ba,
    build_lattice,
    build_network,
    closed_neighborhood,
    degree_histogram,
    dump_edge_list,
    load_edge_list,
    validate_graph_spec,
)
from poolz._payoffs import (
    AttractivenessProfile,
    InvestmentOperator,
    PayoffResult,
    SharingOperator,
    attractiveness,
    brute_force_payoffs,
    build_investment_operator,
    build_sharing_operator,
    evaluate,
    own_share,
    validate_state,
)
from poolz._schedulers import (
    get_scheduler,
    list_schedulers,
    register_scheduler,
    step_asynchronous,
    step_synchronous,
)
from poolz._sweeps import SweepRow, sweep
from poolz._thresholds import ThresholdResult, find_thresholds

__all__ = [
    "Absorption",
    "AttractivenessProfile",
    "DegreeProfile",
    "ExperimentSpec",
    "Game",
    "GraphSpec",
    "InvestmentOperator",
    "NeighborBreakdown",
    "Network",
    "PayoffResult",
    "SelfReturnRecord",
    "SharingOperator",
    "SimConfig",
    "StepResult",
    "SweepRow",
    "ThresholdResult",
    "Trajectory",
    "UpdateStats",
    "attractiveness",
    "brute_force_payoffs",
    "build_ba",
    "build_investment_operator",
    "build_lattice",
    "build_network",
    "build_sharing_operator",
    "closed_neighborhood",
    "cmd_pii",
    "cmd_run",
    "cmd_snapshot",
    "cmd_sweep",
    "cmd_thresholds",
    "degree_histogram",
    "degree_rank_correlation",
    "degree_resolved_states",
    "dump_edge_list",
    "effective_group_size",
    "effective_group_size_curve",
    "equilibrium_frequency",
    "evaluate",
    "fermi_prob",
    "fermi_probs",
    "find_thresholds",
    "fraction_pii_above_one",
    "get_recipe",
    "get_scheduler",
    "hub_cooperation",
    "l_alpha",
    "l_alpha_all",
    "list_recipes",
    "list_schedulers",
    "load_edge_list",
    "neighbor_degree_breakdown",
    "own_share",
    "pii_by_degree",
    "pii_distribution",
    "pii_records",
    "random_mixing_baseline",
    "random_state",
    "register_scheduler",
    "render_config",
    "render_glyphs",
    "resolve_spec",
    "run",
    "run_game",
    "same_state_edge_fraction",
    "snapshot_lattice",
    "step_asynchronous",
    "step_synchronous",
    "sweep",
    "update_frequency_by_degree",
    "validate_graph_spec",
    "validate_sim_config",
    "validate_state",
]
