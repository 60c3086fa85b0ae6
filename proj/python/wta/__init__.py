"""Winners-take-all network dynamics: simulation, equilibrium analysis and opponent selection."""

from ._core import (
    Graph,
    IntegratorOptions,
    WtaError,
    __version__,
    classify,
    connected_components,
    entropy,
    escape,
    evaluate_choice,
    exhaustive_search,
    greedy_search,
    induced_subgraph,
    is_connected,
    is_independent_set,
    laplacian,
    linearize,
    nine_agent_instance,
    random_connected_graph,
    random_graph,
    reverse_vector_field,
    run_cli,
    simulate,
    sweep_initial_value,
    symmetric_eigenvalues,
    vector_field,
)

__all__ = [
    "Graph",
    "IntegratorOptions",
    "WtaError",
    "__version__",
    "classify",
    "connected_components",
    "entropy",
    "escape",
    "evaluate_choice",
    "exhaustive_search",
    "greedy_search",
    "induced_subgraph",
    "is_connected",
    "is_independent_set",
    "laplacian",
    "linearize",
    "nine_agent_instance",
    "random_connected_graph",
    "random_graph",
    "reverse_vector_field",
    "run_cli",
    "simulate",
    "sweep_initial_value",
    "symmetric_eigenvalues",
    "vector_field",
]
