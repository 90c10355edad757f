"""Cost-aware evaluation of symmetric Boolean functions with random inputs."""
from .core import (
    Instance,
    InstanceError,
    PartialAssignment,
    ValueVector,
    is_certificate,
    load_instance,
    parse_instance,
)
from .goal import GoalFunction, build_goal_graph
from .oracle import (
    l_optimal_cost,
    make_strategy,
    monte_carlo_cost,
    opt_expected_cost,
    strategy_expected_cost,
    verification_cost,
)
from .strategies import STRATEGY_NAMES

__version__ = "0.1.0"
