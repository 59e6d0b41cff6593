"""Independence redundancy degree (IRD) modelling and simulation."""

from .algebra import (
    IRD,
    ComparisonResult,
    DimensionValue,
    PathParam,
    compare,
    dimension_value,
    ird_from_outages,
    ird_of_model,
    to_live,
    to_outage,
    weakest_dimension,
)
from .combination import CfAssignment, CombinationFunction, add, combine_dimension, subtract
from .core_model import (
    ComponentRef,
    Dimension,
    RedundancyPath,
    SystemModel,
    check_independence,
    coherence_groups,
    validate_model,
)
from .factor_graph import KnowledgeBase, audit, default_kb, expand
from .rng import uniform01
from .simulator import (
    RngSpec,
    analytic_outage_probability,
    redundancy_curve,
    run_outage_scenario,
    run_weakness_scenario,
)

__version__ = "0.1.0"
