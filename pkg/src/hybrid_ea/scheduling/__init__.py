"""Single-machine scheduling with release and delivery times."""

from ..engine import hybrid_elitist_select
from .conditions import DesignReport, check_design_conditions, summarize_top_level
from .instance import Job, Schedule, SchedulingInstance, evaluate_schedule, lateness
from .jackson import (
    EpsilonPartition,
    aux_fitness_by_enumeration,
    aux_fitness_max,
    jackson_prefix_level,
    jackson_schedule,
    jackson_schedules,
    long_jobs,
    repositioning_maps,
)
from .operators import PrefixRecombinationFamily, SwapMutationFamily, mutate, recombine
from .problem import SchedulingProblem, improvement_probabilities, satisfactory, scheduling_strategy

__all__ = [
    "DesignReport", "EpsilonPartition", "Job", "PrefixRecombinationFamily", "Schedule",
    "SchedulingInstance", "SchedulingProblem", "SwapMutationFamily", "aux_fitness_by_enumeration",
    "aux_fitness_max", "check_design_conditions", "evaluate_schedule", "hybrid_elitist_select",
    "improvement_probabilities", "jackson_prefix_level", "jackson_schedule", "jackson_schedules",
    "lateness", "long_jobs", "mutate", "recombine", "repositioning_maps", "satisfactory",
    "scheduling_strategy", "summarize_top_level",
]
