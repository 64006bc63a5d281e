"""Edge-weight annotation of road networks from trips."""

from ._core import (
    ConvergenceError,
    LinkRecord,
    RoadGraph,
    RoadweightsError,
    RunConfig,
    SyntheticSpec,
    TagSchedule,
    Trip,
    ValidationError,
    annotate,
    evaluate,
    generate_synthetic,
    load_dataset,
    pagerank,
    pagerank_histogram,
    split,
    ssl,
    tag_weights,
    trip_cost,
    write_weights,
)

__all__ = [
    "ConvergenceError",
    "LinkRecord",
    "RoadGraph",
    "RoadweightsError",
    "RunConfig",
    "SyntheticSpec",
    "TagSchedule",
    "Trip",
    "ValidationError",
    "annotate",
    "evaluate",
    "generate_synthetic",
    "load_dataset",
    "pagerank",
    "pagerank_histogram",
    "split",
    "ssl",
    "tag_weights",
    "trip_cost",
    "write_weights",
]
