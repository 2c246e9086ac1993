"""Median graphs, convex sets and the space of wreaths."""

from .actions import (
    GroupAction,
    GroupElement,
    WreathElement,
    WreathModel,
    apply_wreath_element,
    augment_free_basepoint,
    properness_ball,
    stabilizer,
    trivial_action,
)
from .checks import CheckReport, replay, run_check_suite
from .convex import ConvexSet, enumerate_convex, f_distance, f_interval_contains, f_median
from .errors import *  # noqa: F401,F403
from .io import ModelDocument, export_dot, load_document, parse_document
from .lamplighter import (
    GridConfig,
    GridWreath,
    Rectangle,
    elementary_moves,
    grid_action,
    grid_delta,
    hyperplane_count,
    tc,
)
from .median import (
    MedianGraph,
    Wall,
    convex_hull,
    gate,
    gate_pair,
    interval,
    median,
    median_closure,
    median_hull,
    verify_median_graph,
    walls,
    walls_separating,
)
from .oracles import bfs_oracle
from .wreath import Labelling, Wreath, WreathSpace

__version__ = "0.1.0"
