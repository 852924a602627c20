from .continuation import TrackingFailure
from .graph import DecompositionGraph, Edge, Verdict, assemble_graph, compare_with_trunk
from .pieces import (
    ClusteringError,
    ExceptionalFiber,
    FilledTorus,
    MonodromyData,
    SeifertPiece,
    TorusFilling,
    fill_solid_tori,
    riemann_hurwitz_from_ramification,
    riemann_hurwitz_total,
    vertical_monodromy,
    zone_pieces,
)
from .sample import FibreSample, SampleScales, sample_fibre
from .trunk import TrunkStub, load_trunk, parse_trunk

__all__ = [
    "ClusteringError",
    "DecompositionGraph",
    "Edge",
    "ExceptionalFiber",
    "FibreSample",
    "FilledTorus",
    "MonodromyData",
    "SampleScales",
    "SeifertPiece",
    "TorusFilling",
    "TrackingFailure",
    "TrunkStub",
    "Verdict",
    "assemble_graph",
    "compare_with_trunk",
    "fill_solid_tori",
    "load_trunk",
    "parse_trunk",
    "riemann_hurwitz_from_ramification",
    "riemann_hurwitz_total",
    "sample_fibre",
    "vertical_monodromy",
    "zone_pieces",
]
