"""Counting, verification and entropy-audit tools for the bound T^2 <= 2RGB
on rainbow triangles in edge-3-colored graphs."""

from .counting import (
    BoundReport,
    RainbowTriangle,
    count_rainbow_triangles_fast,
    count_rainbow_triangles_oracle,
    enumerate_rainbow_triangles,
    is_rainbow_in_order,
    verify_bound,
)
from .entropy import (
    AuditLedger,
    DerivedVariable,
    FiniteDistribution,
    Outcome,
    audit_proof,
    build_joint,
    check_conditional_independence,
    conditional_entropy,
    entropy,
)
from .errors import (
    DuplicatePair,
    InstanceTooLarge,
    NoRainbowTriangle,
    NotInDomain,
    NotInImage,
    ParseError,
    RainbowError,
    SelfLoop,
    SupportTooLarge,
    VertexOutOfRange,
)
from .graph import (
    BLUE,
    GREEN,
    RED,
    Color,
    ColoredEdge,
    ColoredGraph,
    build_graph,
    color_counts,
    neighbors,
    parse_edge_list,
    random_colored_graph,
    serialize_edge_list,
)
from .injection import (
    InjectionReport,
    SxTuple,
    TxTuple,
    apply_injection,
    enumerate_S,
    enumerate_T,
    in_S,
    in_T,
    invert_injection,
    verify_injection,
)
from .search import SearchResult, exhaustive_search, hill_climb, tightness_report

__version__ = "0.1.0"
