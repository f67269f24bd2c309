"""Surface bundles over surfaces with many fiberings: constructions, fiberings, monodromy and bounds."""

from .bounds import bounds_report, lower_bound, upper_bound
from .construction import LabeledGraph, SectionSumBundle, build_section_sum, line_graph_family
from .covers import CoveringMap, cyclic_cover, deck_action_h1, validate_covering
from .fibering import (
    CoverConstruction,
    all_certificates,
    basic_construction,
    certify_distinct,
    enumerate_cover_fiberings,
    enumerate_fiberings,
    fiberings,
    tower_construction,
    verify_certificate,
)
from .monodromy import cover_fibering_monodromy, is_torelli, push_monodromy, signature
from .surfaces import ClosedSurface, FiniteGroup, FreeActionData

__version__ = "0.1.0"
