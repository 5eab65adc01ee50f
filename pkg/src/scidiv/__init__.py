"""Diversity and polarization of research portfolios on a science basemap."""

__version__ = "0.1.0"

from scidiv.basemap import (
    Basemap,
    CitationMatrix,
    build_basemap,
    cosine_similarity,
    load_basemap,
    read_citation_matrix,
    save_basemap,
)
from scidiv.distance import (
    DistanceMatrix,
    cosine_distance_matrix,
    path_length_distribution,
    unweighted_path_matrix,
    weighted_path_matrix,
)
from scidiv.diversity import DiversityScore, diversity_report, stirling, stirling_uniform
from scidiv.profile import (
    CompetenceMap,
    PaperRecord,
    ResearchProfile,
    aggregate_profiles,
    filter_orgs,
    overlay,
    read_profiles,
    read_records,
)
from scidiv.ranking import RankTable, assign_ranks, build_rank_table, rank_deltas, spearman
from scidiv.render import LayoutCoords, export_map, layout_fr
from scidiv.synth import SynthSpec, gen_basemap_path, gen_profile
