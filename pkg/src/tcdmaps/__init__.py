"""
Exact TCD maps on black-trivalent bipartite graphs.

Everything is computed over the rationals with ``fractions.Fraction``.
"""

from .btb import (
    BtbGraph,
    LatticeLabel,
    StrandPermutation,
    ban_labels,
    epsilon,
    graph_from_grassmannian,
    is_minimal,
    perfect_orientation,
    validate,
)
from .cluster import (
    Quiver,
    affine_cluster,
    affine_quiver,
    check_move_mutation,
    mutate,
    projective_cluster,
    projective_quiver,
    t_graph_from_quiver,
    x_variables,
    y_variables,
)
from .errors import TcdError
from .lattice import (
    LabelTable,
    collect_labels,
    grassmannian_collection,
    plabic_tiling,
    tiling_graph,
    verify_desargues_map,
    verify_dskp_lattice,
    weakly_separated,
)
from .moves import MoveSite, apply_move, explore, find_move_sites, resplit, spider
from .projective import Hyperplane, ProjPoint, multi_ratio, olr, random_hyperplane, standard_chart
from .sections import compare_cluster_structures, section_graph, section_map
from .tcd import TcdMap, construct, lift, project

__version__ = "0.1.0"
