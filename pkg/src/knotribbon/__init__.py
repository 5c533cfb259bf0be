"""Exact knot invariants from PD codes and ribbon-cobordism obstructions."""
from .exactalg import AbelianGroup, LaurentPoly, det_bareiss, interpolate, rank_mod_p, smith_normal_form
from .invariants import (
    alexander,
    betti_profile,
    checkerboard,
    determinant,
    double_cover_homology,
    goeritz,
    homology_of_sum,
)
from .knotstore import KnotRecord, KnotStore, builtin, euler_characteristic, torus_2q
from .obstruct import (
    CobordismContext,
    ObstructionReport,
    gilmer_check,
    livingston_bounds,
    obstruct_pair,
    paper_m_bound,
    stabilize,
)
from .pdcode import PDCode, connected_sum, mirror, orient, parse_pd, trace_faces

__version__ = "0.1.0"
