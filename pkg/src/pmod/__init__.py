"""Exact persistence modules over (R, <=) and (N, <=), the functors between
them and checkable interleaving certificates."""

from .barcode import INF, Barcode, barcode_from_ranks, decompose, from_barcode
from .bridge import (GradedPresentation, compose_fg, compose_gf, discretize, graded_to_nat,
                     nat_to_graded, realify)
from .exact import FieldElement, Matrix, ceil_div, floor_div
from .interleave import (InterleavingCertificate, ModuleMap, Verdict, canonical_fg_interleaving,
                         canonical_gf_interleaving, canonical_pixel_interleaving,
                         canonical_shift_interleaving, check_natural, equivalence_report, map_at,
                         promote_weak_to_strong, verify_strong, verify_weak)
from .module import (NAT, REAL, TameModule, canonicalize, evaluate, is_lower_stable, pixelize,
                     rank_table, structure_map, translate)
from .oracles import bottleneck_distance, brute_force_interleaving_exists

__version__ = "0.1.0"
