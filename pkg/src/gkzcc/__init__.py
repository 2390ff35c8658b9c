"""Exact combinatorial invariants of A-hypergeometric systems.

Umbrellas, characteristic-cycle multiplicities and their parameter
jumps, slopes and Gevrey irregularity dimensions, computed from lattice
and polytope data with exact rational arithmetic.
"""
from .charcycle import (CycleComponent, JumpReport, char_cycle, convex_reduction, exceptional_query,
                        generic_mult, jump, mult_by_union_volume, rank, simplicial_cm_test)
from .errors import *  # noqa: F401,F403
from .gevrey import (GevreyReport, SlopeReport, direct_sum, generic_irregularity, irregularity_at,
                     product_rule, semicontinuity_scan, slopes_along)
from .lattice import (INFINITE, IntMatrix, Lattice, coset_reps, in_integer_image, lattice_index, saturate,
                      smith_normal_form)
from .perturbed import PerturbedScalar
from .polyhedra import (Polytope, cone_face_lattice, facet_hyperplanes, normalized_volume,
                        pointedness_certificate, union_volume)
from .semigroup import (Parameter, RankingData, SemigroupView, holes, in_semigroup, in_shifted_semigroup,
                        ranking_data, ranking_lattice)
from .umbrella import (ALL, Umbrella, WeightSpec, compute_umbrella, convexity_report, is_F_homogeneous,
                       restricted_matrix)

__version__ = "0.1.0"
