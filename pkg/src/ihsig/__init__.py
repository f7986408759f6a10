"""Exact intersection homology, duality checks and Witt signatures on triangulated pseudomanifolds."""

__version__ = "0.1.0"

from .algebra import QQ, ExactMatrix, FieldSpec, SymmetricFormInvariants, kernel_basis, rank, solve_in_span, symmetric_invariants
from .simplicial import (Chain, NonOrientableError, Orientation, ProductComplex, SimplicialComplex, Subdivision,
                         barycentric_subdivision, boundary, cone, disjoint_union, orient_top,
                         staircase_product, suspension)
from .stratification import (Perversity, ProductStratified, Stratum, StratifiedComplex, ValidationReport,
                             classical, complementary, cone_space, disjoint_union_space, ensure_full,
                             perversity, product_perversity, random_perversity, subdivide, suspension_space,
                             trivial, validate_pseudomanifold)
from .chains import (IHRanks, IntersectionChainComplex, build_complex, comparison_map_ranks,
                     cone_formula_oracle, homology_ranks, intersection_homology, simplex_allowable)
from .covers import (CoverComplex, DeckLabeling, EquivariantComplex, FiniteGroup, build_cover,
                     coinvariants_complex, equivariant_dual_complex, universal_duality_check)
from .products import cross, diagonal_chain, kunneth_basis, kunneth_decompose
from .witt import (FundamentalClass, IntersectionForm, WittReport, duality_check, fundamental_class,
                   global_witt_check, intersection_form, signature, verify_boundary_vanishing,
                   verify_product_formula)
