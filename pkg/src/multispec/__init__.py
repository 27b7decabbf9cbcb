"""Exact computation of Rumin complexes, spectral-sequence pages and the
spectral complexes of truncated multicomplexes, with a Carnot-group frontend."""

from .carnot import (
    CarnotAlgebraSpec,
    bch_group_law,
    catalog,
    left_invariant_fields,
    polynomial_derham,
    validate_lie,
)
from .filtration import classical_pages, compare
from .hodge import HodgeKit, build_hodge_kit, harmonic_space, hodge_split
from .linalg import Matrix, Subspace, canonical_basis, kernel, image, solve_particular
from .multicomplex import (
    MulticomplexData,
    TotalComplex,
    multicomplex_from_json,
    multicomplex_to_json,
    random_conjugated_multicomplex,
    random_filtered_multicomplex,
    total_cohomology,
    total_complex,
    validate_multicomplex,
)
from .report import Report, build_report, build_stack, emit_diagram, render_figure
from .rumin import RuminOperators, build_rumin, check_d0_partial, rumin_cohomology
from .spectral import SpectralWorkspace
from .star import StarKit, build_star, check_star_duality

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
