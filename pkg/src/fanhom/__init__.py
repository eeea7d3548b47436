"""Borel-Moore homology of toric varieties from their fans.

The pipeline: a fan is parsed and validated, the equivariant Chow module of
the associated toric variety is built as an explicit free abelian group on
(cone, monomial) pairs, the Koszul complex against the exterior algebra of
the character lattice is assembled one weight subcomplex at a time, and
each subcomplex is reduced over Z, Q or a prime field by exact integer
elimination.  Reports carry free ranks, torsion coefficients, weights,
conjugation signs and per-prime certification flags.
"""

from .chow import ChowBasisElement, ChowModule
from .errors import InputError, InternalConsistencyError
from .fan import (
    Fan,
    PRESET_NAMES,
    build_fan,
    parse_fan,
    preset_fan,
    product_fan,
    stellar_subdivision,
    validate_fan,
    validate_fan_text,
)
from .homology import (
    HomologyGroup,
    HomologyReport,
    bm_homology_report,
    certification_thresholds,
    homology_at,
    invert_primes,
    oracle_euler,
    oracle_smooth_complete_betti,
)
from .koszul import assemble_subcomplexes, differential_matrix, exterior_basis
from .lattice import (
    SmithDecomposition,
    elementary_divisors,
    imat,
    integer_rank,
    kernel_basis,
    rank_mod_prime,
    saturation_and_complement,
    smith_normal_form,
    unimodular_inverse,
)

__all__ = [
    "ChowBasisElement",
    "ChowModule",
    "Fan",
    "HomologyGroup",
    "HomologyReport",
    "InputError",
    "InternalConsistencyError",
    "PRESET_NAMES",
    "SmithDecomposition",
    "assemble_subcomplexes",
    "bm_homology_report",
    "build_fan",
    "certification_thresholds",
    "differential_matrix",
    "elementary_divisors",
    "exterior_basis",
    "homology_at",
    "imat",
    "integer_rank",
    "invert_primes",
    "kernel_basis",
    "oracle_euler",
    "oracle_smooth_complete_betti",
    "parse_fan",
    "preset_fan",
    "product_fan",
    "rank_mod_prime",
    "saturation_and_complement",
    "smith_normal_form",
    "stellar_subdivision",
    "unimodular_inverse",
    "validate_fan",
    "validate_fan_text",
]
