"""Exact-arithmetic engine for finite-dimensional homotopy algebra:
transfer of A-infinity / L-infinity structures to cohomology, Maurer-Cartan
deformation functors, cohomology jump ideals, and resonance varieties."""

from .grading import BasisElement, GradedSpace
from .multimap import MultiMap, compose_multimaps
from .rings import CoefRing, Ideal, RingMatrix, minors, parse_ring
from .signs import antisym_sign, block_permutations, koszul_sign, unshuffles
from .structures import (
    AInfAlgebra,
    InfMorphism,
    LInfAlgebra,
    LInfModule,
    LInfPair,
    algebra_to_module,
    antisymmetrize,
    jacobi_check,
    module_check,
    morphism_check,
    pair_to_algebra,
    stasheff_check,
)
from .transfer import (
    cohomology_splitting,
    transfer_ainf,
    transfer_linf,
    transfer_pair,
    vanishing_bound,
)
from .deformation import (
    def_ik_membership,
    homotopy_witness_check,
    mc_check,
    tangent_space,
    twist_algebra,
    twist_module,
)
from .resonance import (
    dga_resonance_ideal,
    resonance_ideal,
    subtorus_hypothesis_check,
    tangent_cone_check,
)

__version__ = "0.1.0"

__all__ = [
    "AInfAlgebra", "BasisElement", "CoefRing", "GradedSpace", "Ideal",
    "InfMorphism", "LInfAlgebra", "LInfModule", "LInfPair", "MultiMap",
    "RingMatrix", "algebra_to_module", "antisym_sign", "antisymmetrize",
    "block_permutations", "cohomology_splitting", "compose_multimaps",
    "def_ik_membership", "dga_resonance_ideal", "homotopy_witness_check",
    "jacobi_check", "koszul_sign", "mc_check", "minors", "module_check",
    "morphism_check", "pair_to_algebra", "parse_ring", "resonance_ideal",
    "stasheff_check", "subtorus_hypothesis_check", "tangent_cone_check",
    "tangent_space", "transfer_ainf", "transfer_linf", "transfer_pair",
    "twist_algebra", "twist_module", "unshuffles", "vanishing_bound",
]
