"""Exact derivations and first cohomology of order-three triangular algebras."""

from __future__ import annotations

from .algebra import Bimodule, Pairing, StructureAlgebra, Violation
from .derivations import (
    CornerData,
    LinearMap,
    derivation_space,
    extract_corners,
    h1_dim,
    inner_derivation_space,
    is_derivation,
    reconstruct,
)
from .hom import HomTriple, compatible_triples, hom_space, joint_rosenblum, zr_space
from .instances import generate_instance, load_fixture, parse_instance
from .triangular import TriAlgebra, TriSystem, build_triangular
from .verify import CohomologyReport, verify_theorems

__version__ = "0.1.0"

__all__ = [
    "Bimodule",
    "CohomologyReport",
    "CornerData",
    "HomTriple",
    "LinearMap",
    "Pairing",
    "StructureAlgebra",
    "TriAlgebra",
    "TriSystem",
    "Violation",
    "build_triangular",
    "compatible_triples",
    "derivation_space",
    "extract_corners",
    "generate_instance",
    "h1_dim",
    "hom_space",
    "inner_derivation_space",
    "is_derivation",
    "joint_rosenblum",
    "load_fixture",
    "parse_instance",
    "reconstruct",
    "verify_theorems",
    "zr_space",
]
