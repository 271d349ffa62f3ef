"""Root systems, Weyl groupoid and reflection maps for (affine) super Yangians of type A."""

from .rootspace import (
    Weight, Root, SimpleRootSystem, CartanMatrix, RootSystemError,
    build_system, bilinear, simple_roots, cartan_matrix, distinguished_cartan_table, dynkin,
)
from .groupoid import ReflectionWord, GroupoidGraph, reflect_root, reflect_system, orbit, shortest_path
from .liesuper import (
    SuperMatrix, sbracket, generators, classical_reflection, check_assignment, resolve_and_verify,
)
from .presentations import (
    Presentation, GeneratorMap, minimalistic, drinfeld, quantum_reflection, resolve_signs,
)
from .rewrite import FreeElement, RewriteSystem, rules_from, complete, reduce, substitute, verify_image

__version__ = "0.1.0"
