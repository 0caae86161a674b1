"""Exact hyperoctahedral homology of finite-dimensional involutive algebras.

The package computes homology of truncated functor-homology chain complexes
over the hyperoctahedral category and cross-validates four constructions of
the same invariant: the full complex, the reduced (augmentation-ideal)
complex, the epimorphism complex and the poset-coinvariants pipeline.
"""
from .rings import QQ, ZZ, GF, Ring, RingError, ring_by_name
from .matrices import SparseMatrix

__version__ = "0.1.0"
