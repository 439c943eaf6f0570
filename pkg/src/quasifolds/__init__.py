"""Exact affine transverse geometry.

Leaf-space quasifold models of linear torus foliations, finitely generated
affine pseudogroups and their germ computations, affine action groupoids,
and suspension complexes realizing affine pseudogroups as holonomy data.
"""

__version__ = "0.1.0"
