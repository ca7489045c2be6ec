"""
Formality Toolkit Core Module

This package contains exact homological algebra over F_l and Q that coordinates:
- Exact linear algebra (rank, kernels, characteristic polynomials, eigenspaces)
- Complexes with endomorphisms and the ho-morphism calculus
- Tate/Weil weight gradings, purity checks and the truncation zig-zag
- Weighted dg-algebras, cohomology algebras and Massey products
- Free models with controlled weights and N-formality witnesses
- Certificate emission and re-verification from the command line
"""

__version__ = "1.0.0"
__author__ = "Formality Toolkit Development Team"
