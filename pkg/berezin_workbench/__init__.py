"""
Berezin Workbench - Numerical Checks of Strict Deformation Quantization

A standalone library for quantizing polynomials on products of 2-spheres into
matrix algebras and checking, at desk scale, the axioms and spin-model
correspondences that go with it.
"""
