"""Almost-universality classifier for ternary inhomogeneous quadratic polynomials."""

__version__ = "0.1.0"
