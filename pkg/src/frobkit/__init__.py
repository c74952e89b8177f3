"""frobkit: exact computations in the affine 2-category of algebras and bimodule kernels."""

__version__ = "0.1.0"
