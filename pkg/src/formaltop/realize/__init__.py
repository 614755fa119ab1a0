"""Numeric realizability: a PCA on the naturals, universe codes and stages."""
