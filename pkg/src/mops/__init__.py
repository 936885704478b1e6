"""Exact construction and verification of multiple discrete orthogonal polynomials."""
