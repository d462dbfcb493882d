"""Exact algebra of G-spin models: quantum doubles, field algebras, crossed
products and Jones basic constructions on finite lattice windows."""

__version__ = "0.1.0"
