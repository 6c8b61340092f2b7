"""Exact certificates for nontrivial SU(2) representations of 3-manifolds."""

__version__ = "0.1.0"
