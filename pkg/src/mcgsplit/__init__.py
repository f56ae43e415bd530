"""Computational toolkit for mapping class groups of closed surfaces.

Covers the Humphries twist presentations for genus 2..4, the symplectic
representation and splitting homology, exhaustive finite quotient search,
normal curves on one-vertex triangulations, and certified upper bounds for
the Hempel distance of Heegaard splittings.
"""

__version__ = "0.1.0"
