"""Exact verification tools for extended current algebras.

Subpackages cover: finite-dimensional structure constants (lie_core),
symbolic bracket tables over formal momenta (formal_algebra), normal-ordered
bilinear currents with their commutator anomalies (wick_currents), a
truncated multiplicative-vertex realization used for numeric charge
measurements (vertex_fock), and the command line front end (cli) with its
deterministic report documents (reports).
"""

__version__ = "0.1.0"
