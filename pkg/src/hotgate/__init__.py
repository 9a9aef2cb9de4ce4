"""Logical ZZ gates between modules of position-noisy trapped qubits."""
from .about import __version__  # noqa
