"""Quantum-walk kernels for weighted and complete graphs."""

__version__ = "0.1.0"
