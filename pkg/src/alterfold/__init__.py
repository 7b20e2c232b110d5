"""Exact state sums for an Ising-type 3+1 alterfold TQFT."""
from .exactnum import AlgNum, AlgMatrix, pow2_quarter, parse

__all__ = ["AlgNum", "AlgMatrix", "pow2_quarter", "parse"]
__version__ = "0.1.0"
