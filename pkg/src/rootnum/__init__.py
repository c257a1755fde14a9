"""Exact sign engine for root numbers of curves twisted by Artin representations."""
__version__ = "0.1.0"
