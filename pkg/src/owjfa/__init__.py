"""Workbench for deterministic finite automata in one-way jumping mode."""

__version__ = "0.1.0"
