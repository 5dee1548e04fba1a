"""Compiler and noisy-simulation toolkit for qubit pairs encoded in ququarts."""

__version__ = "0.1.0"
