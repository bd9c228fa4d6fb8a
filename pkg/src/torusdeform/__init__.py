"""Kronrod-Reeb graphs and deformation-group diagrams for Morse functions
on the flat 2-torus."""

__version__ = "0.1.0"

from . import algebra, deformation, errors, field, reeb  # noqa: F401
