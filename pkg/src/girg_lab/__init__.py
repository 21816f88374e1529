"""GIRG lab: MCD-GIRG generation and expansion auditing."""

__version__ = "0.1.0"
