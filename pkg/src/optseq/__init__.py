"""Optimal upper and lower sequence spaces for concrete symmetric sequence spaces."""
