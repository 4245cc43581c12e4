"""Singular tropical surfaces through Mikhalkin-position points."""
