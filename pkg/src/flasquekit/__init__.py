"""flasquekit: exact group cohomology of lattices over finite groups."""

__version__ = "0.1.0"
