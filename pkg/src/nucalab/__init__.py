"""nucalab: exact tooling for linear non-uniform cellular automata over GF(p)."""

__version__ = "0.1.0"
