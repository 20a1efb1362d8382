"""picardkit: exact zeta functions over finite fields and cycle-rank bounds."""

__version__ = "0.1.0"
