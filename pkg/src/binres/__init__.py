"""binres: exact binomial residues, their matroid combinatorics and hypergeometric systems."""

__version__ = "0.1.0"
