"""bwt-lcp - External-memory BWT and LCP construction for string collections."""

__version__ = "0.1.0"
