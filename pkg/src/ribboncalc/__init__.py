"""ribboncalc: exact ribbon-graph combinatorics for moduli-space cell complexes.

Subpackages are small and flat; start from :mod:`ribboncalc.ribbon` for the
core graph type and :mod:`ribboncalc.cli` for the command-line entry point.
"""

__version__ = "0.1.0"
