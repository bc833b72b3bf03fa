"""
Architope lab: local models glued over compact partitions of R^d, and the
error functionals that tell classical, local and strict L^p convergence apart.
"""

__version__ = "0.1.0"
