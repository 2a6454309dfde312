"""
MaassLab - numerical laboratory for even Hecke-Maass cusp forms on SL2(Z)\\H
"""

__version__ = "0.1.0"
