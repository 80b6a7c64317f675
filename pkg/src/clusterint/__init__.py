"""Exact symbolic toolkit for polynomial integrable systems obtained by
linearizing Poisson structures at vanishing points of log-canonical
coordinate systems, with the three type-A families (Schubert cells,
the Berenstein-Fomin-Zelevinsky cluster on SL(n+1), and the dual
Poisson-Lie group of GL(n)) built in.
"""

__version__ = "0.1.0"
