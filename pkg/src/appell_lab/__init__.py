"""Theta q-series, Appell-Lerch sums, automorphy cocycles and Zwegers' completion.

The numerical kernels come from a compiled extension when it is available
and from numpy otherwise; ``appell_lab.kernels.BACKEND`` says which.
"""

__version__ = "0.1.0"
