"""Combinatorics of the Weyl group D_m and its spin double cover, with the
numerical machinery (Bruhat decomposition, Frenet frames, path lifting) used
to classify spaces of locally convex curves on spheres.
"""

from ._kernels import COMPILED as KERNELS_COMPILED

__version__ = "0.1.0"

__all__ = ["KERNELS_COMPILED", "__version__"]
