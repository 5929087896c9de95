"""multcoh: exact-arithmetic checks that combinatorial cup products agree
with the composition product on Ext, over finite instances."""

__version__ = "0.1.0"

from .linalg import FieldSpec, GF, QQ, Matrix, Subspace

__all__ = ["FieldSpec", "GF", "QQ", "Matrix", "Subspace", "__version__"]
