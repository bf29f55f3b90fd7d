"""Exact Zariski decompositions and an arithmetic R-divisor calculator on P^1 over Z.

The compiled extension carries all functionality; this package re-exports it.
Exact rationals cross the boundary as ``"p/q"`` strings (plain ints are
accepted on input), so they can be handed to :class:`fractions.Fraction`
without loss.
"""

try:
    # Installed layout: the extension lives inside the package directory.
    from ._zariskilab import *  # noqa: F401,F403
    from . import _zariskilab as _ext
except ImportError:
    # Build-tree layout: the extension sits next to the package on sys.path.
    from _zariskilab import *  # noqa: F401,F403
    import _zariskilab as _ext

__version__ = "0.1.0"
__all__ = [name for name in dir(_ext) if not name.startswith("_")]
