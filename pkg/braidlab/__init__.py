"""
Desk-scale laboratory for braiding Majorana zero modes encoded in spin lattices
"""

from ._version import __version__

__all__ = ("__version__",)
