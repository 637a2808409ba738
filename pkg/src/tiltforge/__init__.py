"""Maximal tilted subalgebras of cluster-tilted algebras of Dynkin type."""

from tiltforge.errors import InternalError, MalformedInputError, NotDynkinError, TiltforgeError
from tiltforge.quiver import Arrow, Quiver

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "Quiver",
    "TiltforgeError",
    "NotDynkinError",
    "MalformedInputError",
    "InternalError",
]
