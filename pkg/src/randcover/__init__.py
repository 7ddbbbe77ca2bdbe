"""Random covering sets of the torus: simulation, exponents and dimension estimates."""
from .config import VERSION as __version__
from .errors import RandCoverError
from .singular import ShapeSequence, s0_analytic, s0_numeric, phi_s, singular_values
from .torus import TorusRectangle

__all__ = [
    "RandCoverError",
    "ShapeSequence",
    "TorusRectangle",
    "phi_s",
    "s0_analytic",
    "s0_numeric",
    "singular_values",
]
