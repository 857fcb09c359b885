"""Convertible designated confirmer signatures, verifiable signcryption,
their sigma-protocol confirmations, and a desk-scale security-game
harness."""

from .cdcs import get_scheme
from .groups import get_backend, seeded_rng
from .signcrypt import EtStE

__version__ = "0.1.0"
__all__ = ["get_backend", "get_scheme", "seeded_rng", "EtStE"]
