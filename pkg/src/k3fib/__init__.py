"""Exact lattice arithmetic and an elliptic-fibration classifier for K3 Picard lattices."""

from .catalog import CatalogEntry, Options, Report, classify, classify_lattice, load_catalog, run_catalog
from .criteria import Verdict, replay
from .errors import LatticeError
from .lattice import Lattice, direct_sum, diagonal, U

__version__ = "0.1.0"

__all__ = ["CatalogEntry", "Lattice", "LatticeError", "Options", "Report", "U", "Verdict",
           "classify", "classify_lattice", "diagonal", "direct_sum", "load_catalog", "replay",
           "run_catalog"]
