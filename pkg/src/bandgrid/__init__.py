"""Single-pass band grid classifier."""
from .balance import IncrementPolicy, Strategy, make_policy
from .errors import BandGridError, ConfigurationError, DataError
from .grid import BandRow, Cell, ContributionMode, Grid, band_index, init_grid
from .kernels import BACKEND
from .preprocess import NormStats, fit_normalizer, gap_boundaries, normalize, uniform_boundaries

__version__ = "0.1.0"
