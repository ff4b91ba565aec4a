"""Ground-to-UAV LoRa link budget: two-ray propagation, coverage and range analysis."""

from .antenna import RxPatchParams, GainPattern, rx_gain, plf, ccdf, equivalent_gain
from .errors import DomainError, SchemaError
from .geometry import LinkGeometry, two_ray_geometry
from .propagation import LinkScenario, PathLossProfile, path_loss, received_power
from .terrain import PRESETS as TERRAINS, TerrainModel, fresnel_parallel

__version__ = "0.1.0"
