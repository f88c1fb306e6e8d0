"""Ammann bars for cut-and-project tilings, found through subperiods and fine projections."""

__version__ = "0.1.0"

from .slope import (  # noqa: E402
    Slope,
    Subperiod,
    ammann_beenker,
    cyrenaic,
    golden_octagonal,
    integer_subperiods,
    is_characterized_by_subperiods,
    lifted_subperiods,
    penrose,
    rauzy,
)
from .projection import check_projection, fine_projection, orthogonal_projection  # noqa: E402
from .multigrid import generate_patch, lift, shadow_patch  # noqa: E402
from .atlas import atlas, region, window  # noqa: E402
from .ammann import decorated_tileset  # noqa: E402

__all__ = [
    "Slope",
    "Subperiod",
    "ammann_beenker",
    "atlas",
    "check_projection",
    "cyrenaic",
    "decorated_tileset",
    "fine_projection",
    "generate_patch",
    "golden_octagonal",
    "integer_subperiods",
    "is_characterized_by_subperiods",
    "lift",
    "lifted_subperiods",
    "orthogonal_projection",
    "penrose",
    "rauzy",
    "region",
    "shadow_patch",
    "window",
]
