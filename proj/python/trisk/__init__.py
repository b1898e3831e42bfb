"""DEC operators and a TRiSK-type rotating shallow-water solver."""

from ._core import (
    Mesh,
    Operators,
    Simulation,
    TriskError,
    __version__,
    build_periodic_quad,
    build_periodic_trihex,
    build_R,
    build_W,
    convergence,
    mesh_from_spec,
    preset_names,
    verify,
)

__all__ = [
    "Mesh",
    "Operators",
    "Simulation",
    "TriskError",
    "__version__",
    "build_periodic_quad",
    "build_periodic_trihex",
    "build_R",
    "build_W",
    "convergence",
    "mesh_from_spec",
    "preset_names",
    "verify",
]
