"""Expected signed-zero densities of heat-smoothed random sections of
discrete hermitian line bundles on closed triangle meshes."""

try:
    from ._core import (  # installed layout: extension lives in the package
        Setup,
        SurfaceMesh,
        ZeroflowError,
        icosahedron,
        icosphere,
        load_mesh,
        mean_principal_phase,
    )
except ImportError:  # in-tree testing: extension on sys.path
    from _core import (
        Setup,
        SurfaceMesh,
        ZeroflowError,
        icosahedron,
        icosphere,
        load_mesh,
        mean_principal_phase,
    )

__all__ = [
    "Setup",
    "SurfaceMesh",
    "ZeroflowError",
    "icosahedron",
    "icosphere",
    "load_mesh",
    "mean_principal_phase",
]
