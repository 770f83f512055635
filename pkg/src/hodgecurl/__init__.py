"""Self-adjoint curl operators on tetrahedral meshes with Lagrangian boundary conditions.

Setting ``HODGECURL_THREADS`` before the first import caps the BLAS and
OpenMP thread pools used by numpy and scipy.
"""

import os as _os

_threads = _os.environ.get("HODGECURL_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .errors import HodgeCurlError  # noqa: E402
from .mesh_complex import OrientedComplex3, SurfaceComplex, build_complex, extract_boundary  # noqa: E402

__version__ = "0.1.0"

__all__ = ["HodgeCurlError", "OrientedComplex3", "SurfaceComplex", "build_complex", "extract_boundary", "__version__"]
