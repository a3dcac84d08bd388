"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting SOLITONLAB_PURE_PYTHON=1
forces the numpy implementation.  Both expose the same functions.
"""

import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("SOLITONLAB_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

philox4x32 = active.philox4x32
uniforms = active.uniforms
count_phase_window = active.count_phase_window
leapfrog = active.leapfrog
leapfrog_probe = active.leapfrog_probe
phase_rotate = active.phase_rotate


def available_backends():
    backends = {"python": python_backend}
    if compiled_backend is not None:
        backends["cython"] = compiled_backend
    return backends
