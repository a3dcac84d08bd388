import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; solitonlab.kernels falls back at import
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("SOLITONLAB_NO_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "solitonlab._kernels",
                ["src/solitonlab/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no FMA contraction: results must match the numpy fallback bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
