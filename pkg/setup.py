"""Build the optional Cython kernels.

If Cython or a C compiler is missing the package still installs; the pure
numpy kernels in ``swapqkd._kernels_py`` are used instead.
"""
import os

import numpy as np
from setuptools import setup

ext_modules = []
if not os.environ.get("SWAPQKD_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "swapqkd._kernels",
                    ["src/swapqkd/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
