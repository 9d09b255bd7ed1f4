"""Build script: compiles the optional statevector kernels.

The compiled extension is a pure accelerator. If the toolchain is missing
(or SABLAB_SKIP_EXT=1), the build proceeds without it and the package falls
back to the numpy kernels at import time.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("SABLAB_SKIP_EXT", "0") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sablab._kernels._core",
                    sources=["src/sablab/_kernels/_core.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # toolchain missing: fall back to numpy kernels
        print(f"sablab: skipping compiled kernels ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
