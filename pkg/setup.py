"""Build the optional compiled geometry kernels.

If Cython or a C++ compiler is unavailable the package still installs and
falls back to the pure-Python kernels at import time.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("TERRAROUGH_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "terrarough.geometry._ckernels",
                    ["src/terrarough/geometry/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    language="c++",
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError as exc:  # pragma: no cover
        print(f"terrarough: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
