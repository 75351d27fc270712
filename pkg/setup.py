"""Build script: compiles the optional C extension for the hot control-loop kernels.

The package is fully functional without the extension (a pure-Python
implementation of the same kernels is selected at import time), so a failed
compile only costs speed, not features.
"""

import sys

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rtlplan._kernels._core",
                ["src/rtlplan/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    sys.stderr.write(f"rtlplan: skipping compiled kernels ({exc}); pure-Python fallback will be used\n")
    ext_modules = []

setup(ext_modules=ext_modules)
