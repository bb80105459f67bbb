"""Build hook for the optional compiled kernel extension.

The package works without the extension: conefix.kernels falls back to the
vectorized numpy implementation when conefix.kernels._core is absent.
"""

import os

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    if not os.path.exists("src/conefix/kernels/_core.pyx"):
        raise SystemExit("missing src/conefix/kernels/_core.pyx")
    ext_modules = cythonize(
        [Extension("conefix.kernels._core", ["src/conefix/kernels/_core.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
