"""Build script for the optional compiled kernel.

The package is pure Python except for fem_accuracy._kernels, a small Cython
module with the polynomial evaluation loops.  If Cython or a C compiler is
missing the extension is skipped and the numpy fallback in _kernels_py is
used at import time instead.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("fem_accuracy._kernels", ["src/fem_accuracy/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
