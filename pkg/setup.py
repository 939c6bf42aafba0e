"""Build script for the optional Cython kernel extension.

The package works without the extension (pure-Python kernels are selected
at import time), so a failed cythonize/compile degrades gracefully.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    import numpy as np

    ext_modules = cythonize(
        "src/casdec/kernels/_ckernels.pyx",
        language_level=3,
    )
    include_dirs = [np.get_include()]
except Exception:  # no Cython / no compiler: install pure-Python only
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
