"""Build script: compiles the optional Cython simulation kernel.

The package works without the extension (a pure-Python kernel twin is
selected at import time), so any build failure here degrades gracefully.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/hierrts/sim/kernels/_fastcore.pyx",
        language_level=3,
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # Cython or numpy missing: ship pure-Python only
    print(f"hierrts: skipping compiled kernel ({exc})")
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
