"""Builds the optional compiled kernel.

The extension is marked optional: if the build fails (no compiler, no
Cython), the package installs anyway and falls back to the pure-Python
kernel selected at import time in qchess._backend.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qchess._kernels", ["src/qchess/_kernels.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
