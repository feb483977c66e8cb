"""Build script. Compiles the optional Cython kernel extension.

The package works without the extension (a NumPy reference backend is
selected at import time), so a failed compile downgrades to a warning
instead of aborting the install.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "fracspace._kernels._fast",
                ["src/fracspace/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # no Cython / no compiler: fall back to pure python
    sys.stderr.write(f"fracspace: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
