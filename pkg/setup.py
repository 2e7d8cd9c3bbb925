"""Build script for the optional compiled placement kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the placement sweep faster.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "adfit._kernels._sweep_cy",
                ["src/adfit/_kernels/_sweep_cy.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
