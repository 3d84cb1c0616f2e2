"""Build script: compiles the optional C evaluation/search kernel.

The package works without the extension (a pure-Python kernel with the
same interface is selected at import time), so a failed compile is not
fatal to installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("fmtlab._ckernel", ["src/fmtlab/_ckernel.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
