"""Build script for the compiled coalition-enumeration kernel.

The extension is optional: if Cython or a C compiler is unavailable the
install still succeeds and the package falls back to the pure-Python kernel
in twotier._pure (selected at import time).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("twotier._gray", ["src/twotier/_gray.pyx"], optional=True)],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
