"""Build hook for the optional compiled kernel.

The package is fully functional without the extension; the import-time
backend selection in bakerrays.kernels falls back to the pure-Python
implementation when bakerrays._kernels is absent.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("bakerrays._kernels", ["src/bakerrays/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
