import os

from setuptools import Extension, setup

# The compiled elimination kernel is optional: MODBETTI_PURE=1 (or a missing
# Cython) builds a pure-Python package that falls back to the numpy kernels.
ext_modules = []
if os.environ.get("MODBETTI_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "modbetti._kernels",
                    ["src/modbetti/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
