"""Builds the optional compiled interval kernel; falls back silently."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CURVE_ARRANGE_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("curve_arrange.funcmodel._kernel",
                       ["src/curve_arrange/funcmodel/_kernel.pyx"],
                       libraries=["m"],
                       extra_compile_args=["-O2", "-ffp-contract=off"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
