"""Build glue for the optional compiled grid kernel.

The package works without the extension (gridsynth falls back to the
pure-Python kernel), so build failures are downgraded to a warning.
"""
import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qsprep/_gridcore.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    warnings.warn(f"skipping compiled grid kernel: {exc}")

setup(ext_modules=ext_modules)
