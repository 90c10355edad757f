"""Build the optional compiled kernels.

The package works without them: ``symsbfe.kernels`` falls back to the
pure-Python implementation when ``symsbfe._kernels`` cannot be imported.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: install the pure-Python package only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "symsbfe._kernels",
                ["src/symsbfe/_kernels.pyx"],
                # keep IEEE semantics identical to the Python fallback
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
