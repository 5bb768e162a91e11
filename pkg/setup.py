"""Build script for the optional compiled search kernel.

The package is pure Python plus one Cython extension that accelerates the
exhaustive constellation search.  If Cython or a C compiler is unavailable
the build falls back to the NumPy kernel; everything still works, just
slower.  The extension is compiled without FMA contraction so that the
compiled and NumPy paths produce bit-identical results.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    import numpy
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "ofdmphase._kernels._search_cy",
                sources=["src/ofdmphase/_kernels/_search_cy.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off: keep mul/add rounding identical to the
                # NumPy kernel (no fused multiply-add).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": 3},
    )
else:
    extensions = []

setup(ext_modules=extensions)
