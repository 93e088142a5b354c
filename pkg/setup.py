from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "decole._gd_cy",
                ["src/decole/_gd_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython: install pure-Python only; the gradient-descent kernel
    # falls back to the numpy implementation at import time.
    extensions = []

setup(ext_modules=extensions)
