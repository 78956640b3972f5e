"""Build hooks: compile the optional density kernel when Cython is available.

The package is fully functional without the extension; gazechart.kernels
falls back to a numpy implementation at import time. Any failure here is
therefore reported but never fatal.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gazechart/kernels/_kde_cy.pyx"],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
        if sys.platform != "win32":
            # -O2 alone leaves the accumulation loop scalar on older gcc;
            # contraction is disabled so summation bits never depend on
            # whether the target ISA has FMA
            ext.extra_compile_args += ["-O3", "-ffp-contract=off"]
except Exception as exc:  # noqa: BLE001 - build must degrade, not break
    print(f"gazechart: skipping compiled kernel ({exc!r})", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
