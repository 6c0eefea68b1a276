# Builds the optional compiled integrator core. The package works without it
# (a pure-Python kernel is selected at import time), so a failed extension
# build must not abort the install.
import os

from setuptools import setup

ext_modules = []
if os.environ.get("BIHARM_LAB_PURE") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "biharm_lab._core",
                    ["src/biharm_lab/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        print(f"biharm-lab: skipping compiled core ({exc}); pure-Python kernel will be used")

setup(ext_modules=ext_modules)
