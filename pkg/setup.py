import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FRACSCATTER_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "fracscatter._ckernels",
                    ["src/fracscatter/_ckernels.pyx"],
                    extra_compile_args=["-O3", "-fno-math-errno", "-fcx-limited-range"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
