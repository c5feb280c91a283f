import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CANLIFT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "canlift._kernels",
                    ["src/canlift/_kernels.pyx"],
                    language="c++",
                    extra_compile_args=["-O3", "-std=c++17"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython: the pure-Python kernels are used
        ext_modules = []

setup(ext_modules=ext_modules)
