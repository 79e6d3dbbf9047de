import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("STRFP_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "strfp._kernels_cy",
                    sources=["src/strfp/_kernels_cy.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
