from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

ext_modules = [
    Extension(
        "chromanoise._kernels._noise_cy",
        sources=["src/chromanoise/_kernels/_noise_cy.pyx"],
        include_dirs=[np.get_include()],
        # No -ffast-math: the compiled kernel must stay bit-identical to the
        # pure-Python fallback (strict IEEE semantics, plain libm calls).
        extra_compile_args=["-O2"],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level=3))
