from setuptools import Extension, setup

from Cython.Build import cythonize
import numpy

# build in place with: python setup.py build_ext --inplace
extensions = [
    Extension(
        "hkfractal.gflinalg._speedups",
        ["src/hkfractal/gflinalg/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level="3"))
