"""Build script: compiles the Cython hot-loop kernels when possible.

The package works without the extension (a pure-Python/numpy fallback is
selected at import time), so a failed extension build degrades to a slower
install instead of aborting.
"""

from setuptools import Extension, setup


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "gpexcited._kernels",
        ["src/gpexcited/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
