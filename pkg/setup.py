"""Build the compiled Jacobi kernel.

The extension is optional: without Cython or a working compiler the
package still installs and falls back to the numpy implementation at
import time.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [Extension(
            "catcode._jacobi",
            ["src/catcode/_jacobi.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
            optional=True,
        )],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
