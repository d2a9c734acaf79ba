"""Build script for the optional C extension.

The package is fully functional without the compiled kernels (it falls back
to the numpy implementations in ``wordgroups._kernels.pykernels``), so a
failed extension build is downgraded to a warning instead of aborting the
install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"skipping C extension build ({exc}); "
                      "pure-Python kernels will be used")
        return []
    ext = Extension(
        "wordgroups._kernels._speedups",
        ["src/wordgroups/_kernels/_speedups.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Keep the install alive when no C compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"building C extension failed ({exc}); "
                          "pure-Python kernels will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "pure-Python kernels will be used")


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
