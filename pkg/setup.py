"""Build the optional Cython kernel.

If Cython or a C compiler is unavailable the package still installs and uses
the numpy fallback in ``ladderlab._rs_numpy``.
"""

import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ladderlab._rs_kernel",
                ["src/ladderlab/_rs_kernel.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # noqa: BLE001
    print(f"ladderlab: building without the compiled kernel ({exc})")
    ext_modules = []

setup(ext_modules=ext_modules)
