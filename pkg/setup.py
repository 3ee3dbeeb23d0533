"""Build script: compiles the optional native kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so build failures degrade to a warning instead of killing
the install.  To build in place for development:

    python setup.py build_ext --inplace
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat the accelerator as optional: warn instead of failing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: native kernels not built ({exc}); "
            "falling back to the numpy implementation",
            file=sys.stderr,
        )


ext_modules = []
cmdclass = {}
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "softfocus._kernels._native",
                ["src/softfocus/_kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps results bit-identical to the
                # numpy fallback (no fused multiply-add).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    cmdclass["build_ext"] = OptionalBuildExt
except ImportError as exc:
    print(f"warning: {exc}; building without native kernels", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass=cmdclass)
