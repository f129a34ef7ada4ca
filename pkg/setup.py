"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so build failures only cost speed, never correctness.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("tailquant: Cython not available, building without compiled kernels")
        return []
    return cythonize(
        [
            Extension(
                "tailquant._kernels._ckernels",
                ["src/tailquant/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


class optional_build_ext(build_ext):
    """Skip the extension instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"tailquant: skipping compiled kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"tailquant: skipping {ext.name} ({exc})", file=sys.stderr)


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
