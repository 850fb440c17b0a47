"""Build script for the optional compiled kernel.

The package works without the extension (a numpy fallback is picked at
import time), so a failed compile downgrades to a warning instead of
aborting the install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            print(f"warning: compiled kernel skipped ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: compiled kernel skipped ({exc}); using numpy fallback")


def extensions():
    from Cython.Build import cythonize

    ext = Extension(
        "entscale.kernels._apply",
        ["src/entscale/kernels/_apply.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
