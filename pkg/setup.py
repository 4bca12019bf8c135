"""Build script: compiles the exact linear-algebra kernel extension.

The extension is optional.  If Cython or a C compiler is unavailable the
install proceeds without it and restweyl falls back to the pure-Python
kernel at import time (see restweyl.linalg).
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension("restweyl._exactkern", sources=["src/restweyl/_exactkern.pyx"])
    return cythonize([ext], language_level=3)


class OptionalBuildExt(build_ext):
    """Allow the extension build to fail without failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping extension build ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "the pure-Python kernel will be used", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
