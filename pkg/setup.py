"""Build hook for the optional compiled scan kernel.

The package is pure Python plus one Cython extension that accelerates the
candidate-password scan. The extension links against OpenSSL's libcrypto;
if it cannot be built the install still succeeds and the pure-Python scan
is used instead.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension (with a notice) instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or linker missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: compiled scan kernel not built ({exc}); "
            "falling back to the pure-Python scan",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; skipping compiled kernel", file=sys.stderr)
        return []
    return cythonize(
        [
            Extension(
                "authbreak._guesscore",
                sources=["src/authbreak/_guesscore.pyx"],
                libraries=["crypto"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
