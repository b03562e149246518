"""Build script: compiles the optional C scanner extension.

The extension is a speedup only. If Cython or a C compiler is missing the
build falls back to the pure-Python scanner and the install still succeeds.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; never fail the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain
            print(f"intentweave: skipping C scanner build ({exc}); "
                  "pure-Python scanner will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"intentweave: skipping {ext.name} ({exc}); "
                  "pure-Python scanner will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    return cythonize(
        [
            Extension(
                "intentweave._scan_c",
                ["src/intentweave/_scan_c.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
