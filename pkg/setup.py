"""Build script for the optional compiled kernel.

The package is pure Python except for one subset-DP kernel used by the
packing oracle. When Cython or a C compiler is unavailable the build
falls through and the pure-Python twin is selected at import time.
Set PATHEVAC_SKIP_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    # A failed compile must not fail the whole install.
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            print(f"warning: compiled kernel skipped ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python fallback will be used")


ext_modules = []
if os.environ.get("PATHEVAC_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("pathevac._dpcore", ["src/pathevac/_dpcore.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython not available; pure-Python kernel only")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
