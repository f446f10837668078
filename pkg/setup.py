"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-Python kernel with the same
interface is selected at import time), so compilation failures are demoted to
a warning rather than aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "orthograph._fastcore",
                ["src/orthograph/_fastcore.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    sys.stderr.write(
        "orthograph: Cython kernel not built (%s); using pure-Python kernel\n" % exc
    )

setup(ext_modules=ext_modules)
