"""Build hook for the optional compiled F_p kernel.

The package works without it; ``linsite.exactla`` falls back to the
pure-Python kernel when the extension cannot be imported.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - Cython missing
    ext_modules = []
else:
    ext_modules = cythonize(
        ["src/linsite/_kernels.pyx"],
        compiler_directives={"language_level": 3},
        quiet=True,
    )

setup(ext_modules=ext_modules)
