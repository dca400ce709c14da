import sys

from setuptools import setup

ext_modules = []
try:
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nucalab._gfext", ["src/nucalab/_gfext.pyx"], optional=True)],
        language_level=3,
    )
except ImportError:
    sys.stderr.write("Cython not available; installing with the pure-Python GF kernels only\n")

setup(ext_modules=ext_modules)
