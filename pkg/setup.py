"""Build hook for the optional compiled sum-tree core.

The package is fully functional without the extension (a numpy
fallback is selected at import); building it just removes the
Python-level overhead from the replay hot path.
"""

import numpy
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/lainsim/learner/_sumtree.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # no Cython: ship pure Python
    ext_modules = []

setup(
    ext_modules=ext_modules,
    include_dirs=[numpy.get_include()],
)
