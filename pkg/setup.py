import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# -ffp-contract=off: the pure-Python twin must reproduce the compiled kernels
# bit-for-bit where only arithmetic is involved, so FMA contraction is disabled.
ext = Extension(
    "alphanorm._kernels",
    sources=[os.path.join("src", "alphanorm", "_kernels.pyx")],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

setup(
    ext_modules=cythonize([ext], language_level=3) if cythonize else [],
)
