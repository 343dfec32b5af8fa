from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled core bit-identical to the pure-Python
# fallback (no FMA contraction); the backend equivalence tests rely on it.
ext = Extension(
    "walklab._backends._fastcore",
    ["src/walklab/_backends/_fastcore.pyx"],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

setup(ext_modules=cythonize([ext], language_level="3"))
