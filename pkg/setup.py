from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # falls back to the pure-Python flag core
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/hostpool/_flagcore.pyx",
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
