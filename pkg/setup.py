from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/xmodmask/_rngkernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # pure-Python fallback is selected at import time
    pass

setup(ext_modules=ext_modules)
