from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # the pure-Python kernel is picked up at import time instead
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("cnfreify._upkernel", ["src/cnfreify/_upkernel.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
