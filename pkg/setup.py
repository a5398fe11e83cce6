from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("tdakit._core._reduction", ["src/tdakit/_core/_reduction.pyx"], language="c++",
                   extra_compile_args=["-O3", "-std=c++14"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
