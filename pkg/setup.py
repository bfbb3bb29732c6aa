from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "lrfuse.kernels._masked_ls",
                ["src/lrfuse/kernels/_masked_ls.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    # No Cython at build time: install as pure Python, the package falls
    # back to the NumPy kernel at import.
    extensions = []

setup(ext_modules=extensions)
