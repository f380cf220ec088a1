"""Build hook for the optional compiled kernels.

The extension links against the GMP library bundled with gmpy2 so that
rationals created by the extension and by gmpy2 share one allocator.  When
Cython or gmpy2 is missing, or compilation fails, the package installs
without it and falls back to the pure-Python kernels.
"""

import glob
import os

from setuptools import setup

ext_modules = []
try:
    import gmpy2
    from Cython.Build import cythonize
    from setuptools import Extension

    inc = os.path.dirname(gmpy2.__file__)
    libdir = os.path.join(os.path.dirname(inc), "gmpy2.libs")
    bundled = sorted(glob.glob(os.path.join(libdir, "libgmp-*")))
    if bundled:
        link = dict(libraries=[":" + os.path.basename(bundled[0])], library_dirs=[libdir], runtime_library_dirs=[libdir])
    else:
        link = dict(libraries=["gmp"])
    ext = Extension(
        "depthcut._ckernels",
        ["src/depthcut/_ckernels.pyx"],
        include_dirs=[inc],
        extra_compile_args=["-O2"],
        optional=True,
        **link,
    )
    ext_modules = cythonize([ext], quiet=True, language_level=3)
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"depthcut: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
