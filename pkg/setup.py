"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension; ``plselect._kernels``
falls back to the pure-Python implementations when the compiled module is
missing (or when PLSELECT_PURE=1 is set).  Any failure while cythonizing or
compiling therefore downgrades to a pure-Python install instead of aborting.
"""

from setuptools import Extension, setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    try:
        return cythonize(
            [
                Extension(
                    "plselect._kernels._fast",
                    ["src/plselect/_kernels/_fast.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception:
        return []


class _OptionalBuildExt:
    pass


try:
    from setuptools.command.build_ext import build_ext as _build_ext

    class optional_build_ext(_build_ext):  # noqa: N801 - setuptools naming
        """Build the extension best-effort; never fail the install."""

        def run(self):
            try:
                super().run()
            except Exception as exc:  # pragma: no cover - toolchain specific
                print(f"skipping compiled kernels: {exc}")

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception as exc:  # pragma: no cover - toolchain specific
                print(f"skipping compiled kernel {ext.name}: {exc}")

    cmdclass = {"build_ext": optional_build_ext}
except Exception:  # pragma: no cover
    cmdclass = {}

setup(ext_modules=extensions(), cmdclass=cmdclass)
