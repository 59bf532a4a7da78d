"""Builds the pybind11 extension by delegating to the CMake project.

CMake remains the single source of truth for the native build; this shim
only configures a throwaway build tree, compiles the `_mmot` target, and
drops the resulting module next to the `mmot` package.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str) -> None:
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_mmot", "--parallel"],
            check=True,
        )

        built = sorted(build_dir.glob("_mmot.*.so")) or sorted(build_dir.glob("_mmot.so"))
        if not built:
            raise RuntimeError(f"CMake did not produce an _mmot module in {build_dir}")
        destination = Path(self.get_ext_fullpath(ext.name)).resolve()
        destination.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], destination)


setup(
    ext_modules=[CMakeExtension("mmot._mmot")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
