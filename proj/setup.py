"""CMake-driven build of the _vialm extension module."""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        import pybind11

        source_dir = Path(__file__).resolve().parent
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DVIALM_PYTHON=ON",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_vialm", "--parallel"],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("vialm._vialm")],
    cmdclass={"build_ext": CMakeBuild},
)
