import shutil
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
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve()
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir.mkdir(parents=True, exist_ok=True)
        subprocess.check_call(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DRPSOFTMAX_BUILD_TESTS=OFF",
                "-DRPSOFTMAX_BUILD_PYTHON=ON",
                f"-DPython_EXECUTABLE={sys.executable}",
            ]
        )
        subprocess.check_call(
            ["cmake", "--build", str(build_dir), "--target", "rpsoftmax_py"]
        )
        staged = build_dir / "python" / "rpsoftmax"
        for so in staged.glob("_rpsoftmax*"):
            shutil.copy2(so, out_dir / so.name)


setup(
    ext_modules=[CMakeExtension("rpsoftmax._rpsoftmax")],
    cmdclass={"build_ext": CMakeBuild},
)
