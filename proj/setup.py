import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen_includes = [
    d for d in ("/usr/include/eigen3", "/usr/local/include/eigen3")
    if os.path.isdir(d)
]

ext = Pybind11Extension(
    "cavitysim._core",
    sources=sorted(glob.glob("src/*.cpp")) + ["src/bindings/module.cpp"],
    include_dirs=["include", "vendor"] + eigen_includes,
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
