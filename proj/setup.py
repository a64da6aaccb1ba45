from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "primeholdout._core",
    sources=[
        "bindings/pymodule.cpp",
        "src/numtheory.cpp",
        "src/problem.cpp",
        "src/trajectory.cpp",
        "src/verify.cpp",
        "src/paperprops.cpp",
        "src/report_json.cpp",
    ],
    include_dirs=["include", "vendor"],
    libraries=["gmpxx", "gmp"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
