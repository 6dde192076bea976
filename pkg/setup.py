from setuptools import setup, find_packages

setup(
    name="chiralband",
    version="0.1.0",
    install_requires=["numpy", "cachetools", "sympy>=1.14"],
    packages=find_packages(exclude=["tests"]),
    package_data={"chiralband": ["data/*.json"]},
    scripts=["scripts/chiralband", "scripts/chiralband_export_all.py"],
)
