"""
MaassLab package definition
"""

from pathlib import Path

from setuptools import find_packages, setup


def read_requirements():
    """Runtime requirements from requirements.txt, test tools excluded"""
    lines = Path(__file__).with_name("requirements.txt").read_text().splitlines()
    wanted = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.split("==")[0] in ("pytest", "hypothesis"):
            continue
        wanted.append(line)
    return wanted


setup(
    name="maasslab",
    version="0.1.0",
    description="Numerical laboratory for even Hecke-Maass cusp forms on the modular surface",
    packages=find_packages(exclude=("tests", "tests.*")),
    python_requires=">=3.10",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest==8.3.3", "hypothesis==6.112.1"]},
    entry_points={"console_scripts": ["maasslab=maasslab.api.cli:main_exit"]},
)
