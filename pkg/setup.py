from codecs import open
from glob import glob
from os import path

from setuptools import setup

from freightecon import __author__ as pkg_author
from freightecon import __license__ as pkg_license
from freightecon import __version__ as pkg_version

# Load the README file for use in the long description
local_dir = path.abspath(path.dirname(__file__))
with open(path.join(local_dir, "README.rst"), encoding="utf-8") as f:
    long_description = f.read()

requires = [
    "future",
    "numpy",
    "scipy",
    "pandas",
]

tests_requires = [
    "nose2",
    "nose2[coverage_plugin]",
]

extras_require = {
    "test": tests_requires,
    "lint": ["pylint"],
}

setup(
    name="freightecon",
    version=pkg_version,
    description="Railway freight growth, GDP share and valuation reports",
    long_description=long_description,
    author=pkg_author,
    license=pkg_license,
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Mozilla Public License 2.0 (MPL 2.0)",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Office/Business :: Financial",
        "Topic :: Scientific/Engineering",
        "Operating System :: MacOS :: MacOS X",
        "Operating System :: Microsoft :: Windows",
        "Operating System :: Unix",
    ],
    keywords="railway freight cagr npv eva capm",
    packages=["freightecon"],
    install_requires=requires,
    extras_require=extras_require,
    tests_require=tests_requires,
    test_suite="nose2.collector.collector",
    entry_points={"console_scripts": ["freightecon = freightecon.cli:main"]},
    data_files=[
        ("share/freightecon/data", glob("data/*.csv")),
        ("share/freightecon/config", glob("config/*.conf")),
        ("share/freightecon/config/presets", glob("config/presets/*.conf")),
    ],
)
