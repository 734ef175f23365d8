# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

import setuptools
import os

long_description = """FuXi-Rec is a sequential recommendation library built around a functional
relative attention bias and an attention-free token mixer.
 """

with open('requirements.txt') as f:
    REQUIREMENTS = f.read().splitlines()

VERSION_PATH = os.path.join(os.path.dirname(__file__), "fuxi_rec", "VERSION.txt")
with open(VERSION_PATH, "r") as version_file:
    VERSION = version_file.read().strip()

setuptools.setup(
    name='fuxi-rec',
    version=VERSION,
    description='FuXi-Rec: sequential recommendation with functional relative attention bias',
    long_description=long_description,
    long_description_content_type="text/markdown",
    author='FuXi-Rec Development Team',
    license='Apache-2.0',
    classifiers=(
        "Environment :: Console",
        "License :: OSI Approved :: Apache Software License",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Operating System :: Microsoft :: Windows",
        "Operating System :: MacOS",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering"
    ),
    keywords='recommendation sequential transformer attention ranking',
    packages=setuptools.find_packages(include=['fuxi_rec', 'fuxi_rec.*']),
    package_data={'fuxi_rec': ['VERSION.txt', 'configs/*.json']},
    install_requires=REQUIREMENTS,
    include_package_data=True,
    python_requires=">=3.8",
    extras_require={
        'plot': ["matplotlib>=2.1"],
    },
    entry_points={
        'console_scripts': ['fuxi-rec=fuxi_rec.cli:main'],
    },
    zip_safe=False
)
