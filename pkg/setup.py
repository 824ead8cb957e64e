# -*- coding: utf-8 -
#
# This file is part of motionkit released under the MIT license.
# See the NOTICE for more information.

from importlib.machinery import SourceFileLoader
import os
import sys

if not hasattr(sys, 'version_info') or sys.version_info < (3, 8, 0):
    raise SystemExit("motionkit requires Python 3.8 or later.")

from setuptools import setup, find_packages

# open version module
version = SourceFileLoader(
    "version", os.path.join("motionkit", "version.py")).load_module()


setup(
    name = 'motionkit',
    version = version.__version__,

    description = 'Latent motion codes and flow-matching video reenactment '
                  'of procedural characters',
    long_description = open(
        os.path.join(
            os.path.dirname(__file__),
            'README.rst'
        ), 'rt'
    ).read(),
    license = 'MIT',

    classifiers = [
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
    ],
    packages = find_packages(exclude=['tests']),

    zip_safe = False,

    install_requires = [
        'jsonobject>=0.9.8',
        'numpy>=1.20',
        'torch>=1.13',
        'einops>=0.6',
        'Pillow>=8.0',
        'tqdm>=4.40',
    ],
    provides=['motionkit'],
    entry_points="""
    [console_scripts]
    motionkit=motionkit.commands:main
    """,
)
