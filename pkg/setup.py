#!/usr/bin/env python
from __future__ import annotations

from setuptools import setup

# Get the version from sqz_timing/version.py without importing the package
exec(
    compile(
        open('sqz_timing/version.py').read(),
        'sqz_timing/version.py',
        'exec',
    )
)

DESCRIPTION = 'Squeezed frequency comb timing simulator'
LONG_DESCRIPTION = (
    'Analytic and Monte-Carlo model of time-transfer measurement with a shaped local oscillator, '
    'balanced homodyne detection and a multimode squeezed frequency comb'
)

setup(
    name='sqz_timing',
    version=__version__,
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    license='Unlicense',
    packages=['sqz_timing', 'sqz_timing.command', 'sqz_timing.emitter'],
    package_data={'sqz_timing': ['presets/*.conf']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.25',
        'scipy>=1.10',
        'matplotlib>=3.5',
    ],
    entry_points={'console_scripts': ['sqz-timing = sqz_timing:main']},
    test_suite='test',
    classifiers=[
        'Topic :: Scientific/Engineering :: Physics',
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'License :: Public Domain',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Programming Language :: Python :: Implementation :: CPython',
    ],
)
