#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

import io

import setuptools
from setuptools import setup


setup(
    name='effcnet',
    version='1.0.0',
    author='Fabrizio Colonna',
    author_email='colofabrix@tin.it',
    url='https://github.com/ColOfAbRiX',
    description='EffCNet: dense depthwise-separable image classifiers for embedded targets',
    long_description=io.open('README.md', encoding='utf-8').read(),
    long_description_content_type='text/markdown',
    license='MIT',
    python_requires='>=3.8',
    packages=setuptools.find_packages(exclude=['tests', 'tests.*']),
    package_data={
        'effcnet.resources': ['*.ini', '*.policy', '*.labels'],
    },
    install_requires=[
        'numpy >=1.20',
        'termcolor >=2.1',
        'structlog >=21.1',
        'tqdm >=4.0',
        'Pillow >=8.0',
    ],
    extras_require={
        'test': ['pytest >=6.0'],
    },
    entry_points={
        'console_scripts': [
            'effcnet=effcnet.bin.main:main',
        ],
    },
)

# vim: ft=python:ts=4:sw=4
