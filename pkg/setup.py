from setuptools import find_packages, setup

from conemetric.constants import NAME, VERSION

with open('README.md', 'r', encoding='utf-8') as fh:
    long_description = fh.read()

setup(
    name=NAME,
    version=VERSION,
    description=('Thompson and Hilbert metric geometry on cones: distances, '
                 'geodesics, uniqueness tests, embeddings and isometries'),
    long_description=long_description,
    long_description_content_type='text/markdown',
    license="MIT",
    platforms='any',
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    package_data={'conemetric': ['data/*.yaml']},
    install_requires=[
        'click~=8.0',
        'numpy>=1.22,<3.0',
        'PyYAML>=5.4,<7.0',
        'scipy>=1.8,<2.0',
        'tabulate~=0.8',
    ],
    entry_points={
        'console_scripts': [
            'cm = conemetric.cm:main',
        ],
    },
    test_suite='tests',
    python_requires='>=3.8',
)
