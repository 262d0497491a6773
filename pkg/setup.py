from setuptools import setup

# Get the long description from the README file
with open('README.md') as fp:
    long_description = fp.read()

setup(
    name='scdpyler',
    version='1.0.0',
    author='scdpyler developers',
    description='A toolkit for System Composition Diagram models: parse, link levels, validate, evaluate and export',
    long_description=long_description,
    packages=['scdpyler'],
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Programming Language :: Python :: 3.8',
        'Topic :: Software Development',
        'Topic :: Scientific/Engineering',
        'Operating System :: OS Independent',
    ],
    install_requires=[
          "networkx",
          ],
    entry_points={
        "console_scripts": [
            "scd=scdpyler.cli:main",
            ],
        },
    setup_requires=["pytest-runner"],
    python_requires='>=3.8',
    keywords="systemism conceptual modeling system composition diagram SCDL life sciences",
    tests_require=["pytest", "pytest-cov", "hypothesis"],
)
