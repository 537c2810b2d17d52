from setuptools import setup, find_packages

setup(
    name="ncg-workbench",
    version="1.0.0",
    description="Batch computations in finite and fuzzy noncommutative geometry",
    author="Your Name",
    packages=find_packages(),
    install_requires=[
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'sympy>=1.13',
        'pyyaml>=6.0',
    ],
    entry_points={
        'console_scripts': [
            'ncg-workbench=main:main',
        ],
    },
    python_requires='>=3.9',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
)
