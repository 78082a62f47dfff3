from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="cotlab",
    version="1.0.0",
    author="cotlab developers",
    description="Exact homological algebra over Z/nZ: cotorsion pairs, pushout products and Quillen-type checks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "cotlab": ["scenarios/*.json"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=[
        "psutil>=5.9.0",
        "numpy>=1.24.0",
        "sympy>=1.11",
        "click>=8.1.3",
        "rich>=12.6.0",
    ],
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.70"],
    },
    entry_points={
        "console_scripts": [
            "cotlab=cotlab.cli:main",
        ],
    },
)
