from setuptools import setup


def readme():
    with open("README.md") as f:
        return f.read()


install_requires = ["numpy", "pandas", "sympy"]
test_requires = ["pytest", "coverage"]
dev_requires = test_requires

# read version from _version.py
with open("sturmlab/_version.py") as version_file:
    version = version_file.read().strip().split("=")[1].replace('"', "").replace("'", "").strip()

setup(
    name="sturmlab",
    version=version,
    description="Block complexity, return times and continued fraction experiments for digit-defined real numbers.",
    long_description=readme(),
    keywords="combinatorics-on-words sturmian complexity continued-fractions diophantine s-unit",
    license="MIT",
    packages=["sturmlab"],
    python_requires=">=3.7",
    install_requires=install_requires,
    extras_require={"tests": test_requires, "dev": dev_requires},
    entry_points={"console_scripts": ["sturmlab=sturmlab.cli:main"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
