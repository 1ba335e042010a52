from setuptools import setup, find_packages

with open("README.md", "r") as f:
    readme = f.read()

requirements = ["numpy", "sympy"]

setup(
    name="padicwave",
    version="0.1.0",
    include_package_data=True,
    package_data={"padicwave": ["data/*.metric"]},
    description="Exact p-adic wavelets, dilations and Monna maps on deformed "
                "ultrametric spaces.",
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    install_requires=requirements,
    entry_points={
        "console_scripts": ["padicwave=padicwave.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
