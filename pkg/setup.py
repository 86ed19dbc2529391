"""Setup configuration for entanglement-discrimination."""
from setuptools import setup, find_packages

def read_long_description():
    try:
        with open("README.md", "r", encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        return "Discriminate multiqubit states from local-unitary orbits"

def read_requirements():
    try:
        with open("requirements.txt", "r", encoding="utf-8") as f:
            return [line.split("#")[0].strip() for line in f if line.strip() and not line.startswith("#")]
    except FileNotFoundError:
        return ["numpy>=1.22.0", "scipy>=1.8.0", "networkx>=2.8", "prompt-toolkit>=3.0.0", "tqdm>=4.65.0"]

setup(
    name="entanglement-discrimination",
    version="0.1.0",
    description="Discriminate multiqubit states from local-unitary orbits with fidelity-gap and relative-entropy measures",
    long_description=read_long_description(),
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Environment :: Console",
    ],
    python_requires=">=3.9",
    install_requires=read_requirements(),
    entry_points={
        "console_scripts": [
            "entdisc=entdisc.cli:main",
        ],
    },
    keywords="entanglement stabilizer graph-states relative-entropy quantum cli",
    include_package_data=True,
    zip_safe=False,
)
