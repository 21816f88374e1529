from setuptools import setup, find_packages

setup(
    name="girg_lab",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pandas>=2.0.0",
        "pyarrow[parquet]>=12.0.0",
        "PyYAML>=6.0",
        "structlog>=23.1.0",
        "tqdm>=4.65.0",
        "psutil>=5.9.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={"test": ["pytest>=7.4.0", "networkx>=3.0"]},
    entry_points={"console_scripts": ["girg-lab=girg_lab.__main__:main"]},
    python_requires=">=3.9",
)
