from setuptools import setup, find_packages
setup(
    name="dabruhat",
    version="0.0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=["numpy", "tqdm"],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["dabru = dabruhat.cli:main"]},
)
