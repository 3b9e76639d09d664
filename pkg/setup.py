from setuptools import find_packages, setup

setup(
    name="braidtool",
    version="0.1.0",
    packages=find_packages(include=["app", "app.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "openpyxl",
        "pillow",
        "tqdm",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "braidtool = app.__main__:main"
        ]
    },
)
