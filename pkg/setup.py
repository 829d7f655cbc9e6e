from setuptools import setup, find_packages
import re

with open('src/rothpy/__init__.py', 'r') as fh:
    version = re.search(r'^__version__ = "(.+)"', fh.read(), re.M).group(1)

setup(
    name='rothpy',
    description='A numerical workbench for bilinear averages along curves and Roth-type pattern counts.',
    long_description=open('README.md', 'r').read(),
    long_description_content_type='text/markdown',
    version=version,
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'click',
        'numpy',
        'pandas'
    ],
    entry_points={
        'console_scripts': [
            'rothpy=rothpy.cli.cli:run'
        ]
    },
    classifiers=[
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)'
    ],
    zip_safe=True
)
