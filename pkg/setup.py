from setuptools import setup, find_packages
from modcount import VERSION

with open('README.md') as fd:
    read_me = fd.read()

# noinspection SpellCheckingInspection
setup(
    name='modcount',
    version=VERSION,
    description='Subgraph counts modulo q in random graphs',
    long_description=read_me,
    long_description_content_type='text/markdown',
    license='Apache 2.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    package_data={'': ['LICENSE.md', 'version.txt']},
    install_requires=[
        'click>=8.0', 'PyYAML', 'stringcase', 'numpy>=2.0', 'scipy'
    ],
    extras_require={
        'test': ['pytest', 'networkx']
    },
    python_requires='>=3.10.0',
    entry_points='''
        [console_scripts]
        modcount=modcount.main:run
    ''',
)
