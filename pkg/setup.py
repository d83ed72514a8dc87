from setuptools import find_packages, setup

requirements = [
    'pyyaml>=5.1',
    'numpy',
    'scipy',
    'trimesh',
    'networkx',
    'scikit-image',
    'tqdm',
    'tensorboardX',
    'matplotlib',
]

setup(
    name='skelgrasp',
    version='0.1.0',
    description='Skeleton based grasp planning toolkit',
    license='Apache-2.0',
    packages=find_packages(include=['skelgrasp', 'skelgrasp.*']),
    package_data={'skelgrasp.hand': ['conf/*.yaml']},
    install_requires=requirements,
    python_requires='>=3.8',
    entry_points={
        'console_scripts': ['skelgrasp = skelgrasp.bin.cli:main'],
    },
)
