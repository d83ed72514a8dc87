# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'SkelGrasp'
copyright = '2026, SkelGrasp Authors'
author = 'SkelGrasp Authors'

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    "sphinx.ext.mathjax",
    "sphinx_markdown_tables",
    'recommonmark',
    'sphinx_rtd_theme',
]

templates_path = ['_templates']

source_suffix = {
    '.rst': 'restructuredtext',
    '.md': 'markdown',
}

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

# numpy, scipy and friends are not needed to render the api pages
autodoc_mock_imports = [
    'networkx', 'numpy', 'scipy', 'skimage', 'tensorboardX', 'tqdm',
    'trimesh', 'yaml'
]

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = ['_static']
