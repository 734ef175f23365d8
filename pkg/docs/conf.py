# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

# pylint: disable=invalid-name
# Configuration file for the Sphinx documentation builder.
#
# This file does only contain a selection of the most common options. For a
# full list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

"""
Sphinx documentation builder
"""

import fuxi_rec

# -- Project information -----------------------------------------------------
project = 'FuXi-Rec'
copyright = '2026, FuXi-Rec Developers'  # pylint: disable=redefined-builtin
author = 'FuXi-Rec Developers'

# The short X.Y version
version = fuxi_rec.__version__
# The full version, including alpha/beta/rc tags
release = fuxi_rec.__version__

rst_prolog = """
.. |version| replace:: {0}
""".format(release)

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.napoleon',
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_autodoc_typehints',
    'reno.sphinxext',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx'
]
templates_path = ['_templates']

# -----------------------------------------------------------------------------
# Autosummary
# -----------------------------------------------------------------------------

autosummary_generate = True
autosummary_generate_overwrite = False

# -----------------------------------------------------------------------------
# Autodoc
# -----------------------------------------------------------------------------

autodoc_default_options = {
    'inherited-members': None,
}

autoclass_content = 'both'

# If true, figures, tables and code-blocks are automatically numbered if they
# have a caption.
numfig = True

language = None

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build']

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'colorful'

# Module names are not prepended to object names.
add_module_names = False

# Sort the module index under the subpackage names.
modindex_common_prefix = ['fuxi_rec.']

# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'

html_theme_options = {
    'description': 'Sequential recommendation with functional relative attention bias',
    'fixed_sidebar': True,
}

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'sklearn': ('https://scikit-learn.org/stable', None),
}
