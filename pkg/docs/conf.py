# -*- coding: utf-8 -*-
"""Sphinx configuration for the lagdyna documentation."""
import os
import sys

import django

sys.path.insert(0, os.path.abspath('../'))
os.environ['DJANGO_SETTINGS_MODULE'] = 'lagdyna.settings.development'
django.setup()

project = 'lagdyna'
author = 'lagdyna developers'
copyright = '2026, lagdyna developers'
version = '0.1.0'
release = version

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]
autodoc_default_options = {'members': True}
autodoc_member_order = 'bysource'

source_suffix = '.rst'
master_doc = 'contents'
exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_theme_options = {
    'collapse_navigation': True,
    'sticky_navigation': True,
    'navigation_depth': 4,
}
htmlhelp_basename = 'lagdynadoc'

latex_documents = [
    (master_doc, 'lagdyna.tex', 'lagdyna Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'lagdyna', 'lagdyna Documentation', [author], 1),
]
