"""
cotlab - Exact homological algebra workbench over the rings Z/nZ
"""

__version__ = '1.0.0'
