"""Infoloss version information"""

__version__ = "0.1.0"
__author__ = "Infoloss Contributors"
__license__ = "MIT"
