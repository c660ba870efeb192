"""infoloss Command Line Interface"""

from infoloss.cli.main import main

__all__ = ["main"]
