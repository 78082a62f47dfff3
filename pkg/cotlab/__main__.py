"""
cotlab - Exact homological algebra workbench over the rings Z/nZ
Entry point for running the package directly as a module.
"""

from cotlab.cli import main

if __name__ == "__main__":
    main()
