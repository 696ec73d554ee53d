# cli/__main__.py
# Allows running the command line with `python -m cli`.
import sys

from .commands import main

if __name__ == "__main__":
    sys.exit(main())
