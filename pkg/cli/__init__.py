# cli/__init__.py
# Command-line front end for the app package: `python -m cli <command>`.
