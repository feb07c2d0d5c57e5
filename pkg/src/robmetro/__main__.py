# this_file: src/robmetro/__main__.py

"""
Main entry point for the robmetro package.
"""

from robmetro.cli import cli

if __name__ == "__main__":
    cli()
