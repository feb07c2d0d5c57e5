# this_file: src/robmetro/__init__.py

"""
robmetro: Simulate stabilizer-code probes for noisy phase estimation and bound their precision.
"""

try:
    from robmetro.__version__ import __version__
except ImportError:  # source tree without a build
    from importlib.metadata import PackageNotFoundError, version

    try:
        __version__ = version("robmetro")
    except PackageNotFoundError:
        __version__ = "0.1.0"

__author__ = "Adam Twardoch"
