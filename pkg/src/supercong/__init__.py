"""Exact verification of supercongruences for Apery and Franel numbers."""

import sys

__version__ = "0.1.0"

# Witnesses and cached sequence values routinely exceed the default
# int<->str digit cap.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)
