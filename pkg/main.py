#!/usr/bin/env python3
"""
Compass - Dirichlet regression with bootstrap residual diagnostics.

Usage: python main.py <command> [options]   (python main.py --help)
"""

import sys

from cli import run


if __name__ == "__main__":
    sys.exit(run())
