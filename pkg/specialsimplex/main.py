#!/usr/bin/env python3
"""
Main entry point for the specialsimplex command line
"""

from specialsimplex.cli import app

if __name__ == "__main__":
    app()
