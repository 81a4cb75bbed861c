#!/usr/bin/env python3
"""
Main entry point for fedcontrast.
"""

from cli.experiment_cli import main

if __name__ == '__main__':
    main()
