#!/usr/bin/env python3
"""
Atmomin - Launcher
Run this script to use the command-line tool, e.g. `python run.py sweep-r --out fig1a.csv`.
"""

import sys
from pathlib import Path


def main():
    app_dir = Path(__file__).parent
    sys.path.insert(0, str(app_dir / "src"))

    from cli import main as cli_main
    sys.exit(cli_main())


if __name__ == '__main__':
    main()
