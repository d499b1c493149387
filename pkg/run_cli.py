# run_cli.py
#!/usr/bin/env python3
"""
Zeta Fractional Parts - command-line launcher
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
