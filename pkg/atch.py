#!/usr/bin/env python3
"""Entry point for the ATCH hypergraph store command line."""

import sys
from pathlib import Path

# Make the src package importable when run from a checkout
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.app import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
