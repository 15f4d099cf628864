#!/usr/bin/env python3
"""
Isothermic reparameterization toolkit
Entry point: forwards to the command-line front end in src/main.py.
"""

import sys
from pathlib import Path

# Make the package importable when run from a checkout
sys.path.insert(0, str(Path(__file__).parent))

try:
    from src.main import main as cli_main
except ImportError as e:
    print(f"❌ Error: Could not import the toolkit modules ({e}).")
    print("🔧 Make sure all dependencies are installed: pip install -r requirements.txt")
    sys.exit(1)

if __name__ == "__main__":
    try:
        sys.exit(cli_main())
    except KeyboardInterrupt:
        print("🛑 Stopped by user")
        sys.exit(1)
