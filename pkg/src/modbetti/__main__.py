"""Module entry point for python -m modbetti."""

import sys

from .cli import main

sys.exit(main())
