"""Allows running the CLI as `python -m gptdisc`."""

import sys

from .cli import main

sys.exit(main())
