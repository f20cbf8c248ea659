"""Allow ``python -m asymspec``."""

from __future__ import annotations

import sys

from asymspec.cli import main

sys.exit(main())
