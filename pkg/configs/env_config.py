"""Environment-aware defaults shared across the solver, the CLI and the tests.

The run-config file is the source of truth for a single run; this module only
supplies fallbacks that are read from the environment (and from a ``.env``
file, loaded via ``dotenv``) when a run-config key or CLI flag is absent.
"""

from __future__ import annotations

import os

from dotenv import load_dotenv

load_dotenv()

OUTPUT_DIR: str = os.getenv("BIHARMONIC_OUTPUT_DIR", "out")

DEFAULT_SEED: int = int(os.getenv("BIHARMONIC_SEED", "42"))

LOG_LEVEL: str = os.getenv("BIHARMONIC_LOG_LEVEL", "WARNING").upper()

MAX_WORKERS: int = int(os.getenv("BIHARMONIC_MAX_WORKERS", "0")) or (os.cpu_count() or 1)

MAX_SOLVE_SECONDS: float = float(os.getenv("MAX_SOLVE_SECONDS", "60"))
