"""
Atmomin - Settings
Version, defaults, and the run configuration assembled from CLI flags and
the environment.
"""

import os
import sys
from dataclasses import dataclass
from typing import Optional

# Version - use 0.x.x until the adjudication numbers are published
__version__ = "0.3.0"

TOOL_NAME = "atmomin"

# Numerical defaults
DEFAULT_EPSILON_TAIL = 1e-12
DEFAULT_CUTOFF_CAP = 2048
DEFAULT_MAX_DIMENSION = 4096
DEFAULT_OMEGA = 1.0
DEFAULT_ETA = 1.0
DEFAULT_CONVENTION = "half"
DEFAULT_GRID = 201
DEFAULT_VERIFY_STRIDE = 50
DEFAULT_X_MIN = 1.001
DEFAULT_X_MAX = 10.0
DEFAULT_RH = 1.0
DEFAULT_STEPS = 400
DEFAULT_DHH_LIST = (23.03, 40.0, 60.0, 80.0)

# Value quoted for the positivity threshold of the Hartle-Hawking constant
PUBLISHED_CRITICAL_CONSTANT = 23.03

THREADS_ENV = "ATMOMIN_THREADS"


def get_current_version() -> str:
    """Return the current tool version."""
    return __version__


def threads_from_env(explicit: Optional[int] = None) -> int:
    """
    Resolve the worker count.

    Args:
        explicit: value of --threads, wins when given

    Returns:
        Positive worker count (1 when nothing usable is configured)
    """
    if explicit is not None:
        return max(1, int(explicit))

    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        print(f"⚠️ Ignoring {THREADS_ENV}={raw!r} (not an integer)", file=sys.stderr)
        return 1
    if value < 1:
        print(f"⚠️ Ignoring {THREADS_ENV}={raw!r} (must be >= 1)", file=sys.stderr)
        return 1
    return value


@dataclass(frozen=True)
class RunSettings:
    """Settings shared by every subcommand."""
    omega: float = DEFAULT_OMEGA
    eta: float = DEFAULT_ETA
    convention: str = DEFAULT_CONVENTION
    epsilon_tail: float = DEFAULT_EPSILON_TAIL
    cutoff_cap: int = DEFAULT_CUTOFF_CAP
    threads: int = 1
    quiet: bool = False

    def metadata(self) -> dict:
        """Settings recorded in every emitted artifact; never includes threads."""
        meta = {
            'tool': f"{TOOL_NAME} {__version__}",
            'convention': self.convention,
            'omega': self.omega,
            'eta': self.eta,
            'epsilon_tail': self.epsilon_tail,
            'cutoff_cap': self.cutoff_cap,
        }
        if self.eta != 1.0:
            meta['validation'] = "unvalidated-eta"
        return meta

    def status(self, message: str):
        """Print a status line to stderr unless quiet."""
        if not self.quiet:
            print(message, file=sys.stderr)
