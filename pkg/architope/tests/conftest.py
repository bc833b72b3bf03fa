import os
import sys
import tempfile
from pathlib import Path

# Add project root to Python path
PROJECT_ROOT = Path(__file__).resolve().parents[2]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

# Settings are read at import time; keep the fit cache out of the working tree
os.environ.setdefault("ARCHITOPE_CACHE_DIR", tempfile.mkdtemp(prefix="architope-cache-"))
os.environ.setdefault("ARCHITOPE_LOG_LEVEL", "WARNING")

import pytest  # noqa: E402

from architope.models.measure import QuadratureScheme  # noqa: E402
from architope.services.measure import exp_decay, lebesgue  # noqa: E402
from architope.services.partition import make_shell_partition  # noqa: E402


@pytest.fixture
def shells():
    """Shells d=1, N=8, width 1: K_1 = [-1, 1], K_n = [-n, n] minus (-(n-1), n-1)."""
    return make_shell_partition(1, 8, 1.0)


@pytest.fixture
def wide_shells():
    return make_shell_partition(1, 8, 2.0)


@pytest.fixture
def plane_shells():
    return make_shell_partition(2, 4, 1.0)


@pytest.fixture
def leb():
    return lebesgue(1)


@pytest.fixture
def leb2():
    return lebesgue(2)


@pytest.fixture
def decay():
    return exp_decay(1, 1.0)


@pytest.fixture
def quad():
    return QuadratureScheme(refinement=512)


@pytest.fixture
def fine_quad():
    return QuadratureScheme(refinement=4096)
