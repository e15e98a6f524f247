from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# property tests mix numpy work of very uneven cost; wall-clock deadlines
# only add flakiness there
settings.register_profile(
    "corrlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("corrlab")

sys.path.insert(0, str(Path(__file__).parent))
