"""Shared test configuration.

Hypothesis runs derandomized so the suite is reproducible in CI; deadlines
are disabled because the exact-arithmetic paths have very uneven step costs
(a single simplex pivot can dominate an example).
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "pitchforge",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pitchforge")
