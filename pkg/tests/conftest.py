import math
import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=200, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=2000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rel_err(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


SS_BARRIER_V = complex(9.1675, -10.0)
CPA_BARRIER_V = complex(0.1, 5.0)
WIDTH = 10.0
FIG_ALPHAS = (2.0, 1.99, 1.98, 1.95)
LN10 = math.log(10.0)
