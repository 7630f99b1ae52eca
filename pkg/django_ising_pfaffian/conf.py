"""
Solver configuration.

Values come from the ``ISING_PFAFFIAN_CONFIG`` dict in Django settings,
merged over ``DEFAULTS``. When Django settings are not configured (plain
library use) the defaults apply.
"""

from django.conf import settings

DEFAULTS = {
    # 2**rank even subsets enumerated by the oracles and by exhaustive fitting
    "enumeration_cap": 2**20,
    "matching_cap": 2**20,
    "spin_vertex_cap": 24,
    "symbolic_edge_cap": 16,
    # number of rotation systems the minimum-genus search may visit
    "rotation_search_limit": 10**6,
    # "quadratic" or "exhaustive"
    "default_mode": "quadratic",
    "float_rtol": 1e-9,
    "jobs": 1,
    # numerators and denominators of random weights are drawn from this range
    "weight_range": (1, 97),
}


def get_config():
    """Return the effective configuration dict."""
    config = dict(DEFAULTS)
    if settings.configured:
        config.update(getattr(settings, "ISING_PFAFFIAN_CONFIG", {}))
    return config


def get_setting(key):
    return get_config()[key]
