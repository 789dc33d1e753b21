import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ramcycles.fields import ff_make
from ramcycles.series import Series

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# small fields used across property tests: prime fields and a few extensions
FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 4), (3, 2), (5, 2)]


def field_from_index(i):
    return ff_make(*FIELDS[i % len(FIELDS)])


def random_series(rng: random.Random, spec, N, lead=None, low=0):
    a = np.array([[rng.randrange(spec.p) for _ in range(spec.k)] for _ in range(N)], dtype=np.int64)
    a[:low] = 0
    if lead is not None:
        a[low] = lead.coeffs
    return Series(spec, a)


@pytest.fixture
def F11():
    return ff_make(11)
