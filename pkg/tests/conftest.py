import random

import pytest
from hypothesis import HealthCheck, settings

from idemdecomp.fields import QQ, PrimeField
from idemdecomp.matrix import Matrix

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

FIELDS = [QQ, PrimeField(2), PrimeField(3), PrimeField(5), PrimeField(7)]


def field_id(f):
    return f.label()


def rand_matrix(field, n, rng, bound=3, m=None):
    m = n if m is None else m
    if field.is_finite():
        return Matrix(field, [[rng.randrange(field.characteristic()) for _ in range(m)] for _ in range(n)])
    return Matrix(field, [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)])


def rand_invertible(field, n, rng, bound=2):
    while True:
        s = rand_matrix(field, n, rng, bound)
        if s.det() != 0:
            return s


def mat(field, rows):
    return Matrix(field, rows)


@pytest.fixture
def rng():
    return random.Random(12345)
