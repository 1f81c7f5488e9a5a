import random
from fractions import Fraction

import pytest
from hypothesis import settings

from midconvex import Engine
from midconvex.context import Context

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def context() -> Context:
    return Context()


@pytest.fixture
def engine(context) -> Engine:
    return Engine(context)


@pytest.fixture
def bounds(engine):
    return engine.bounds


@pytest.fixture
def checker(engine):
    return engine.checker


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def random_fraction(rng: random.Random, denominator_max: int) -> Fraction:
    """[0,1] 内分母 ≤ denominator_max 的随机有理数"""
    q = rng.randint(1, denominator_max)
    return Fraction(rng.randint(0, q), q)


def square(t):
    return t * t


def identity(t):
    return t
