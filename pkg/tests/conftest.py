import pytest
from hypothesis import HealthCheck, settings

from semicrossed.catalog import list_examples, load_example
from semicrossed.space import validate_system

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def line_system(v=1, ends=False):
    return validate_system({"dim": 1, "cells": [{"id": "Z", "rank": 1, "ends": ends}],
                            "gens": [{"index": 1, "cell": "Z", "translate": [v]}]})


@pytest.fixture(scope="session")
def catalog():
    return {name: load_example(name) for name, _ in list_examples()}


@pytest.fixture(scope="session")
def ex3(catalog):
    return catalog["example3"]


@pytest.fixture(scope="session")
def line():
    return line_system()


@pytest.fixture(scope="session")
def cline():
    return line_system(ends=True)


@pytest.fixture(scope="session")
def cycle(catalog):
    return catalog["two-cycle"]
