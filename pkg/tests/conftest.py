"""Shared fixtures: orders, engines and the settings object."""

import pytest

from src.core.config import get_settings
from src.models.order import Order
from src.services.constants import ConstantsEngine
from src.services.fracops import FracopsEngine
from src.services.lemmas import LemmaEngine
from src.services.profiles import ProfileEngine
from src.services.rayleigh import RayleighEngine

S_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


@pytest.fixture(scope="session")
def settings():
    return get_settings()


@pytest.fixture(scope="session")
def constants_engine(settings):
    return ConstantsEngine(settings)


@pytest.fixture(scope="session")
def profile_engine(settings):
    return ProfileEngine(settings)


@pytest.fixture(scope="session")
def rayleigh_engine(profile_engine, settings):
    return RayleighEngine(profile_engine, settings)


@pytest.fixture(scope="session")
def fracops_engine(profile_engine, settings):
    return FracopsEngine(profile_engine, settings)


@pytest.fixture(scope="session")
def lemma_engine(settings):
    return LemmaEngine(settings=settings)


@pytest.fixture
def half():
    return Order(s=0.5)


@pytest.fixture(params=[0.3, 0.5, 0.7], ids=lambda s: f"s={s}")
def order(request):
    return Order(s=request.param)
