from pathlib import Path

import pytest

from brickvrf.ontology import default_ontology

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ontology():
    return default_ontology()


@pytest.fixture(scope="session")
def sector_excerpt_text():
    """Frozen Turtle for part of the deployed two-office sector model.

    Kept verbatim, including its circular prefix redeclarations and the
    original's namespace slips (`brick:Office_1_HVAC` where the building
    namespace was meant); the parser must take it as-is.
    """
    return (DATA / "sector_model_excerpt.ttl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def floor_units_query_text():
    """Frozen validation query: all VRF indoor units located in offices of
    Floor_1, exactly as run against the generated validation model."""
    return (DATA / "floor_units_query.rq").read_text(encoding="utf-8")
