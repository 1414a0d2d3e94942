import pytest


def pytest_addoption(parser):
    parser.addoption("--expensive", action="store_true", default=False, help="run slow checks (16-element torus)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--expensive"):
        return
    skip = pytest.mark.skip(reason="needs --expensive")
    for item in items:
        if "expensive" in item.keywords:
            item.add_marker(skip)
