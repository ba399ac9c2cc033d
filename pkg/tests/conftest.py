import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--long",
        action="store_true",
        default=False,
        help="run the long cases (h = 5, hours of computation)",
    )


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "long: long-running opt-in tests (enable with --long)"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="long case; enable with --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)
