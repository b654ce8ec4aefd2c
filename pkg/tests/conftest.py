import pytest
from hypothesis import HealthCheck, settings

from finitetype.geometry import AnchorRing, Catenoid, Circle, Helix, Sphere, Tube
from support import wavy_curve

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def helix_tube():
    return Tube(Helix(1.0, 1.0), 0.5)


@pytest.fixture(scope="session")
def circle_tube():
    return Tube(Circle(2.0), 0.5)


@pytest.fixture(scope="session")
def wavy_tube():
    return Tube(wavy_curve(), 0.3)


@pytest.fixture(scope="session")
def builtin_surfaces(helix_tube, circle_tube, wavy_tube):
    return [Sphere(1.0), Sphere(2.0, (1.0, -1.0, 0.5)), Catenoid(1.0), AnchorRing(2.0, 1.0), helix_tube, circle_tube, wavy_tube]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
