import pytest

from vortexpaths import presets
from vortexpaths._backend import available_backends
from vortexpaths.config import config_from_dict

# criterion number -> (title, [(ok, detail), ...]); one line each after the run
ACCEPTANCE: dict[int, tuple[str, list]] = {}


def acceptance_lines() -> list[str]:
    lines = []
    for n in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(p[1] for p in parts)
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
    return lines


def preset_config(name, **overrides):
    doc = presets.preset(name)
    doc.update(overrides)
    return config_from_dict(doc)


@pytest.fixture(scope="session")
def fig3():
    return preset_config("fig3").coeffs


@pytest.fixture(scope="session")
def fig4():
    return preset_config("fig4").coeffs


@pytest.fixture(scope="session")
def fig5():
    return preset_config("fig5").coeffs


@pytest.fixture(scope="session")
def neg20():
    return preset_config("neg20").coeffs


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines():
            terminalreporter.write_line(line)
