import pytest

CRITERIA = {
    1: "Airy quadrature vs Taylor oracle and asymptotic series",
    2: "Plemelj identity, projection idempotence, Riesz and ray bounds",
    3: "normalized solver: scalar closed form, factorization independence, det, dense inverse",
    4: "Painleve II: Airy tail, ODE connection, cyclic triples",
    5: "inverse scattering: roundtrip, NLS and MKdV evolution, Painleve region",
    6: "orthogonal polynomials: residuals and recurrence coefficients",
    7: "Szego: determinant limit, Fredholm identity, resolvent route, lens decay, winding",
    8: "sine kernel resolvent vs Nystrom and closure",
    9: "Tracy-Widom distribution properties",
    10: "CLI byte-identical output across runs and thread counts",
}


def pytest_configure(config):
    config._rhlab_criteria = {}


@pytest.fixture
def criterion(request):
    """record(n, ok, detail): log a criterion outcome for the terminal summary and assert it."""
    store = request.config._rhlab_criteria

    def record(n, ok, detail):
        store[n] = (bool(ok), detail)
        assert ok, f"criterion {n}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = getattr(config, "_rhlab_criteria", {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n in store:
            ok, detail = store[n]
            terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
        else:
            terminalreporter.write_line(f"CRITERION {n}: NOT RUN  {title}")
