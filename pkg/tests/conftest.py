import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from opcalab import fixtures
from opcalab.downsets import build_T
from opcalab.finite_models import enumerate_opcas
from opcalab.opas import ks_pairs
from opcalab.poset import all_posets
from opcalab.products import product

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = list(fixtures.OPCAS.values())


def _small_pool():
    """Fixtures, every OPCA on posets of size <= 2, other combinator pins, products and T(V3)."""
    pool = list(FIXTURES)
    for n in (1, 2):
        for p in all_posets(n):
            pool.extend(enumerate_opcas(p, limit=40))
    for a in (fixtures.C2, fixtures.V3):
        pool.extend(a.with_combinators(k, s) for k, s in ks_pairs(a)[1:])
    pool.append(product(fixtures.C2, fixtures.V3).opca)
    pool.append(build_T(fixtures.V3).opca)
    return pool


SMALL_OPCAS = _small_pool()

opcas = st.sampled_from(SMALL_OPCAS)
fixture_opcas = st.sampled_from(FIXTURES)


def elements(a):
    return st.integers(min_value=0, max_value=len(a) - 1)


@pytest.fixture(params=list(fixtures.OPCAS), ids=list(fixtures.OPCAS))
def fixture_opca(request):
    return fixtures.OPCAS[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail, seconds = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {detail}")
