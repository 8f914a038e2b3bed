import os
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from poissonlift.cli import scenario
from poissonlift.geometry import Chart, LinearConnection, Multivector, OneForm, SymCovariant
from poissonlift.ring import Poly, RatFunc

settings.register_profile(
    "exact", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "exact"))

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = []

R3 = Chart("M", ("x1", "x2", "x3"))
R2 = Chart("M", ("x1", "x2"))


def model_objects(name):
    m = scenario(name)
    return {k: e.obj for k, e in m.objects.items()}


@pytest.fixture
def so3():
    return model_objects("so3")["w"]


@pytest.fixture
def sympl2():
    return model_objects("symplectic2")["w"]


# ---------------------------------------------------------------------------
# hypothesis strategies over a fixed chart

def exponents(nvars, max_deg):
    """Exponent tuple of total degree <= max_deg, built from a list of variable picks."""
    return st.lists(st.integers(0, nvars - 1), max_size=max_deg).map(
        lambda picks: tuple(picks.count(i) for i in range(nvars)))


def polys(chart, max_deg=2, max_terms=4, coeff=5):
    """Random polynomial RatFunc on ``chart``."""
    terms = st.dictionaries(exponents(chart.arity, max_deg), st.integers(-coeff, coeff),
                            max_size=max_terms)
    return terms.map(lambda t: RatFunc(Poly(chart.vars, {e: c for e, c in t.items() if c})))


def ratfuncs(chart, max_deg=2):
    """Polynomial over one of a few nonvanishing denominators."""
    dens = [chart.one(), chart.one() + chart.x(0) ** 2, chart.one() * 2 + chart.x(1) ** 2]
    return st.tuples(polys(chart, max_deg), st.sampled_from(dens)).map(lambda p: p[0] / p[1])


def multivectors(chart, degree, max_deg=2, max_terms=3):
    from itertools import combinations
    keys = list(combinations(range(chart.arity), degree))
    return st.dictionaries(st.sampled_from(keys), polys(chart, max_deg, max_terms),
                           max_size=len(keys)).map(lambda c: Multivector(chart, degree, c))


def oneforms(chart, max_deg=2):
    return st.lists(polys(chart, max_deg, 3), min_size=chart.arity, max_size=chart.arity).map(
        lambda c: OneForm(chart, c))


def symtensors(chart, degree, max_deg=2, max_terms=3):
    from itertools import combinations_with_replacement
    keys = list(combinations_with_replacement(range(chart.arity), degree))
    return st.dictionaries(st.sampled_from(keys), polys(chart, max_deg, max_terms),
                           max_size=4).map(lambda c: SymCovariant(chart, degree, c))


def torsion_free_connections(chart, max_deg=1):
    """Random symmetric Christoffel symbols Gamma^k_{ij} = Gamma^k_{ji}."""
    from itertools import combinations_with_replacement
    keys = [(k, i, j) for k in range(chart.arity)
            for i, j in combinations_with_replacement(range(chart.arity), 2)]

    def build(c):
        gamma = {}
        for (k, i, j), v in c.items():
            gamma[(k, i, j)] = v
            gamma[(k, j, i)] = v
        return LinearConnection(chart, gamma)

    return st.dictionaries(st.sampled_from(keys), polys(chart, max_deg, 2), max_size=3).map(build)


def run_cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "poissonlift", *args], input=stdin,
                          capture_output=True, text=True, timeout=60)


def flat_connection_from(chart, shifts):
    """Pullback of the trivial connection under u^a = x^a + s_a(x^1..x^{a-1}).

    Gamma^k_{ij} = (J^{-1})^k_a d_i d_j u^a with J the (unipotent) Jacobian.
    """
    n = chart.arity
    u = [chart.x(a) + chart.coerce(shifts[a]) for a in range(n)]
    J = [[u[a].diff(b) for b in range(n)] for a in range(n)]
    # invert the unipotent lower-triangular Jacobian by forward substitution
    inv = [[chart.one() if a == b else chart.zero() for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(a):
            s = chart.zero()
            for c in range(b, a):
                s = s + J[a][c] * inv[c][b]
            inv[a][b] = -s
    gamma = {}
    for k in range(n):
        for i in range(n):
            for j in range(n):
                v = chart.zero()
                for a in range(n):
                    v = v + inv[k][a] * u[a].diff(i).diff(j)
                if not v.is_zero():
                    gamma[(k, i, j)] = v
    return LinearConnection(chart, gamma)


def flat_connections(chart, max_deg=2):
    """Flat torsion-free connections; the shift of u^a only uses x^1..x^{a-1}."""
    def shift(a):
        if a == 0:
            return st.just(chart.zero())
        sub = Chart("S", chart.coords[:a])
        return polys(sub, max_deg, 2).map(lambda p: RatFunc(p.num.extend(chart.vars)))

    return st.tuples(*[shift(a) for a in range(chart.arity)]).map(
        lambda s: flat_connection_from(chart, s))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
