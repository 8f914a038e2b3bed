"""Acceptance suite: one PASS/FAIL line per criterion, all checks at exact equality.

Random inputs come from fixed seeds so every run sees the same objects.
Run ``python tests/test_acceptance.py`` for the bare report.
"""
import random
import subprocess
import sys
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE, R2, R3, flat_connection_from, model_objects  # noqa: E402
from poissonlift.brackets import (  # noqa: E402
    AlgebroidSymTensor,
    cotangent_algebroid,
    lichnerowicz_coboundary,
    lie_derivative,
    poisson_bracket,
    schouten_bracket,
    sym_bracket,
    sym_odot,
    tangent_algebroid,
)
from poissonlift.geometry import (  # noqa: E402
    LinearConnection,
    Metric,
    Multivector,
    NonlinearConnection,
    OneForm,
    SymCovariant,
    nabla_covariant,
)
from poissonlift.lifts import (  # noqa: E402
    complete_lift,
    euler_field,
    geodesic_spray,
    graded_nabla_lift,
    graded_nabla_lift_closed,
    horizontal_lift_bivector,
    iota,
    linear_function,
    sym_nabla,
    vertical_lift,
)
from poissonlift.poisson import (  # noqa: E402
    GradedParts,
    check_graded_poisson,
    contravariant_curvature,
    hamiltonian_field,
    horizontal_poisson_condition,
    is_poisson,
    is_transversal_poisson,
    modular_field,
    nabla_squared_condition,
    riemannian_volume,
    sasaki_volume,
    shape_analysis,
    vertical_foliation,
)
from poissonlift.ring import Poly, RatFunc  # noqa: E402

SO3 = model_objects("so3")["w"]
SYMPL2 = model_objects("symplectic2")["w"]
POISSON_SCENARIOS = ["so3", "symplectic2", "symplectic4", "heisenberg", "zero3"] + \
    [f"random-linear({s})" for s in range(5)]


def verdict(number, name, ok):
    line = f"criterion {number:2d} {name}: {'PASS' if ok else 'FAIL'}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


# -- seeded generators ------------------------------------------------------------------

def rpoly(rng, chart, max_deg=1, terms=3):
    n = chart.arity
    out = {}
    for _ in range(rng.randint(1, terms)):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return RatFunc(Poly(chart.vars, out))


def rsym(rng, chart, degree, max_deg=1):
    keys = list(combinations_with_replacement(range(chart.arity), degree))
    return SymCovariant(chart, degree, {k: rpoly(rng, chart, max_deg)
                                        for k in rng.sample(keys, min(2, len(keys)))})


def rmulti(rng, chart, degree, max_deg=2):
    keys = list(combinations(range(chart.arity), degree))
    return Multivector(chart, degree, {k: rpoly(rng, chart, max_deg)
                                       for k in rng.sample(keys, min(2, len(keys)))})


def coframe(chart):
    return [OneForm.coordinate(chart, i) for i in range(chart.arity)]


# -- criteria -------------------------------------------------------------------------------

def test_criterion_01_complete_lift_poisson():
    ok = all(is_poisson(model_objects(n)["w"]) and is_poisson(complete_lift(model_objects(n)["w"]))
             for n in ["so3", "symplectic2", "heisenberg"] + [f"random-linear({s})" for s in range(5)])
    control = model_objects("random-quadratic(1)")["w"]
    d, dC = is_poisson(control), is_poisson(complete_lift(control))
    ok = ok and not d and not dC and d.witness is not None and dC.witness is not None
    verdict(1, "complete lift is Poisson", ok)


def test_criterion_02_iota_is_poisson_isomorphism():
    rng = random.Random(2)
    ok = True
    for w in (SO3, SYMPL2):
        A, wC, chart = cotangent_algebroid(w), complete_lift(w), w.chart
        for _ in range(10):
            G, H = (rsym(rng, chart, rng.randint(0, 3)) for _ in range(2))
            br = sym_bracket(A, AlgebroidSymTensor.from_symcovariant(A, G),
                             AlgebroidSymTensor.from_symcovariant(A, H))
            ok = ok and iota(br.to_symcovariant()) == poisson_bracket(wC, iota(G), iota(H))
    verdict(2, "iota is a Poisson isomorphism", ok)


def test_criterion_03_symmetric_bracket_axioms():
    rng = random.Random(3)
    ok = True
    for A in (tangent_algebroid(R3), cotangent_algebroid(SO3)):
        keys = {k: list(combinations_with_replacement(range(A.rank), k)) for k in range(3)}
        for _ in range(20):
            def elt():
                k = rng.randint(0, 2)
                picks = rng.sample(keys[k], min(2, len(keys[k])))
                return AlgebroidSymTensor(A, k, {p: rpoly(rng, R3) for p in picks})
            G, H, K = elt(), elt(), elt()
            b = lambda u, v: sym_bracket(A, u, v)  # noqa: E731
            ok = (ok and b(H, G) == -b(G, H)
                  and b(G, sym_odot(H, K)) == sym_odot(b(G, H), K) + sym_odot(H, b(G, K))
                  and (b(b(G, H), K) + b(b(H, K), G) + b(b(K, G), H)).is_zero())
    verdict(3, "symmetric bracket axioms", ok)


def test_criterion_04_modular_field_of_complete_lift():
    cases = [(SO3, Metric(R3, {(0, 0): 1, (1, 1): 1, (2, 2): 1})),
             (SYMPL2, Metric(R2, {(0, 0): 1, (1, 1): 1 + R2.x(0) ** 2}))]
    ok = all(modular_field(complete_lift(w), sasaki_volume(g))
             == vertical_lift(modular_field(w, riemannian_volume(g))) * 2 for w, g in cases)
    verdict(4, "modular field of the complete lift", ok)


def test_criterion_05_lift_commutes_with_coboundary():
    rng = random.Random(5)
    wC = complete_lift(SO3)
    Qs = [rmulti(rng, R3, 1) for _ in range(10)] + [rmulti(rng, R3, 2, 1) for _ in range(5)]
    ok = all(complete_lift(lichnerowicz_coboundary(SO3, Q))
             == lichnerowicz_coboundary(wC, complete_lift(Q)) for Q in Qs)
    verdict(5, "complete lift commutes with the coboundary", ok)


def test_criterion_06_graded_poisson_equivalence():
    rng = random.Random(6)
    flat = LinearConnection(R2, {(1, 0, 0): R2.x(0) * 6})
    good = shape_analysis(horizontal_lift_bivector(SYMPL2, NonlinearConnection.from_linear(flat))).parts
    broken_flat = GradedParts(SYMPL2, A={(0, 1, 1): R2.x(0)})
    broken_psi = GradedParts(SYMPL2, A=good.A, psi={(0, 1): rsym(rng, R2, 2)})
    cases = [
        shape_analysis(complete_lift(SO3)).parts.graded_part(),
        shape_analysis(graded_nabla_lift(SO3, LinearConnection(R3, {}))).parts,
        good, broken_flat, broken_psi,
    ]
    reports = [check_graded_poisson(p) for p in cases]
    ok = all(r["verdict"].ok == is_poisson(p.assemble()).ok for r, p in zip(reports, cases))
    good_r, flat_r, psi_r = reports[2:]
    ok = ok and good_r.passed and not contravariant_curvature(good.connection())
    ok = ok and not flat_r["flat_connection"] and psi_r["flat_connection"]
    ok = ok and not psi_r["psi_parallel"]
    verdict(6, "graded Poisson conditions match Jacobi", ok)


def test_criterion_07_spray_derivative():
    rng = random.Random(7)
    conns = [flat_connection_from(R3, [0, R3.x(0) ** 2, R3.x(0) * R3.x(1)]),
             LinearConnection(R3, {(0, 1, 1): R3.x(0), (2, 0, 1): 1, (2, 1, 0): 1})]
    ok = True
    for conn in conns:
        S = geodesic_spray(conn).field
        for _ in range(10):
            H = rsym(rng, R3, rng.randint(1, 3))
            ok = ok and iota(sym_nabla(conn, H)) == S.apply(iota(H))
    verdict(7, "symmetrized covariant derivative is the spray derivative", ok)


def _sym_bracket_sc(A, G, H):
    return sym_bracket(A, AlgebroidSymTensor.from_symcovariant(A, G),
                       AlgebroidSymTensor.from_symcovariant(A, H)).to_symcovariant()


def _nabla_lift_characterized(w, conn):
    chart = w.chart
    W = graded_nabla_lift(w, conn)
    A = cotangent_algebroid(w)
    V = lambda f: vertical_lift(f, chart)  # noqa: E731
    xs = [chart.x(i) for i in range(chart.arity)]
    ok = W == graded_nabla_lift_closed(w, conn)
    ok = ok and is_transversal_poisson(W, vertical_foliation(chart.tangent)).passed
    ok = ok and all(poisson_bracket(W, V(f), V(g)) == V(poisson_bracket(w, f, g))
                    for f in xs for g in xs)
    ok = ok and all(poisson_bracket(W, linear_function(a), V(f))
                    == -linear_function(nabla_covariant(conn, a, hamiltonian_field(w, f)))
                    for a in coframe(chart) for f in xs)
    for a in coframe(chart):
        for b in coframe(chart):
            sa, sb = SymCovariant.from_oneform(a), SymCovariant.from_oneform(b)
            inner = (sym_nabla(conn, _sym_bracket_sc(A, sa, sb))
                     - _sym_bracket_sc(A, sym_nabla(conn, sa), sb)
                     - _sym_bracket_sc(A, sa, sym_nabla(conn, sb)))
            ok = ok and poisson_bracket(W, linear_function(a), linear_function(b)) == \
                iota(inner) * Fraction(-1, 2)
    return ok


def test_criterion_08_graded_nabla_lift():
    ok = _nabla_lift_characterized(SO3, flat_connection_from(R3, [0, R3.x(0) ** 2, R3.x(0) * R3.x(1)]))
    ok = ok and _nabla_lift_characterized(SYMPL2, LinearConnection(R2, {(0, 1, 1): R2.x(0)}))
    verdict(8, "graded nabla-lift closed form and characterization", ok)


def test_criterion_09_horizontal_lift_poisson():
    TM3 = R3.tangent
    flat = NonlinearConnection.from_linear(flat_connection_from(R3, [0, R3.x(0) ** 2, 0]))
    curved = NonlinearConnection.from_linear(LinearConnection(R2, {(0, 1, 1): R2.x(0)}))
    # curvature along d/dy^1 while the Casimir direction absorbs it
    aligned = NonlinearConnection(TM3, {(0, 2): (TM3.x(0) ** 2 + TM3.x(1) ** 2) / 2})
    non_poisson = model_objects("random-quadratic(1)")["w"]
    cases = [(SO3, flat, True), (SYMPL2, curved, False), (SO3, aligned, True),
             (non_poisson, flat, False)]
    ok = True
    for w, N, expected in cases:
        cond = horizontal_poisson_condition(w, N)["verdict"].ok
        ok = ok and cond == is_poisson(horizontal_lift_bivector(w, N)).ok == expected
    verdict(9, "horizontal lift Poisson condition", ok)


def _compat_triplet(w, conn):
    wH = horizontal_lift_bivector(w, NonlinearConnection.from_linear(conn))
    wC = complete_lift(w)
    return (nabla_squared_condition(w, conn).ok, schouten_bracket(wH, wC).is_zero(),
            is_poisson(wH + wC).ok)


def test_criterion_10_compatibility_with_complete_lift():
    passing = [(SYMPL2, flat_connection_from(R2, [0, R2.x(0) ** 3])),
               (SO3, LinearConnection(R3, {}))]
    ok = all(_compat_triplet(w, c) == (True, True, True) for w, c in passing)
    curved = LinearConnection(R2, {(0, 0, 0): R2.x(1), (1, 1, 1): R2.x(0)})
    ok = ok and _compat_triplet(SYMPL2, curved) == (False, False, False)
    verdict(10, "horizontal and complete lifts are compatible", ok)


def test_criterion_11_homogeneity():
    ok = True
    for name in POISSON_SCENARIOS:
        w = model_objects(name)["w"]
        wC = complete_lift(w)
        ok = ok and lie_derivative(euler_field(wC.chart), wC) == -wC
    verdict(11, "complete lift is homogeneous", ok)


def _cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "poissonlift", *args], input=stdin,
                          capture_output=True, text=True, timeout=60)


def test_criterion_12_cli_end_to_end():
    model = _cli("scenario", "so3").stdout
    lifted = _cli("lift", "complete", stdin=model).stdout
    res = _cli("check-poisson", stdin=lifted)
    bad = _cli("check-poisson", stdin=model.replace("[1,2]", "[1,2,"))
    ok = res.returncode == 0 and res.stdout.strip() == "poisson: PASS"
    ok = ok and bad.returncode == 2 and "error" in bad.stderr
    verdict(12, "CLI end to end", ok)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
