from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R2, R3, model_objects, multivectors, oneforms, polys, symtensors
from poissonlift.brackets import (
    AlgebroidSymTensor,
    LieAlgebroid,
    algebroid_lie_derivative,
    cotangent_algebroid,
    koszul_bracket,
    lichnerowicz_coboundary,
    lie_bracket,
    lie_derivative,
    poisson_bracket,
    schouten_bracket,
    sym_bracket,
    sym_odot,
    tangent_algebroid,
)
from poissonlift.errors import StructuralError
from poissonlift.geometry import Multivector, OneForm, SymCovariant, interior_product, sharp, wedge

SO3 = model_objects("so3")["w"]


def fn(f, chart=R3):
    return Multivector.function(chart, f)


def sign(k):
    return -1 if k % 2 else 1


# -- Lie and Schouten brackets ------------------------------------------------------

@given(multivectors(R3, 1), multivectors(R3, 1), polys(R3))
def test_lie_bracket_is_commutator(X, Y, f):
    Z = lie_bracket(X, Y)
    assert Z.apply(f) == X.apply(Y.apply(f)) - Y.apply(X.apply(f))


@given(multivectors(R3, 1), multivectors(R3, 1))
def test_schouten_extends_lie_bracket(X, Y):
    assert schouten_bracket(X, Y) == lie_bracket(X, Y)


@given(multivectors(R3, 1), polys(R3))
def test_schouten_on_functions(X, f):
    assert schouten_bracket(X, fn(f)) == fn(X.apply(f))


@given(multivectors(R3, 2), polys(R3))
def test_bivector_with_function_is_minus_hamiltonian(w, f):
    assert schouten_bracket(w, fn(f)) == -sharp(w, OneForm.differential(R3, f))


@pytest.mark.parametrize("p,q", [(1, 2), (2, 2), (1, 3), (2, 1)])
@settings(max_examples=10)
@given(data=st.data())
def test_graded_antisymmetry(p, q, data):
    P = data.draw(multivectors(R3, p))
    Q = data.draw(multivectors(R3, q))
    assert schouten_bracket(P, Q) == schouten_bracket(Q, P) * (-sign((p - 1) * (q - 1)))


@settings(max_examples=10)
@given(multivectors(R3, 2, max_deg=1), multivectors(R3, 1), multivectors(R3, 1))
def test_leibniz_rule(P, Q, R):
    p, q = 2, 1
    lhs = schouten_bracket(P, wedge(Q, R))
    rhs = wedge(schouten_bracket(P, Q), R) + wedge(Q, schouten_bracket(P, R)) * sign((p - 1) * q)
    assert lhs == rhs


@settings(max_examples=10)
@given(multivectors(R3, 1), multivectors(R3, 2, max_deg=1), multivectors(R3, 2, max_deg=1))
def test_graded_jacobi(X, P, Q):
    """[X,[P,Q]] = [[X,P],Q] + [P,[X,Q]] for a vector field X."""
    lhs = schouten_bracket(X, schouten_bracket(P, Q))
    rhs = schouten_bracket(schouten_bracket(X, P), Q) + schouten_bracket(P, schouten_bracket(X, Q))
    assert lhs == rhs


@given(polys(R3), polys(R3), polys(R3))
def test_schouten_square_measures_jacobiator(f, g, h):
    """[w,w](df,dg,dh) = 2 * cyclic sum of {f,{g,h}} in this sign convention."""
    w = Multivector(R3, 2, {(0, 1): R3.x(2) ** 2, (1, 2): R3.x(0)})
    ww = schouten_bracket(w, w)
    d = [OneForm.differential(R3, u) for u in (f, g, h)]
    pb = lambda a, b: poisson_bracket(w, a, b)  # noqa: E731
    cyc = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))
    assert ww(*d) == cyc * 2


def test_so3_is_poisson():
    assert schouten_bracket(SO3, SO3).is_zero()


def test_poisson_bracket_so3():
    x1, x2, x3 = (R3.x(i) for i in range(3))
    assert poisson_bracket(SO3, x1, x2) == x3
    assert poisson_bracket(SO3, x2, x3) == x1


# -- Lie derivatives ----------------------------------------------------------------

@given(multivectors(R3, 1), oneforms(R3), multivectors(R3, 1))
def test_lie_derivative_of_form_is_natural(X, a, Y):
    assert X.apply(a(Y)) == lie_derivative(X, a)(Y) + a(lie_bracket(X, Y))


@given(multivectors(R3, 1), polys(R3))
def test_lie_derivative_commutes_with_d(X, f):
    assert lie_derivative(X, OneForm.differential(R3, f)) == OneForm.differential(R3, X.apply(f))


@given(multivectors(R2, 1), symtensors(R2, 2), multivectors(R2, 1))
def test_lie_derivative_of_symmetric_tensor(X, G, Y):
    assert X.apply(G(Y, Y)) == lie_derivative(X, G)(Y, Y) + G(lie_bracket(X, Y), Y) * 2


def test_lie_derivative_rejects_non_vector():
    with pytest.raises(StructuralError):
        lie_derivative(SO3, R3.x(0))


# -- Koszul bracket and the Lichnerowicz coboundary -----------------------------------

@given(polys(R3), polys(R3))
def test_koszul_bracket_of_exact_forms(f, g):
    df, dg = OneForm.differential(R3, f), OneForm.differential(R3, g)
    assert koszul_bracket(SO3, df, dg) == OneForm.differential(R3, poisson_bracket(SO3, f, g))


@given(oneforms(R3), oneforms(R3))
def test_sharp_is_a_morphism(a, b):
    assert sharp(SO3, koszul_bracket(SO3, a, b)) == lie_bracket(sharp(SO3, a), sharp(SO3, b))


@given(multivectors(R3, 1))
def test_coboundary_squares_to_zero(X):
    assert lichnerowicz_coboundary(SO3, lichnerowicz_coboundary(SO3, X)).is_zero()


@given(polys(R3))
def test_coboundary_of_function_is_hamiltonian(f):
    assert lichnerowicz_coboundary(SO3, f) == sharp(SO3, OneForm.differential(R3, f))


# -- Lie algebroids ---------------------------------------------------------------------

def test_tangent_and_cotangent_algebroids_check():
    assert tangent_algebroid(R3).check()[0]
    A = cotangent_algebroid(SO3)
    assert A.check()[0]
    # structure functions of the coframe: c^k_{ij} = d_k w^{ij}
    assert A.c(2, 0, 1) == R3.one() and A.c(0, 1, 2) == R3.one()


def test_broken_algebroid_is_detected():
    bad = LieAlgebroid(R2, 1, anchor={(0, 0): R2.x(1)}, structure={})
    A = LieAlgebroid(R2, 2, anchor={(0, 0): 1, (1, 1): R2.x(0)}, structure={})
    ok, witness = A.check()
    assert not ok and witness is not None
    assert bad.check()[0]


def test_cotangent_of_non_poisson_fails_check():
    w = Multivector(R3, 2, {(0, 1): R3.x(2), (0, 2): R3.x(2), (1, 2): R3.x(0)})
    assert not cotangent_algebroid(w).check()[0]


# -- the symmetric bracket on S(A) ------------------------------------------------------

ALGEBROIDS = {"tangent": tangent_algebroid(R3), "cotangent": cotangent_algebroid(SO3)}


def sym_elements(A, degree):
    keys = list(combinations_with_replacement(range(A.rank), degree))
    return st.dictionaries(st.sampled_from(keys), polys(A.chart, 1, 2), max_size=2).map(
        lambda c: AlgebroidSymTensor(A, degree, c))


def any_sym(A):
    return st.integers(0, 2).flatmap(lambda k: sym_elements(A, k))


@pytest.mark.parametrize("name", sorted(ALGEBROIDS))
@settings(max_examples=15)
@given(data=st.data())
def test_sym_bracket_antisymmetric(name, data):
    A = ALGEBROIDS[name]
    G, H = data.draw(any_sym(A)), data.draw(any_sym(A))
    assert sym_bracket(A, H, G) == -sym_bracket(A, G, H)


@pytest.mark.parametrize("name", sorted(ALGEBROIDS))
@settings(max_examples=15)
@given(data=st.data())
def test_sym_bracket_derivation(name, data):
    A = ALGEBROIDS[name]
    G, H, K = (data.draw(any_sym(A)) for _ in range(3))
    lhs = sym_bracket(A, G, sym_odot(H, K))
    rhs = sym_odot(sym_bracket(A, G, H), K) + sym_odot(H, sym_bracket(A, G, K))
    assert lhs == rhs


@pytest.mark.parametrize("name", sorted(ALGEBROIDS))
@settings(max_examples=15)
@given(data=st.data())
def test_sym_bracket_jacobi(name, data):
    A = ALGEBROIDS[name]
    G, H, K = (data.draw(any_sym(A)) for _ in range(3))
    b = lambda u, v: sym_bracket(A, u, v)  # noqa: E731
    assert (b(b(G, H), K) + b(b(H, K), G) + b(b(K, G), H)).is_zero()


@pytest.mark.parametrize("name", sorted(ALGEBROIDS))
def test_sym_bracket_on_sections_is_algebroid_bracket(name):
    A = ALGEBROIDS[name]
    x1, x2, x3 = (R3.x(i) for i in range(3))
    s, t = [x2, R3.zero(), x1 * x3], [R3.one(), x3, R3.zero()]
    lhs = sym_bracket(A, AlgebroidSymTensor.from_section(A, s), AlgebroidSymTensor.from_section(A, t))
    assert lhs == AlgebroidSymTensor.from_section(A, A.bracket(s, t))


def test_sym_bracket_with_function_example():
    """<d1 (.) d2, x1> = d2 on the tangent algebroid of R^2."""
    A = tangent_algebroid(R2)
    d1 = AlgebroidSymTensor.from_section(A, [R2.one(), R2.zero()])
    d2 = AlgebroidSymTensor.from_section(A, [R2.zero(), R2.one()])
    x1 = AlgebroidSymTensor.function(A, R2.x(0))
    assert sym_bracket(A, sym_odot(d1, d2), x1) == d2
    assert sym_bracket(A, x1, AlgebroidSymTensor.function(A, R2.x(1))).is_zero()


@given(symtensors(R3, 2, max_deg=1), polys(R3, 2))
def test_cotangent_bracket_with_function(G, f):
    """<G, f> = -i_{X_f} G on the cotangent algebroid."""
    A = ALGEBROIDS["cotangent"]
    lhs = sym_bracket(A, AlgebroidSymTensor.from_symcovariant(A, G), AlgebroidSymTensor.function(A, f))
    Xf = sharp(SO3, OneForm.differential(R3, f))
    assert lhs.to_symcovariant() == -interior_product(Xf, G)


@given(st.lists(polys(R3, 1, 2), min_size=3, max_size=3), symtensors(R3, 2, max_deg=1))
def test_bracket_with_section_is_lie_derivative(s, G):
    A = ALGEBROIDS["cotangent"]
    T = AlgebroidSymTensor.from_symcovariant(A, G)
    assert sym_bracket(A, AlgebroidSymTensor.from_section(A, s), T) == algebroid_lie_derivative(A, s, T)


def test_sym_odot_normalization():
    A = tangent_algebroid(R2)
    d1 = AlgebroidSymTensor.from_section(A, [R2.one(), R2.zero()])
    d2 = AlgebroidSymTensor.from_section(A, [R2.zero(), R2.one()])
    assert sym_odot(d1, d2)[0, 1] == R2.const(Fraction(1, 2))
    assert sym_odot(d1, d1)[0, 0] == R2.one()


def test_symcovariant_roundtrip():
    A = ALGEBROIDS["cotangent"]
    G = SymCovariant(R3, 2, {(0, 1): R3.x(2), (2, 2): 1})
    assert AlgebroidSymTensor.from_symcovariant(A, G).to_symcovariant() == G
