"""Lifts from a manifold M to its tangent bundle TM.

Complete lifts of multivectors follow f^C = y^k d_k f, the usual complete
lift of vector fields and the Leibniz rule (P ^ Q)^C = P^C ^ Q^V + P^V ^ Q^C.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

from .brackets import lie_derivative
from .errors import StructuralError
from .geometry import (
    LinearConnection,
    Multivector,
    NonlinearConnection,
    OneForm,
    SymCovariant,
    _add_into,
    wedge,
)
from .ring import RatFunc


def _base_chart(obj, chart):
    c = chart if chart is not None else getattr(obj, "chart", None)
    if c is None:
        raise StructuralError("a base chart is required to lift a bare function")
    if c.is_tangent:
        raise StructuralError("lifts start from a base chart")
    return c


# -- the polynomial isomorphism ---------------------------------------------

def iota(G):
    """Fiberwise polynomial of a symmetric covariant tensor (or one-form) on TM."""
    if isinstance(G, OneForm):
        G = SymCovariant.from_oneform(G)
    return G.to_poly()


def linear_function(alpha):
    """l(alpha) = alpha_i y^i."""
    return iota(alpha)


def iota_inverse(chart, F, degree=None):
    """Symmetric tensor with iota-image F; F must be fiberwise homogeneous."""
    return SymCovariant.from_poly(chart, F, degree)


# -- vertical and complete lifts ---------------------------------------------

def _shift(key, n, flags):
    """Reindex a base tuple onto TM: slot a goes to the fiber block when flags[a]."""
    return tuple(i + n if f else i for i, f in zip(key, flags))


def vertical_lift(obj, chart=None):
    """f^V = f o pi, X^V = X^i d/dy^i, extended multiplicatively to multivectors."""
    M = _base_chart(obj, chart)
    tm = M.tangent
    if isinstance(obj, (RatFunc, int, Fraction)):
        return tm.coerce(M.coerce(obj))
    if isinstance(obj, Multivector):
        n = M.arity
        comps = {tuple(i + n for i in key): tm.coerce(v) for key, v in obj.comps.items()}
        return Multivector(tm, obj.degree, comps, check=False)
    raise TypeError(f"cannot take the vertical lift of {type(obj).__name__}")


def _complete_function(f, M):
    tm = M.tangent
    n = M.arity
    total = tm.zero()
    for k in range(n):
        d = f.diff(k)
        if not d.is_zero():
            total = total + tm.coerce(d) * tm.y(k)
    return total


def complete_lift(obj, chart=None):
    """Complete lift of a function, vector field or multivector."""
    M = _base_chart(obj, chart)
    tm = M.tangent
    n = M.arity
    if isinstance(obj, (RatFunc, int, Fraction)):
        return _complete_function(M.coerce(obj), M)
    if not isinstance(obj, Multivector):
        raise TypeError(f"cannot take the complete lift of {type(obj).__name__}")
    if obj.degree == 0:
        return Multivector.function(tm, _complete_function(obj.scalar, M))
    out = {}
    k = obj.degree
    for key, v in obj.comps.items():
        vc = _complete_function(v, M)
        if not vc.is_zero():
            _add_into(out, _shift(key, n, [True] * k), vc)
        vv = tm.coerce(v)
        # (d_{i1} ^ ... ^ d_{ik})^C: one slot horizontal, the others vertical
        for pos in range(k):
            flags = [a != pos for a in range(k)]
            piece = Multivector.basis(tm, _shift(key, n, flags))
            for kk, s in piece.comps.items():
                _add_into(out, kk, vv * s)
    return Multivector(tm, k, out, check=False)


def euler_field(tm):
    """E = y^i d/dy^i."""
    if not tm.is_tangent:
        raise StructuralError("the Euler field lives on a tangent chart")
    n = tm.n
    return Multivector.vector(tm, {n + i: tm.y(i) for i in range(n)})


# -- semisprays ---------------------------------------------------------------

class Semispray:
    """Second order vector field S = y^i d/dx^i + sigma^i(x, y) d/dy^i."""

    def __init__(self, field):
        tm = field.chart
        if not tm.is_tangent or field.degree != 1:
            raise StructuralError("a semispray is a vector field on a tangent chart")
        for i in range(tm.n):
            if field[i] != tm.y(i):
                raise StructuralError(f"x-component {i + 1} of a semispray must be y{i + 1}")
        self.field = field

    @property
    def chart(self):
        return self.field.chart

    def sigma(self, i):
        return self.field[self.chart.n + i]

    def __eq__(self, other):
        return isinstance(other, Semispray) and self.field == other.field

    __hash__ = None


def geodesic_spray(conn):
    """S = y^i d/dx^i - y^i y^k Gamma^j_{ik} d/dy^j."""
    M = conn.chart
    tm = M.tangent
    n = M.arity
    comps = {i: tm.y(i) for i in range(n)}
    for (j, i, k), g in conn.gamma.items():
        comps[n + j] = comps.get(n + j, tm.zero()) - tm.coerce(g) * tm.y(i) * tm.y(k)
    return Semispray(Multivector.vector(tm, comps))


def almost_tangent(X):
    """F X for F = d/dy^i (x) dx^i."""
    tm = X.chart
    n = tm.n
    return Multivector.vector(tm, {n + i: X[i] for i in range(n)})


# -- nonlinear connections ----------------------------------------------------

def nonlinear_curvature(N):
    """R^k_{ij} = delta_i Gamma^k_j - delta_j Gamma^k_i, keyed (k, i, j) in both orders."""
    n = N.chart.n
    deltas = [N.delta(i) for i in range(n)]
    R = {}
    for k in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                v = deltas[i].apply(N(k, j)) - deltas[j].apply(N(k, i))
                if not v.is_zero():
                    R[(k, i, j)] = v
                    R[(k, j, i)] = -v
    return R


def horizontal_lift_bivector(w, N):
    """w^H = 1/2 w^{ij} delta_i ^ delta_j."""
    if w.degree != 2:
        raise StructuralError("horizontal_lift_bivector expects a bivector")
    if N.chart.base != w.chart:
        raise StructuralError("connection and bivector live on different charts")
    tm = N.chart
    deltas = [N.delta(i) for i in range(tm.n)]
    out = Multivector.zero(tm, 2)
    for (i, j), v in w.comps.items():
        out = out + wedge(deltas[i], deltas[j]) * tm.coerce(v)
    return out


# -- the graded nabla-lift ----------------------------------------------------

def _require_torsion_free(conn):
    if not isinstance(conn, LinearConnection):
        raise TypeError("expected a LinearConnection")
    if not conn.torsion_free:
        raise StructuralError("the graded nabla-lift needs a torsion-free connection")


def graded_nabla_lift(w, conn):
    """W = -1/2 L_S w^C for the geodesic spray S of a torsion-free connection."""
    _require_torsion_free(conn)
    S = geodesic_spray(conn)
    return lie_derivative(S.field, complete_lift(w)) * Fraction(-1, 2)


def graded_nabla_lift_closed(w, conn):
    """The same bivector from its coordinate expansion.

    W = 1/2 w^{ij} dx_i ^ dx_j - y^a w^{ik} G^j_{ka} dx_i ^ dy_j
        - 1/4 y^a y^b K^{ij}_{ab} dy_i ^ dy_j
    with K^{ij}_{ab} = d_a d_b w^{ij} - d_k w^{ij} G^k_{ab} + w^{kj} d_k G^i_{ab}
    - w^{ki} d_k G^j_{ab} + 2 d_b w^{kj} G^i_{ka} - 2 d_b w^{ki} G^j_{ka}.
    """
    _require_torsion_free(conn)
    M = w.chart
    tm = M.tangent
    n = M.arity
    G = conn
    out = {}
    for (i, j), v in w.comps.items():
        _add_into(out, (i, j), tm.coerce(v))
    for i in range(n):
        for j in range(n):
            for a in range(n):
                s = M.zero()
                for k in range(n):
                    s = s + w[i, k] * G(j, k, a)
                if not s.is_zero():
                    _add_into(out, (i, n + j), -(tm.coerce(s) * tm.y(a)))
    dw = {(i, j, k): w[i, j].diff(k) for i in range(n) for j in range(n) for k in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            total = tm.zero()
            for a in range(n):
                for b in range(n):
                    K = w[i, j].diff(a).diff(b)
                    for k in range(n):
                        K = (K - dw[i, j, k] * G(k, a, b)
                             + w[k, j] * G(i, a, b).diff(k) - w[k, i] * G(j, a, b).diff(k)
                             + dw[k, j, b] * G(i, k, a) * 2 - dw[k, i, b] * G(j, k, a) * 2)
                    if not K.is_zero():
                        total = total + tm.coerce(K) * tm.y(a) * tm.y(b)
            # the sum over all (i, j) doubles the sorted component: -1/4 * 2
            if not total.is_zero():
                _add_into(out, (n + i, n + j), total * Fraction(-1, 2))
    return Multivector(tm, 2, out, check=False)


def sym_nabla(conn, H):
    """Symmetrized covariant derivative: S_k -> S_{k+1}."""
    if isinstance(H, OneForm):
        H = SymCovariant.from_oneform(H)
    M = conn.chart
    if H.chart != M:
        raise StructuralError("chart mismatch")
    n = M.arity
    k = H.degree
    cache = {}

    def nab(a, J):
        key = (a, J)
        if key not in cache:
            v = H[J].diff(a)
            for pos, j in enumerate(J):
                for b in range(n):
                    g = conn(b, a, j)
                    if not g.is_zero():
                        v = v - g * H[J[:pos] + (b,) + J[pos + 1:]]
            cache[key] = v
        return cache[key]

    out = {}
    scale = Fraction(1, k + 1)
    for I in combinations_with_replacement(range(n), k + 1):
        v = M.zero()
        for l in range(k + 1):
            v = v + nab(I[l], tuple(sorted(I[:l] + I[l + 1:])))
        if not v.is_zero():
            out[I] = v * scale
    return SymCovariant(M, k + 1, out, check=False)
