"""Lie, Schouten-Nijenhuis, Koszul and symmetric algebroid brackets.

The Schouten bracket uses the coordinate formula

    [P, Q] = sum_k (P <-d_k) ^ d_k Q - (-1)^{(p-1)(q-1)} (Q <-d_k) ^ d_k P

where ``P <-d_k`` removes the basis field d_k from the right.  With this
sign choice the bracket restricts to the Lie bracket on vector fields and
``[w, w](df, dg, dh) = 2 sum_cyclic {{f, g}, h}``.
"""

from fractions import Fraction

from .errors import StructuralError
from .geometry import (
    Multivector,
    OneForm,
    SymCovariant,
    VolumeForm,
    _add_into,
    multiplicity,
    right_derivative,
    same_chart,
    sharp,
    wedge,
)
from .ring import Poly, RatFunc


def _as_multivector(P):
    if isinstance(P, Multivector):
        return P
    raise TypeError(f"expected a Multivector, got {type(P).__name__}")


def lie_bracket(X, Y):
    """[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i."""
    same_chart(X.chart, Y.chart)
    if X.degree != 1 or Y.degree != 1:
        raise StructuralError("lie_bracket expects vector fields")
    n = X.chart.arity
    comps = {}
    for i in range(n):
        v = X.apply(Y[i]) - Y.apply(X[i])
        if not v.is_zero():
            comps[(i,)] = v
    return Multivector(X.chart, 1, comps, check=False)


def schouten_bracket(P, Q):
    """Schouten-Nijenhuis bracket of multivectors of degrees p, q (result degree p+q-1)."""
    P, Q = _as_multivector(P), _as_multivector(Q)
    same_chart(P.chart, Q.chart)
    p, q = P.degree, Q.degree
    deg = p + q - 1
    if deg < 0:
        return Multivector.zero(P.chart, 0)
    out = Multivector.zero(P.chart, deg)
    n = P.chart.arity
    sign = -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1
    for k in range(n):
        if p:
            rp = right_derivative(P, k)
            if not rp.is_zero():
                dq = Q.diff(k)
                if not dq.is_zero():
                    out = out + wedge(rp, dq)
        if q:
            rq = right_derivative(Q, k)
            if not rq.is_zero():
                dp = P.diff(k)
                if not dp.is_zero():
                    t = wedge(rq, dp)
                    out = out + t if sign > 0 else out - t
    return out


def poisson_bracket(P, f, g):
    """{f, g}_P = P(df, dg) for a bivector P."""
    chart = P.chart
    f, g = chart.coerce(f), chart.coerce(g)
    n = chart.arity
    df = [f.diff(i) for i in range(n)]
    dg = [g.diff(i) for i in range(n)]
    total = chart.zero()
    for (i, j), v in P.comps.items():
        t = df[i] * dg[j] - df[j] * dg[i]
        if not t.is_zero():
            total = total + v * t
    return total


def _lie_derivative_oneform(X, beta):
    n = X.chart.arity
    comps = []
    for k in range(n):
        v = X.apply(beta[k])
        for i in range(n):
            if not beta[i].is_zero():
                v = v + beta[i] * X[i].diff(k)
        comps.append(v)
    return OneForm(X.chart, comps)


def _lie_derivative_sym(X, G):
    n = G.chart.arity
    from itertools import combinations_with_replacement
    out = {}
    for key in combinations_with_replacement(range(n), G.degree):
        v = X.apply(G[key])
        for pos, j in enumerate(key):
            for a in range(n):
                dx = X[a].diff(j)
                if dx.is_zero():
                    continue
                v = v + G[key[:pos] + (a,) + key[pos + 1:]] * dx
        if not v.is_zero():
            out[key] = v
    return SymCovariant(G.chart, G.degree, out, check=False)


def divergence(X, mu):
    """div_mu X with L_X mu = (div_mu X) mu."""
    same_chart(X.chart, mu.chart)
    total = X.chart.zero()
    for (i,), v in X.comps.items():
        total = total + v.diff(i) + v * mu.log_derivative(i)
    return total


def lie_derivative(X, T):
    """Lie derivative along a vector field.

    Functions give ``X f``; multivectors ``[X, T]``; one-forms and symmetric
    covariant tensors use the coordinate formula.  For a volume form the
    result is the pair ``(div_mu X, mu)`` representing ``(div_mu X) mu``.
    """
    if X.degree != 1:
        raise StructuralError("Lie derivative along a non-vector")
    if isinstance(T, RatFunc):
        return X.apply(T)
    same_chart(X.chart, T.chart)
    if isinstance(T, Multivector):
        return schouten_bracket(X, T)
    if isinstance(T, OneForm):
        return _lie_derivative_oneform(X, T)
    if isinstance(T, SymCovariant):
        return _lie_derivative_sym(X, T)
    if isinstance(T, VolumeForm):
        return divergence(X, T), T
    raise TypeError(f"cannot take the Lie derivative of {type(T).__name__}")


def koszul_bracket(w, alpha, beta):
    """{alpha, beta} = L_{#alpha} beta - L_{#beta} alpha - d(w(alpha, beta))."""
    same_chart(w.chart, alpha.chart)
    same_chart(w.chart, beta.chart)
    sa, sb = sharp(w, alpha), sharp(w, beta)
    wab = w(alpha, beta)
    return (_lie_derivative_oneform(sa, beta) - _lie_derivative_oneform(sb, alpha)
            - OneForm.differential(w.chart, wab))


def lichnerowicz_coboundary(w, Q):
    """sigma_w Q = -[w, Q]."""
    if isinstance(Q, RatFunc):
        Q = Multivector.function(w.chart, Q)
    return -schouten_bracket(w, Q)


# ---------------------------------------------------------------------------
# Lie algebroids and the symmetric Schouten bracket

class LieAlgebroid:
    """Lie algebroid of rank p over a chart, given on a local basis e_1..e_p.

    ``anchor[(i, u)]`` is sigma^i_u, so sigma(e_u) = sigma^i_u d_i, and
    ``structure[(w, u, v)]`` is c^w_{uv} with [e_u, e_v] = c^w_{uv} e_w.
    Only u < v needs to be given; the other order is filled by skewness.
    """

    def __init__(self, chart, rank, anchor=None, structure=None, name="A"):
        self.chart = chart
        self.rank = rank
        self.name = name
        self.anchor = {}
        for (i, u), v in (anchor or {}).items():
            v = chart.coerce(v)
            if not v.is_zero():
                self.anchor[(i, u)] = v
        self.structure = {}
        for (w, u, v), c in (structure or {}).items():
            if u == v:
                continue
            c = chart.coerce(c)
            if c.is_zero():
                continue
            self.structure[(w, u, v)] = c
            self.structure[(w, v, u)] = -c
        names = tuple(f"e{u + 1}" for u in range(rank))
        taken = set(chart.coords)
        names = tuple(nm if nm not in taken else f"_{nm}" for nm in names)
        self._vars = chart.coords + names

    # -- basic data -------------------------------------------------------
    def sigma(self, i, u):
        return self.anchor.get((i, u), self.chart.zero())

    def c(self, w, u, v):
        return self.structure.get((w, u, v), self.chart.zero())

    def anchor_of(self, s):
        """Vector field sigma(s) of a section given by its coefficients."""
        comps = {}
        for i in range(self.chart.arity):
            v = self.chart.zero()
            for u in range(self.rank):
                if not s[u].is_zero():
                    v = v + self.sigma(i, u) * s[u]
            comps[i] = v
        return Multivector.vector(self.chart, comps)

    def basis_anchor(self, u):
        return self.anchor_of([self.chart.one() if v == u else self.chart.zero()
                               for v in range(self.rank)])

    def section(self, coeffs):
        coeffs = [self.chart.coerce(c) for c in coeffs]
        if len(coeffs) != self.rank:
            raise StructuralError("section needs one coefficient per basis element")
        return coeffs

    def bracket(self, s, t):
        """[s, t]_A for sections given as coefficient lists."""
        out = [self.chart.zero() for _ in range(self.rank)]
        ss, st = self.anchor_of(s), self.anchor_of(t)
        for w in range(self.rank):
            v = ss.apply(t[w]) - st.apply(s[w])
            for a in range(self.rank):
                if s[a].is_zero():
                    continue
                for b in range(self.rank):
                    if t[b].is_zero():
                        continue
                    c = self.c(w, a, b)
                    if not c.is_zero():
                        v = v + s[a] * t[b] * c
            out[w] = v
        return out

    def check(self):
        """Anchor compatibility and Jacobi on basis sections: (ok, witness-or-None)."""
        e = [[self.chart.one() if v == u else self.chart.zero() for v in range(self.rank)]
             for u in range(self.rank)]
        for u in range(self.rank):
            for v in range(u + 1, self.rank):
                lhs = self.anchor_of(self.bracket(e[u], e[v]))
                rhs = lie_bracket(self.basis_anchor(u), self.basis_anchor(v))
                diff = lhs - rhs
                if not diff.is_zero():
                    k, val = diff.items()[0]
                    return False, (("anchor", u, v, k[0]), val)
        for u in range(self.rank):
            for v in range(u + 1, self.rank):
                for w in range(v + 1, self.rank):
                    total = [self.chart.zero()] * self.rank
                    for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
                        t = self.bracket(self.bracket(e[a], e[b]), e[c])
                        total = [x + y for x, y in zip(total, t)]
                    for z, val in enumerate(total):
                        if not val.is_zero():
                            return False, (("jacobi", u, v, w, z), val)
        return True, None

    # -- polynomial model of S(A) -----------------------------------------
    def xi(self, u):
        return RatFunc.var(self._vars, self.chart.arity + u)

    def lift_fn(self, f):
        return self.chart.coerce(f).extend(self._vars)

    def __eq__(self, other):
        return (isinstance(other, LieAlgebroid) and self.chart == other.chart
                and self.rank == other.rank and self.anchor == other.anchor
                and self.structure == other.structure)

    __hash__ = None


def tangent_algebroid(chart):
    """(TM, [,], id) on the coordinate frame."""
    return LieAlgebroid(chart, chart.arity, {(i, i): 1 for i in range(chart.arity)}, {},
                        name="tangent")


def cotangent_algebroid(w):
    """(T*M, Koszul bracket, sharp_w) on the coordinate coframe.

    The structure functions are read off from the Koszul bracket of the coframe,
    {dx^i, dx^j} = c^k_{ij} dx^k.
    """
    chart = w.chart
    n = chart.arity
    anchor = {}
    for i in range(n):
        X = sharp(w, OneForm.coordinate(chart, i))
        for (j,), v in X.comps.items():
            anchor[(j, i)] = v
    structure = {}
    for i in range(n):
        for j in range(i + 1, n):
            kb = koszul_bracket(w, OneForm.coordinate(chart, i), OneForm.coordinate(chart, j))
            for k, v in enumerate(kb.comps):
                if not v.is_zero():
                    structure[(k, i, j)] = v
    return LieAlgebroid(chart, n, anchor, structure, name="cotangent")


class AlgebroidSymTensor:
    """Element of S_k(A): fully symmetric components on non-decreasing section tuples."""

    kind = "symsection"

    def __init__(self, algebroid, degree, comps=None, *, check=True):
        self.algebroid = algebroid
        self.degree = degree
        chart = algebroid.chart
        comps = comps or {}
        if check:
            clean = {}
            for k, v in comps.items():
                k = tuple(k)
                if len(k) != degree or any(a > b for a, b in zip(k, k[1:])):
                    raise StructuralError(f"bad symmetric key {k}")
                if k and (k[0] < 0 or k[-1] >= algebroid.rank):
                    raise StructuralError("section index out of range")
                v = chart.coerce(v)
                if not v.is_zero():
                    clean[k] = v
            comps = clean
        self.comps = comps

    @property
    def chart(self):
        return self.algebroid.chart

    @classmethod
    def function(cls, algebroid, f):
        f = algebroid.chart.coerce(f)
        return cls(algebroid, 0, {(): f} if not f.is_zero() else {}, check=False)

    @classmethod
    def from_section(cls, algebroid, s):
        return cls(algebroid, 1, {(u,): c for u, c in enumerate(s)})

    @classmethod
    def from_symcovariant(cls, algebroid, G):
        return cls(algebroid, G.degree, dict(G.comps))

    def to_symcovariant(self):
        return SymCovariant(self.chart, self.degree, dict(self.comps))

    def __getitem__(self, idx):
        return self.comps.get(tuple(sorted(idx)), self.chart.zero())

    def is_zero(self):
        return not self.comps

    def to_poly(self):
        A = self.algebroid
        n = A.chart.arity
        total = RatFunc.zero(A._vars)
        for key, v in self.comps.items():
            exp = [0] * (n + A.rank)
            for u in key:
                exp[n + u] += 1
            total = total + A.lift_fn(v) * RatFunc(Poly.monomial(A._vars, exp, multiplicity(key)))
        return total

    @classmethod
    def from_poly(cls, algebroid, F, degree=None):
        A = algebroid
        n = A.chart.arity
        if any(F.den.depends_on(n + u) for u in range(A.rank)):
            raise StructuralError("denominator depends on section variables")
        groups = {}
        for e, c in F.num.terms.items():
            groups.setdefault(e[n:], {})[e[:n] + (0,) * A.rank] = c
        degs = {sum(k) for k in groups}
        if len(degs) > 1:
            raise StructuralError("not homogeneous in the section variables")
        k = degs.pop() if degs else (degree or 0)
        den = F.den.restrict(A.chart.coords)
        comps = {}
        for se, terms in groups.items():
            key = tuple(u for u in range(A.rank) for _ in range(se[u]))
            num = Poly(A._vars, terms).restrict(A.chart.coords)
            comps[key] = RatFunc(num, den) * Fraction(1, multiplicity(key))
        return cls(A, k, comps, check=False)

    def __add__(self, other):
        if self.algebroid != other.algebroid:
            raise StructuralError("algebroid mismatch")
        if self.degree != other.degree:
            if not other.comps:
                return self
            if not self.comps:
                return other
            raise StructuralError(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self.comps)
        for k, v in other.comps.items():
            _add_into(out, k, v)
        return AlgebroidSymTensor(self.algebroid, self.degree, out, check=False)

    def __neg__(self):
        return AlgebroidSymTensor(self.algebroid, self.degree,
                                  {k: -v for k, v in self.comps.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = self.chart.coerce(f)
        out = {}
        for k, v in self.comps.items():
            r = v * f
            if not r.is_zero():
                out[k] = r
        return AlgebroidSymTensor(self.algebroid, self.degree, out, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebroidSymTensor):
            return NotImplemented
        if self.algebroid != other.algebroid:
            return False
        if not self.comps and not other.comps:
            return True
        return self.degree == other.degree and self.comps == other.comps

    __hash__ = None

    def lines(self, name="symsection"):
        return [f"{name}[{','.join(str(i + 1) for i in k)}] = {v}"
                for k, v in sorted(self.comps.items())]


def sym_odot(G, H):
    """Symmetric product in S(A)."""
    if G.algebroid != H.algebroid:
        raise StructuralError("algebroid mismatch")
    return AlgebroidSymTensor.from_poly(G.algebroid, G.to_poly() * H.to_poly(),
                                        G.degree + H.degree)


def _apply_anchor_x(A, u, F):
    """sigma(e_u) acting on the base-coordinate dependence of a polynomial in S(A)."""
    total = RatFunc.zero(A._vars)
    for i in range(A.chart.arity):
        s = A.sigma(i, u)
        if not s.is_zero():
            d = F.diff(i)
            if not d.is_zero():
                total = total + A.lift_fn(s) * d
    return total


def _section_bracket_poly(A, s, v):
    """Polynomial (linear in e) of [s, e_v]_A = s^u c^w_{uv} e_w - sigma(e_v)(s^u) e_u."""
    total = RatFunc.zero(A._vars)
    sv = A.basis_anchor(v)
    for u in range(A.rank):
        if s[u].is_zero():
            continue
        for w in range(A.rank):
            c = A.c(w, u, v)
            if not c.is_zero():
                total = total + A.lift_fn(s[u] * c) * A.xi(w)
        d = sv.apply(s[u])
        if not d.is_zero():
            total = total - A.lift_fn(d) * A.xi(u)
    return total


def _lie_derivative_poly(A, s, F):
    total = RatFunc.zero(A._vars)
    sig = A.anchor_of(s)
    for i in range(A.chart.arity):
        if sig[i].is_zero():
            continue
        d = F.diff(i)
        if not d.is_zero():
            total = total + A.lift_fn(sig[i]) * d
    n = A.chart.arity
    for v in range(A.rank):
        d = F.diff(n + v)
        if d.is_zero():
            continue
        total = total + _section_bracket_poly(A, s, v) * d
    return total


def algebroid_lie_derivative(A, s, T):
    """L^A_s on functions (sigma(s) f) and on S_k(A), extended as a derivation."""
    s = A.section(s)
    if isinstance(T, RatFunc):
        return A.anchor_of(s).apply(T)
    if T.algebroid != A:
        raise StructuralError("algebroid mismatch")
    return AlgebroidSymTensor.from_poly(A, _lie_derivative_poly(A, s, T.to_poly()), T.degree)


def sym_bracket(A, G, H):
    """Symmetric Schouten bracket <G, H> on S(A), degree p + q - 1.

    Expanded over basis sections: <G, H> = sum_u dG/de_u (.) L_{e_u} H
    - sum_u dH/de_u (.) sigma(e_u)(coefficients of G), which is the unique
    biderivation extending <s, t> = [s, t]_A, <s, f> = L_s f, <f, g> = 0.
    """
    for T in (G, H):
        if T.algebroid != A:
            raise StructuralError("algebroid mismatch")
    deg = G.degree + H.degree - 1
    if deg < 0:
        return AlgebroidSymTensor(A, 0, {}, check=False)
    FG, FH = G.to_poly(), H.to_poly()
    n = A.chart.arity
    total = RatFunc.zero(A._vars)
    one = A.chart.one()
    zero = A.chart.zero()
    for u in range(A.rank):
        dG = FG.diff(n + u)
        if not dG.is_zero():
            e_u = [one if v == u else zero for v in range(A.rank)]
            total = total + dG * _lie_derivative_poly(A, e_u, FH)
        dH = FH.diff(n + u)
        if not dH.is_zero():
            total = total - dH * _apply_anchor_x(A, u, FG)
    return AlgebroidSymTensor.from_poly(A, total, deg)
