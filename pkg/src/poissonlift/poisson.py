"""Decision procedures and derived objects of Poisson calculus on M and TM."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .brackets import (
    divergence,
    koszul_bracket,
    lichnerowicz_coboundary,
    poisson_bracket,
    schouten_bracket,
)
from .errors import ConventionError, StructuralError
from .geometry import (
    ContravariantConnection,
    Multivector,
    OneForm,
    SymCovariant,
    VolumeForm,
    _add_into,
    _det,
    linear_curvature,
    nabla_squared_w,
    sharp,
    sym_product,
)
from .lifts import (
    complete_lift,
    horizontal_lift_bivector,
    iota,
    iota_inverse,
    nonlinear_curvature,
    vertical_lift,
)
from .ring import Poly, RatFunc


# ---------------------------------------------------------------------------
# decisions and reports

class Decision:
    """Boolean outcome with an optional witness ``(indices, expr)`` on failure.

    Indices are 0-based internally and printed 1-based.
    """

    __slots__ = ("ok", "witness")

    def __init__(self, ok, witness=None):
        self.ok = bool(ok)
        self.witness = None if ok else witness

    def __bool__(self):
        return self.ok

    def witness_text(self):
        if self.witness is None:
            return None
        idx, expr = self.witness
        return f"[{','.join(str(i + 1) for i in idx)}] = {expr}"

    def __repr__(self):
        return f"Decision({self.ok}, {self.witness_text()!r})"

    @classmethod
    def from_components(cls, comps):
        """PASS iff every value is zero; otherwise witness the smallest nonzero key."""
        if isinstance(comps, dict):
            items = sorted((k, v) for k, v in comps.items() if not v.is_zero())
        else:
            items = [(k, v) for k, v in comps if not v.is_zero()]
        if not items:
            return cls(True)
        return cls(False, items[0])

    @classmethod
    def all_of(cls, decisions):
        for d in decisions:
            if not d:
                return d
        return cls(True)


@dataclass
class Report:
    """Ordered named decisions; serializes as ``name: PASS|FAIL [witness: ...]`` lines."""

    checks: list = field(default_factory=list)

    def add(self, name, decision):
        self.checks.append((name, decision))
        return decision

    def __getitem__(self, name):
        for n, d in self.checks:
            if n == name:
                return d
        raise KeyError(name)

    @property
    def passed(self):
        return all(d.ok for _, d in self.checks)

    def lines(self):
        out = []
        for name, d in self.checks:
            if d.ok:
                out.append(f"{name}: PASS")
            elif d.witness is None:
                out.append(f"{name}: FAIL")
            else:
                out.append(f"{name}: FAIL [witness: {d.witness_text()}]")
        return out

    def to_json(self):
        rows = []
        for name, d in self.checks:
            row = {"condition": name, "status": "PASS" if d.ok else "FAIL"}
            if not d.ok and d.witness is not None:
                idx, expr = d.witness
                row["witness"] = {"indices": [i + 1 for i in idx], "expr": str(expr)}
            rows.append(row)
        return json.dumps(rows, indent=2)

    def __str__(self):
        return "\n".join(self.lines())


# ---------------------------------------------------------------------------
# Poisson structures on a chart

def _bivector(P):
    if not isinstance(P, Multivector) or P.degree != 2:
        raise StructuralError("expected a bivector")
    return P


def is_poisson(P):
    """[P, P] = 0, witnessed by a nonzero trivector component."""
    _bivector(P)
    return Decision.from_components(schouten_bracket(P, P).comps)


def jacobiator(P, f, g, h):
    """sum over cyclic permutations of {{f, g}, h}_P."""
    pb = lambda a, b: poisson_bracket(P, a, b)  # noqa: E731
    return pb(pb(f, g), h) + pb(pb(g, h), f) + pb(pb(h, f), g)


def hamiltonian_field(P, f):
    """X_f = {f, .}_P = d_i f P^{ij} d_j."""
    _bivector(P)
    return sharp(P, OneForm.differential(P.chart, f))


def modular_field(P, mu):
    """Delta^i = d_k P^{ik} + P^{ik} d_k log(rho), with rho the (possibly powered) density."""
    _bivector(P)
    if P.chart != mu.chart:
        raise StructuralError("chart mismatch")
    m = P.chart.arity
    logs = [mu.log_derivative(k) for k in range(m)]
    comps = {}
    for i in range(m):
        v = P.chart.zero()
        for k in range(m):
            pik = P[i, k]
            if not pik.is_zero():
                v = v + pik.diff(k) + pik * logs[k]
        comps[i] = v
    return Multivector.vector(P.chart, comps)


def modular_property(P, mu, f):
    """Delta_mu f - div_mu X_f (zero by the defining property)."""
    return modular_field(P, mu).apply(f) - divergence(hamiltonian_field(P, f), mu)


def sasaki_volume(g):
    """Phi = det(g) dx ^ dy on the tangent chart."""
    M = g.chart
    return VolumeForm(M.tangent, g.det().extend(M.tangent.coords), 1)


def riemannian_volume(g):
    return g.volume()


def is_transversal_poisson(P, foliation):
    """Semi-Poisson test relative to the foliation spanned by the coordinate fields ``foliation``.

    Both conditions only look at components whose indices avoid the foliation:
    the transversal block must be constant along the leaves and [P, P] must
    vanish there.
    """
    _bivector(P)
    m = P.chart.arity
    fol = sorted(set(foliation))
    if any(not 0 <= u < m for u in fol):
        raise StructuralError("foliation index out of range")
    trans = [a for a in range(m) if a not in fol]
    report = Report()
    bad = []
    for a, b in combinations(trans, 2):
        for u in fol:
            d = P[a, b].diff(u)
            if not d.is_zero():
                bad.append(((u, a, b), d))
    report.add("leafwise_invariant", Decision.from_components(bad))
    PP = schouten_bracket(P, P)
    report.add("transversal_jacobi",
               Decision.from_components([(k, PP[k]) for k in combinations(trans, 3)]))
    return report


def vertical_foliation(chart):
    """Fiber slots of a tangent chart."""
    if not chart.is_tangent:
        raise StructuralError("not a tangent chart")
    return list(range(chart.n, 2 * chart.n))


# ---------------------------------------------------------------------------
# graded bivectors

class GradedParts:
    """Data of a graded bivector W on TM.

    ``w`` is the base bivector, ``A[(i, j, a)]`` the coefficients of
    y^a dx_i ^ dy_j (all i, j) and ``psi[(i, j)]`` (i < j) the symmetric
    2-tensors with iota(psi^{ij}) = y^a y^b B^{ij}_{ab}.
    """

    def __init__(self, w, A=None, psi=None):
        self.w = _bivector(w)
        M = w.chart
        if M.is_tangent:
            raise StructuralError("graded parts live on the base chart")
        self.chart = M
        self.A = {}
        for (i, j, a), v in (A or {}).items():
            v = M.coerce(v)
            if not v.is_zero():
                self.A[(i, j, a)] = v
        self.psi = {}
        for (i, j), G in (psi or {}).items():
            if i == j:
                raise StructuralError("psi is skew: no diagonal entries")
            if G.degree != 2:
                raise StructuralError("psi entries are symmetric 2-tensors")
            if i > j:
                i, j, G = j, i, -G
            if (i, j) in self.psi and self.psi[(i, j)] != G:
                raise StructuralError(f"psi[{i + 1},{j + 1}] is not antisymmetric")
            if not G.is_zero():
                self.psi[(i, j)] = G

    def Gamma(self, i, j, k):
        return self.A.get((i, j, k), self.chart.zero())

    def psi_basis(self, i, j):
        if i == j:
            return SymCovariant.zero(self.chart, 2)
        if i < j:
            return self.psi.get((i, j), SymCovariant.zero(self.chart, 2))
        return -self.psi.get((j, i), SymCovariant.zero(self.chart, 2))

    def B(self, i, j, a, b):
        return self.psi_basis(i, j)[(a, b)]

    def connection(self):
        return ContravariantConnection(self.chart, self.w, self.A)

    def assemble(self):
        return assemble_graded(self.w, self.connection(), self.psi)

    def __eq__(self, other):
        return (isinstance(other, GradedParts) and self.w == other.w and self.A == other.A
                and self.psi == other.psi)

    __hash__ = None

    def lines(self):
        out = [f"base[{i + 1},{j + 1}] = {v}" for (i, j), v in sorted(self.w.comps.items())]
        out += [f"A[{i + 1},{j + 1},{a + 1}] = {v}" for (i, j, a), v in sorted(self.A.items())]
        for (i, j), G in sorted(self.psi.items()):
            out += [f"B[{i + 1},{j + 1},{a + 1},{b + 1}] = {v}" for (a, b), v in G.items()]
        return out


class PolyGradedParts(GradedParts):
    """Polynomially graded data: adds phi^{ij}, eta^{ij} and chi^{ij}_a."""

    def __init__(self, w, A=None, psi=None, phi=None, eta=None, chi=None):
        super().__init__(w, A, psi)
        M = self.chart
        self.phi = {k: M.coerce(v) for k, v in (phi or {}).items() if not M.coerce(v).is_zero()}
        self.eta = {k: M.coerce(v) for k, v in (eta or {}).items() if not M.coerce(v).is_zero()}
        self.chi = {k: M.coerce(v) for k, v in (chi or {}).items() if not M.coerce(v).is_zero()}

    @property
    def is_graded(self):
        return not (self.phi or self.eta or self.chi)

    def graded_part(self):
        return GradedParts(self.w, self.A, self.psi)

    def lines(self):
        out = super().lines()
        out += [f"phi[{i + 1},{j + 1}] = {v}" for (i, j), v in sorted(self.phi.items())]
        out += [f"eta[{i + 1},{j + 1}] = {v}" for (i, j), v in sorted(self.eta.items())]
        out += [f"chi[{i + 1},{j + 1},{a + 1}] = {v}" for (i, j, a), v in sorted(self.chi.items())]
        return out


@dataclass
class Shape:
    kind: str  # "not-graded" | "poly-graded" | "graded"
    parts: object = None
    reason: str = ""

    def lines(self):
        head = f"shape: {self.kind}"
        if self.reason:
            head += f" ({self.reason})"
        return [head] + (self.parts.lines() if self.parts is not None else [])


def _split_fiber(F, n):
    """{y-exponent: base-chart RatFunc} for F polynomial in the fiber slots, else None."""
    if any(F.den.depends_on(n + i) for i in range(n)):
        return None
    den = F.den
    groups = {}
    for e, c in F.num.terms.items():
        groups.setdefault(e[n:], {})[e[:n] + (0,) * n] = c
    base = F.vars[:n]
    return {ye: RatFunc(Poly(F.vars, t).restrict(base), den.restrict(base))
            for ye, t in groups.items()}


def shape_analysis(P):
    """Classify a bivector on TM as not-graded, poly-graded or graded, extracting its parts."""
    _bivector(P)
    tm = P.chart
    if not tm.is_tangent:
        raise StructuralError("shape analysis needs a tangent chart")
    M, n = tm.base, tm.n
    w, A, phi, eta, chi, psi_c = {}, {}, {}, {}, {}, {}
    graded = True
    for (p, q), v in P.comps.items():
        split = _split_fiber(v, n)
        if split is None:
            return Shape("not-graded", reason=f"component [{p + 1},{q + 1}] is not polynomial in y")
        degs = {sum(ye) for ye in split}
        if q < n:  # base block
            if degs - {0}:
                return Shape("not-graded", reason=f"base component [{p + 1},{q + 1}] depends on y")
            w[(p, q)] = split[(0,) * n]
        elif p < n:  # mixed block dx_p ^ dy_j
            j = q - n
            if max(degs) > 1:
                return Shape("not-graded", reason=f"mixed component [{p + 1},{q + 1}] is not affine in y")
            for ye, c in split.items():
                if sum(ye) == 0:
                    phi[(p, j)] = c
                    graded = False
                else:
                    A[(p, j, ye.index(1))] = c
        else:  # fiber block
            i, j = p - n, q - n
            if max(degs) > 2:
                return Shape("not-graded", reason=f"fiber component [{p + 1},{q + 1}] has degree > 2 in y")
            comps = {}
            for ye, c in split.items():
                d = sum(ye)
                if d == 0:
                    eta[(i, j)] = c
                    graded = False
                elif d == 1:
                    chi[(i, j, ye.index(1))] = c
                    graded = False
                else:
                    key = tuple(a for a in range(n) for _ in range(ye[a]))
                    comps[key] = c if key[0] == key[1] else c * Fraction(1, 2)
            if comps:
                psi_c[(i, j)] = SymCovariant(M, 2, comps)
    wM = Multivector(M, 2, w)
    if graded:
        return Shape("graded", GradedParts(wM, A, psi_c))
    return Shape("poly-graded", PolyGradedParts(wM, A, psi_c, phi, eta, chi),
                 reason="affine terms present")


def assemble_graded(w, D, psi_basis):
    """W = w + y^a Gamma^{ij}_a dx_i ^ dy_j + sum_{i<j} iota(Psi^{ij}) dy_i ^ dy_j."""
    _bivector(w)
    M = w.chart
    tm = M.tangent
    n = M.arity
    gamma = D.gamma if isinstance(D, ContravariantConnection) else (D or {})
    parts = GradedParts(w, gamma, psi_basis)  # validates antisymmetry of psi
    out = {}
    for (i, j), v in w.comps.items():
        out[(i, j)] = tm.coerce(v)
    for (i, j, a), v in parts.A.items():
        _add_into(out, (i, n + j), tm.coerce(v) * tm.y(a))
    for (i, j), G in parts.psi.items():
        _add_into(out, (n + i, n + j), iota(G))
    return Multivector(tm, 2, out, check=False)


def contravariant_connection_of(parts):
    """D_{dx^i} dx^j = Gamma^{ij}_k dx^k read off from the mixed block."""
    return parts.connection()


# -- the contravariant derivative ------------------------------------------

def _as_oneform(chart, theta):
    if isinstance(theta, OneForm):
        return theta
    return OneForm.differential(chart, theta)


def contravariant_derivative(D, theta, G):
    """D_theta G for a one-form theta (or a function f, meaning df) on symmetric tensors.

    (D_theta G)_I = (sharp theta)(G_I) + sum_l theta_a Gamma^{ah}_{i_l} G_{..h..}.
    Functions are treated as degree-0 tensors.
    """
    M = D.chart
    theta = _as_oneform(M, theta)
    if isinstance(G, OneForm):
        return contravariant_derivative(D, theta, SymCovariant.from_oneform(G)).to_oneform()
    X = sharp(D.w, theta)
    n = M.arity
    k = G.degree
    out = {}
    for I in combinations_with_replacement(range(n), k):
        v = X.apply(G[I])
        for pos in range(k):
            for a in range(n):
                ta = theta[a]
                if ta.is_zero():
                    continue
                for h in range(n):
                    g = D(a, h, I[pos])
                    if not g.is_zero():
                        v = v + ta * g * G[I[:pos] + (h,) + I[pos + 1:]]
        if not v.is_zero():
            out[I] = v
    return SymCovariant(M, k, out, check=False)


def contravariant_curvature(D):
    """C_D(dx^i, dx^j) dx^k, keyed (i, j, k, l) for i < j with l the output slot."""
    M = D.chart
    n = M.arity
    w = D.w
    cof = [SymCovariant.from_oneform(OneForm.coordinate(M, k)) for k in range(n)]
    Dk = {(i, k): contravariant_derivative(D, OneForm.coordinate(M, i), cof[k])
          for i in range(n) for k in range(n)}
    out = {}
    for i, j in combinations(range(n), 2):
        kb = koszul_bracket(w, OneForm.coordinate(M, i), OneForm.coordinate(M, j))
        for k in range(n):
            v = (contravariant_derivative(D, OneForm.coordinate(M, i), Dk[(j, k)])
                 - contravariant_derivative(D, OneForm.coordinate(M, j), Dk[(i, k)])
                 - contravariant_derivative(D, kb, cof[k]))
            for (l,), c in v.comps.items():
                out[(i, j, k, l)] = c
    return out


# -- the operators Psi and Xi ------------------------------------------------

def _sym2_from_matrix(M, c):
    """Symmetric 2-tensor whose iota is sum_{p,q} c[p,q] y^p y^q."""
    n = M.arity
    out = {}
    for p in range(n):
        for q in range(p, n):
            v = c.get((p, q), M.zero())
            if p != q:
                v = (v + c.get((q, p), M.zero())) * Fraction(1, 2)
            if not v.is_zero():
                out[(p, q)] = v
    return SymCovariant(M, 2, out, check=False)


def psi_by_bracket(parts, alpha, beta, W=None):
    """Psi(alpha, beta) = iota^{-1} {l(alpha), l(beta)}_W."""
    W = W if W is not None else parts.assemble()
    return iota_inverse(parts.chart, poisson_bracket(W, iota(alpha), iota(beta)), 2)


def psi_closed(parts, alpha, beta):
    """Coordinate expression of Psi(alpha, beta) through Gamma^{ij}_k and the basis values.

    Psi(alpha, beta) = alpha_i beta_j Psi(dx^i, dx^j)
      + sym[ Gamma^{kq}_p beta_q d_k alpha_r - Gamma^{kr}_p alpha_r d_k beta_q ] dx^p dx^q
      + w^{ab} d_a alpha_p d_b beta_q dx^p dx^q
    (the indices of the middle term follow the bracket expansion, see the notes).
    """
    M = parts.chart
    n = M.arity
    w = parts.w
    total = SymCovariant.zero(M, 2)
    for i in range(n):
        for j in range(n):
            if i != j and not alpha[i].is_zero() and not beta[j].is_zero():
                total = total + parts.psi_basis(i, j) * (alpha[i] * beta[j])
    c = {}
    da = [[alpha[q].diff(k) for k in range(n)] for q in range(n)]
    db = [[beta[q].diff(k) for k in range(n)] for q in range(n)]
    for p in range(n):
        for q in range(n):
            v = M.zero()
            for k in range(n):
                for r in range(n):
                    g1 = parts.Gamma(k, r, p)
                    if not g1.is_zero():
                        # {alpha_q, y^r} = d_k alpha_q Gamma^{kr}_p y^p, times beta_r
                        v = v + g1 * beta[r] * da[q][k]
                        # alpha_r {y^r, beta_q} = -alpha_r d_k beta_q Gamma^{kr}_p y^p
                        v = v - g1 * alpha[r] * db[q][k]
                for b in range(n):
                    wkb = w[k, b]
                    if not wkb.is_zero():
                        v = v + wkb * da[p][k] * db[q][b]
            if not v.is_zero():
                c[(p, q)] = v
    return total + _sym2_from_matrix(M, c)


def psi_operator(parts, alpha, beta, crosscheck=True):
    """Psi(alpha, beta), computed by the bracket and, when asked, checked against the closed form."""
    r = psi_by_bracket(parts, alpha, beta)
    if crosscheck:
        s = psi_closed(parts, alpha, beta)
        if r != s:
            raise ConventionError("bracket and coordinate forms of Psi disagree")
    return r


def d_psi(parts, f, alpha, beta):
    """(D_df Psi)(alpha, beta) = D_df(Psi(alpha, beta)) - Psi(D_df alpha, beta) - Psi(alpha, D_df beta)."""
    D = parts.connection()
    W = parts.assemble()
    psi = lambda a, b: psi_by_bracket(parts, a, b, W)  # noqa: E731
    Da = contravariant_derivative(D, f, alpha)
    Db = contravariant_derivative(D, f, beta)
    return (contravariant_derivative(D, f, psi(alpha, beta)) - psi(Da, beta) - psi(alpha, Db))


def xi_by_bracket(parts, G, gamma, W=None):
    """Xi(G, gamma) = iota^{-1} {iota(G), l(gamma)}_W."""
    W = W if W is not None else parts.assemble()
    return iota_inverse(parts.chart, poisson_bracket(W, iota(G), iota(gamma)), 3)


def xi_closed(parts, G, gamma):
    """Coordinate expression: G_{ij} gamma_k Xi(dx^i dx^j, dx^k) plus the cyclic first-order terms."""
    M = parts.chart
    n = M.arity
    w = parts.w
    tm = M.tangent
    # basis part: {y^i y^j, y^k} = y^i iota(Psi^{jk}) + y^j iota(Psi^{ik})
    F = tm.zero()
    for (i, j), g in G.comps.items():
        coeff = g if i == j else g * 2
        for k in range(n):
            if gamma[k].is_zero():
                continue
            b = (tm.y(i) * iota(parts.psi_basis(j, k)) + tm.y(j) * iota(parts.psi_basis(i, k)))
            F = F + tm.coerce(coeff * gamma[k]) * b
    # first-order part, summed over all (i, j, k)
    dG = {(I, a): G[I].diff(a) for I in combinations_with_replacement(range(n), 2)
          for a in range(n)}
    dg = [[gamma[k].diff(a) for a in range(n)] for k in range(n)]
    coeffs = {}
    for i in range(n):
        for j in range(n):
            Gij = tuple(sorted((i, j)))
            for k in range(n):
                v = M.zero()
                for a in range(n):
                    for h in range(n):
                        g_ai = parts.Gamma(a, h, i)
                        if not g_ai.is_zero():
                            v = v - G[(h, j)] * dg[k][a] * g_ai * 2
                        g_ak = parts.Gamma(a, h, k)
                        if not g_ak.is_zero():
                            v = v + gamma[h] * dG[(Gij, a)] * g_ak
                    for b in range(n):
                        wab = w[a, b]
                        if not wab.is_zero():
                            v = v + wab * dG[(Gij, a)] * dg[k][b]
                if not v.is_zero():
                    coeffs[(i, j, k)] = v
    for (i, j, k), v in coeffs.items():
        F = F + tm.coerce(v) * tm.y(i) * tm.y(j) * tm.y(k)
    return iota_inverse(M, F, 3)


def xi_operator(parts, G, gamma, crosscheck=True):
    r = xi_by_bracket(parts, G, gamma)
    if crosscheck:
        if r != xi_closed(parts, G, gamma):
            raise ConventionError("bracket and coordinate forms of Xi disagree")
    return r


def xi_rescaling_rhs(parts, f, h, G, gamma):
    """f h Xi(G, gamma) - f (D_dh G) . gamma + h G . D_df gamma + {f, h}_w G . gamma."""
    D = parts.connection()
    g1 = SymCovariant.from_oneform(gamma)
    return (xi_by_bracket(parts, G, gamma) * (f * h)
            - sym_product(contravariant_derivative(D, h, G), g1) * f
            + sym_product(G, contravariant_derivative(D, f, g1)) * h
            + sym_product(G, g1) * poisson_bracket(parts.w, f, h))


# -- the graded Poisson test -------------------------------------------------

def check_graded_poisson(parts):
    """Base Jacobi, flatness of D, D-parallel Psi and the cyclic Xi identity, plus the verdict."""
    M = parts.chart
    n = M.arity
    W = parts.assemble()
    report = Report()
    base = report.add("base_poisson", is_poisson(parts.w))
    flat = report.add("flat_connection",
                      Decision.from_components(contravariant_curvature(parts.connection())))
    cof = [OneForm.coordinate(M, i) for i in range(n)]
    D = parts.connection()
    psi = {(i, j): psi_by_bracket(parts, cof[i], cof[j], W) for i, j in combinations(range(n), 2)}
    bad = []
    for a in range(n):
        xa = M.x(a)
        Dcof = [contravariant_derivative(D, xa, c) for c in cof]
        for i, j in combinations(range(n), 2):
            v = (contravariant_derivative(D, xa, psi[(i, j)])
                 - psi_by_bracket(parts, Dcof[i], cof[j], W)
                 - psi_by_bracket(parts, cof[i], Dcof[j], W))
            for (p, q), c in v.items():
                bad.append(((a, i, j, p, q), c))
                break
            if bad:
                break
        if bad:
            break
    par = report.add("psi_parallel", Decision.from_components(bad))
    bad = []
    for i, j, k in combinations(range(n), 3):
        v = (xi_by_bracket(parts, psi[(i, j)], cof[k], W)
             + xi_by_bracket(parts, psi[(j, k)], cof[i], W)
             + xi_by_bracket(parts, -psi[(i, k)], cof[j], W))
        if not v.is_zero():
            key, c = v.items()[0]
            bad.append(((i, j, k) + key, c))
            break
    cyc = report.add("xi_cyclic", Decision.from_components(bad))
    report.add("verdict", Decision(base.ok and flat.ok and par.ok and cyc.ok))
    return report


# ---------------------------------------------------------------------------
# horizontal lifts

def _frame_blocks(P, N):
    """Components of a trivector on TM in the frame (delta_i, d/dy^j).

    Returns (hhh, hhv): hhh[(i, j, k)] for i<j<k and hhv[(i, j, k)] for i<j
    are the coefficients of delta_i ^ delta_j ^ delta_k and delta_i ^ delta_j ^ d/dy^k.
    """
    tm = P.chart
    n = tm.n
    dx = [OneForm.coordinate(tm, i) for i in range(n)]
    dy = []
    for k in range(n):
        comps = [tm.zero()] * (2 * n)
        comps[n + k] = tm.one()
        for i in range(n):
            comps[i] = N(k, i)
        dy.append(OneForm(tm, comps))
    hhh = {(i, j, k): P(dx[i], dx[j], dx[k]) for i, j, k in combinations(range(n), 3)}
    hhv = {(i, j, k): P(dx[i], dx[j], dy[k])
           for i, j in combinations(range(n), 2) for k in range(n)}
    return hhh, hhv


def horizontal_curvature_condition(w, N):
    """w^{ih} w^{jl} R^k_{hl} = 0, keyed (i, j, k) with i < j."""
    n = w.chart.arity
    tm = N.chart
    R = nonlinear_curvature(N)
    out = {}
    for i, j in combinations(range(n), 2):
        for k in range(n):
            v = tm.zero()
            for h in range(n):
                if w[i, h].is_zero():
                    continue
                for l in range(n):
                    r = R.get((k, h, l))
                    if r is not None and not w[j, l].is_zero():
                        v = v + tm.coerce(w[i, h] * w[j, l]) * r
            if not v.is_zero():
                out[(i, j, k)] = v
    return out


def horizontal_poisson_condition(w, N, with_blocks=True):
    """[w, w] = 0 and the curvature condition; optionally the two frame blocks of [w^H, w^H]."""
    report = Report()
    base = report.add("base_poisson", is_poisson(w))
    curv = report.add("curvature_kernel", Decision.from_components(horizontal_curvature_condition(w, N)))
    if with_blocks:
        WH = horizontal_lift_bivector(w, N)
        hhh, hhv = _frame_blocks(schouten_bracket(WH, WH), N)
        report.add("horizontal_block", Decision.from_components(hhh))
        report.add("mixed_block", Decision.from_components(hhv))
    report.add("verdict", Decision(base.ok and curv.ok))
    return report


def nabla_squared_condition(w, conn):
    """i_{X_f}(nabla^2 w) = 0 on coordinate functions: w^{ca} nabla_a nabla_b w^{ij} = 0."""
    n = w.chart.arity
    T = nabla_squared_w(conn, w)
    out = {}
    for c in range(n):
        for b in range(n):
            for i, j in combinations(range(n), 2):
                v = w.chart.zero()
                for a in range(n):
                    t = T.get((i, j, a, b))
                    if t is not None and not w[c, a].is_zero():
                        v = v + w[c, a] * t
                if not v.is_zero():
                    out[(c, b, i, j)] = v
    return Decision.from_components(out)


def compatibility_check(P, Q):
    """[P, Q] = 0 with a witness."""
    _bivector(P)
    _bivector(Q)
    return Decision.from_components(schouten_bracket(P, Q).comps)


def hamiltonian_semispray_exists(w):
    """Necessary condition for w^H-Hamiltonian semisprays: (w^{ij}) invertible."""
    _bivector(w)
    n = w.chart.arity
    if n % 2:
        return False
    return not _det([[w[i, j] for j in range(n)] for i in range(n)], w.chart).is_zero()


def lift_coboundary_identity(w, Q):
    """(sigma_w Q)^C = sigma_{w^C} Q^C, and (sigma_w x^i)^V = sigma_{w^C}(x^i o pi)."""
    M = w.chart
    wC = complete_lift(w)
    if not isinstance(Q, Multivector):
        Q = Multivector.function(M, Q)
    lhs = complete_lift(lichnerowicz_coboundary(w, Q))
    rhs = lichnerowicz_coboundary(wC, complete_lift(Q))
    d = lhs - rhs
    if not d.is_zero():
        return Decision(False, d.items()[0])
    for i in range(M.arity):
        a = vertical_lift(lichnerowicz_coboundary(w, M.x(i)))
        b = lichnerowicz_coboundary(wC, vertical_lift(M.x(i), M))
        d = a - b
        if not d.is_zero():
            return Decision(False, d.items()[0])
    return Decision(True)


def curvature_via_sharp(conn, w):
    """R_nabla(sharp dx^i, sharp dx^j) dx^k components, keyed like contravariant_curvature.

    On one-forms: (R(X, Y) alpha)_l = -alpha_k R^k_{lab} X^a Y^b.
    """
    n = w.chart.arity
    R = linear_curvature(conn)
    out = {}
    for i, j in combinations(range(n), 2):
        for k in range(n):
            for l in range(n):
                v = w.chart.zero()
                for a in range(n):
                    for b in range(n):
                        r = R.get((k, l, a, b))
                        if r is not None:
                            v = v - r * w[i, a] * w[j, b]
                if not v.is_zero():
                    out[(i, j, k, l)] = v
    return out
