"""Charts, tensor-field containers and basic multilinear algebra.

Index conventions (0-based internally, 1-based in the DSL and printing):

* A degree-k ``Multivector`` stores one component per strictly increasing
  index tuple, ``P = sum_{I sorted} P^I d_{i1} ^ ... ^ d_{ik}``.  For a
  bivector this is the usual ``w = 1/2 w^{ij} d_i ^ d_j`` with
  ``w^{ji} = -w^{ij}``.
* A ``SymCovariant`` stores the components of the fully symmetric tensor on
  sorted tuples, normalized so that ``iota(G) = G_{i1..ik} y^i1 ... y^ik``
  (summed over *all* tuples) is multiplicative: ``dx1 (.) dx2`` has stored
  component 1/2.
* ``LinearConnection`` components ``gamma[k, i, j]`` mean
  ``nabla_{d_i} d_j = Gamma^k_{ij} d_k``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from math import factorial

from .errors import StructuralError
from .ring import Poly, RatFunc

Scalar = (int, Fraction)


@dataclass(frozen=True)
class Chart:
    """A coordinate chart; tangent charts carry their base chart."""

    name: str
    coords: tuple
    base: "Chart | None" = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(set(self.coords)) != len(self.coords):
            raise StructuralError(f"duplicate coordinate names in chart {self.name}")
        if self.base is not None and len(self.coords) != 2 * len(self.base.coords):
            raise StructuralError("a tangent chart needs exactly 2n coordinates")

    @property
    def vars(self):
        return self.coords

    @property
    def arity(self):
        return len(self.coords)

    @property
    def is_tangent(self):
        return self.base is not None

    @property
    def n(self):
        """Base dimension."""
        return len(self.base.coords) if self.base is not None else len(self.coords)

    @cached_property
    def tangent(self):
        fiber = []
        taken = set(self.coords)
        plain = not any(f"y{i}" in taken for i in range(1, self.arity + 1))
        for i, name in enumerate(self.coords, start=1):
            cand = f"y{i}" if plain else f"d{name}"
            while cand in taken:
                cand = cand + "_"
            taken.add(cand)
            fiber.append(cand)
        return Chart(f"T{self.name}", self.coords + tuple(fiber), base=self)

    def index(self, name):
        try:
            return self.coords.index(name)
        except ValueError:
            raise StructuralError(f"unknown coordinate {name!r} on chart {self.name}") from None

    def x(self, i):
        """i-th coordinate function (0-based)."""
        return RatFunc.var(self.coords, i)

    def y(self, i):
        """i-th fiber coordinate of a tangent chart (0-based)."""
        if not self.is_tangent:
            raise StructuralError(f"chart {self.name} is not a tangent chart")
        return RatFunc.var(self.coords, self.n + i)

    def zero(self):
        return RatFunc.zero(self.coords)

    def one(self):
        return RatFunc.one(self.coords)

    def const(self, c):
        return RatFunc.const(self.coords, c)

    def coerce(self, f):
        """Bring a scalar or RatFunc (possibly from the base chart) onto this chart."""
        if isinstance(f, Scalar):
            return self.const(f)
        if isinstance(f, Poly):
            f = RatFunc(f)
        if f.vars == self.coords:
            return f
        if self.base is not None and f.vars == self.base.coords:
            return f.extend(self.coords)
        raise StructuralError(f"function on {f.vars} does not live on chart {self.name}")

    def __str__(self):
        return self.name


def same_chart(a, b):
    if a != b:
        raise StructuralError(f"chart mismatch: {a.name} vs {b.name}")


# ---------------------------------------------------------------------------
# sign helpers for exterior algebra on sorted index tuples

def merge_sign(I, J):
    """Sign and sorted union of the wedge of basis elements I and J (0 if they meet)."""
    if set(I) & set(J):
        return 0, None
    inv = 0
    for i in I:
        for j in J:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(I + J))


def sort_sign(idx):
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


def multiplicity(idx):
    """Number of distinct orderings of the multiset ``idx``."""
    counts = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    m = factorial(len(idx))
    for c in counts.values():
        m //= factorial(c)
    return m


def _add_into(acc, key, val):
    if val.is_zero():
        return
    cur = acc.get(key)
    if cur is None:
        acc[key] = val
    else:
        s = cur + val
        if s.is_zero():
            del acc[key]
        else:
            acc[key] = s


# ---------------------------------------------------------------------------

class _Components:
    """Shared behaviour of sparse component containers."""

    kind = "tensor"

    def _new(self, comps):
        raise NotImplementedError

    def is_zero(self):
        return not self.comps

    def items(self):
        return sorted(self.comps.items())

    def map(self, fn):
        out = {}
        for k, v in self.comps.items():
            r = fn(v)
            if not r.is_zero():
                out[k] = r
        return self._new(out)

    def diff(self, i):
        return self.map(lambda v: v.diff(i))

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        same_chart(self.chart, other.chart)
        if other.degree != self.degree:
            # the zero tensor is neutral in every degree
            if not other.comps:
                return self
            if not self.comps:
                return other
            raise StructuralError(f"cannot add degrees {self.degree} and {other.degree}")
        out = dict(self.comps)
        for k, v in other.comps.items():
            _add_into(out, k, v)
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, Scalar):
            if not f:
                return self._new({})
            return self._new({k: v * f for k, v in self.comps.items()})
        if isinstance(f, RatFunc):
            f = self.chart.coerce(f)
            return self.map(lambda v: v * f)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if not self.comps and not other.comps:
            return True
        return self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((self.chart, self.degree, frozenset(self.comps.items())))

    def lines(self, name=None):
        """Canonical printing: one ``kind[i,j,..] = expr`` line per component (1-based)."""
        label = name or self.kind
        return [f"{label}[{','.join(str(i + 1) for i in k)}] = {v}" for k, v in self.items()]

    def __str__(self):
        return "\n".join(self.lines()) if self.comps else f"{self.kind} = 0"


class Multivector(_Components):
    """Skew contravariant tensor field of degree k."""

    kind = "multivector"

    def __init__(self, chart, degree, comps=None, *, check=True):
        self.chart = chart
        self.degree = degree
        comps = comps or {}
        if check:
            if degree > chart.arity and comps:
                raise StructuralError("degree exceeds chart arity")
            clean = {}
            for k, v in comps.items():
                k = tuple(k)
                if len(k) != degree or any(a >= b for a, b in zip(k, k[1:])):
                    raise StructuralError(f"bad multivector key {k}")
                if k and not 0 <= k[-1] < chart.arity or k and k[0] < 0:
                    raise StructuralError(f"index out of range in {k}")
                v = chart.coerce(v)
                if not v.is_zero():
                    clean[k] = v
            comps = clean
        self.comps = comps

    def _new(self, comps):
        return Multivector(self.chart, self.degree, comps, check=False)

    @classmethod
    def function(cls, chart, f):
        f = chart.coerce(f)
        return cls(chart, 0, {(): f} if not f.is_zero() else {}, check=False)

    @classmethod
    def vector(cls, chart, comps):
        """Vector field from a sequence (or {index: value}) of components."""
        if not isinstance(comps, dict):
            comps = dict(enumerate(comps))
        return cls(chart, 1, {(i,): v for i, v in comps.items()})

    @classmethod
    def basis(cls, chart, idx):
        sign, key = sort_sign(idx)
        if not sign:
            return cls(chart, len(idx), {})
        return cls(chart, len(idx), {key: chart.const(sign)}, check=False)

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {}, check=False)

    def __getitem__(self, idx):
        """Component for an arbitrary index order (skew-symmetric extension)."""
        if isinstance(idx, int):
            idx = (idx,)
        sign, key = sort_sign(idx)
        if not sign:
            return self.chart.zero()
        v = self.comps.get(key)
        if v is None:
            return self.chart.zero()
        return v if sign > 0 else -v

    @property
    def scalar(self):
        """The function held by a degree-0 multivector."""
        if self.degree != 0:
            raise StructuralError("not a function")
        return self.comps.get((), self.chart.zero())

    def vector_components(self):
        if self.degree != 1:
            raise StructuralError("not a vector field")
        return [self[i] for i in range(self.chart.arity)]

    def __call__(self, *forms):
        """Evaluate on one-forms: sum over sorted I of P^I det[alpha_b(d_{i_a})]."""
        if len(forms) != self.degree:
            raise StructuralError("wrong number of arguments")
        total = self.chart.zero()
        for key, v in self.comps.items():
            total = total + v * _det([[forms[b][i] for b in range(self.degree)] for i in key],
                                     self.chart)
        return total

    def apply(self, f):
        """Vector field acting on a function as a derivation."""
        f = self.chart.coerce(f)
        total = self.chart.zero()
        for (i,), v in self.comps.items():
            total = total + v * f.diff(i)
        return total


class SymCovariant(_Components):
    """Symmetric covariant tensor field (fully symmetric components on sorted keys)."""

    kind = "symtensor"

    def __init__(self, chart, degree, comps=None, *, check=True):
        self.chart = chart
        self.degree = degree
        comps = comps or {}
        if check:
            clean = {}
            for k, v in comps.items():
                k = tuple(k)
                if len(k) != degree or any(a > b for a, b in zip(k, k[1:])):
                    raise StructuralError(f"bad symmetric key {k}")
                if k and (k[0] < 0 or k[-1] >= chart.arity):
                    raise StructuralError(f"index out of range in {k}")
                v = chart.coerce(v)
                if not v.is_zero():
                    clean[k] = v
            comps = clean
        self.comps = comps

    def _new(self, comps):
        return SymCovariant(self.chart, self.degree, comps, check=False)

    @classmethod
    def function(cls, chart, f):
        f = chart.coerce(f)
        return cls(chart, 0, {(): f} if not f.is_zero() else {}, check=False)

    @classmethod
    def from_oneform(cls, alpha):
        return cls(alpha.chart, 1, {(i,): c for i, c in enumerate(alpha.comps)})

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {}, check=False)

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        return self.comps.get(tuple(sorted(idx)), self.chart.zero())

    @property
    def scalar(self):
        if self.degree != 0:
            raise StructuralError("not a function")
        return self.comps.get((), self.chart.zero())

    def to_oneform(self):
        if self.degree != 1:
            raise StructuralError("not a one-form")
        return OneForm(self.chart, [self[i] for i in range(self.chart.arity)])

    def to_poly(self):
        """Fiberwise polynomial sum_{all tuples} G_I y^I on the tangent chart."""
        tm = self.chart.tangent
        n = self.chart.arity
        total = tm.zero()
        for key, v in self.comps.items():
            exp = [0] * (2 * n)
            for i in key:
                exp[n + i] += 1
            mono = RatFunc(Poly.monomial(tm.coords, exp, multiplicity(key)))
            total = total + v.extend(tm.coords) * mono
        return total

    @classmethod
    def from_poly(cls, chart, F, degree=None):
        """Inverse of ``to_poly``; F must be fiberwise homogeneous with y-free denominator."""
        tm = chart.tangent
        n = chart.arity
        F = tm.coerce(F)
        if any(F.den.depends_on(n + i) for i in range(n)):
            raise StructuralError("denominator depends on fiber coordinates")
        groups = {}
        for e, c in F.num.terms.items():
            ye = e[n:]
            groups.setdefault(ye, {})[e[:n] + (0,) * n] = c
        degs = {sum(ye) for ye in groups}
        if len(degs) > 1:
            raise StructuralError("not fiberwise homogeneous")
        k = degs.pop() if degs else (degree or 0)
        if degree is not None and groups and k != degree:
            raise StructuralError(f"expected fiber degree {degree}, got {k}")
        den = F.den.restrict(chart.coords)
        comps = {}
        for ye, terms in groups.items():
            key = tuple(i for i in range(n) for _ in range(ye[i]))
            num = Poly(tm.coords, terms).restrict(chart.coords)
            comps[key] = RatFunc(num, den) * Fraction(1, multiplicity(key))
        return cls(chart, k, comps, check=False)

    def __call__(self, *vectors):
        """Evaluate on vector fields (multilinear form)."""
        if len(vectors) != self.degree:
            raise StructuralError("wrong number of arguments")
        from itertools import product
        total = self.chart.zero()
        comps = [v.vector_components() for v in vectors]
        for idx in product(range(self.chart.arity), repeat=self.degree):
            c = self[idx]
            if c.is_zero():
                continue
            term = c
            for a, i in enumerate(idx):
                term = term * comps[a][i]
                if term.is_zero():
                    break
            total = total + term
        return total


class OneForm:
    """Differential one-form alpha = alpha_i dx^i."""

    kind = "oneform"

    def __init__(self, chart, comps):
        comps = [chart.coerce(c) for c in comps]
        if len(comps) != chart.arity:
            raise StructuralError("one-form needs one component per coordinate")
        self.chart = chart
        self.comps = comps

    @classmethod
    def differential(cls, chart, f):
        f = chart.coerce(f)
        return cls(chart, [f.diff(i) for i in range(chart.arity)])

    @classmethod
    def coordinate(cls, chart, i):
        return cls(chart, [chart.one() if j == i else chart.zero() for j in range(chart.arity)])

    def __getitem__(self, i):
        return self.comps[i]

    def __call__(self, X):
        total = self.chart.zero()
        for (i,), v in X.comps.items():
            total = total + v * self.comps[i]
        return total

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        same_chart(self.chart, other.chart)
        return OneForm(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return OneForm(self.chart, [-a for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = self.chart.coerce(f)
        return OneForm(self.chart, [a * f for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.chart == other.chart and self.comps == other.comps

    def __hash__(self):
        return hash((self.chart, tuple(self.comps)))

    def lines(self, name="oneform"):
        return [f"{name}[{i + 1}] = {c}" for i, c in enumerate(self.comps) if not c.is_zero()]

    def __str__(self):
        return "\n".join(self.lines()) or "oneform = 0"


class VolumeForm:
    """Top form ``density**exponent dx^1 ^ ... ^ dx^m``.

    ``exponent`` lets a Riemannian volume sqrt(det g) be represented through
    the rational det g; only logarithmic derivatives are ever taken.
    """

    kind = "volume"

    def __init__(self, chart, density, exponent=1):
        density = chart.coerce(density)
        if density.is_zero():
            raise StructuralError("volume form density must be nonzero")
        self.chart = chart
        self.density = density
        self.exponent = Fraction(exponent)

    def log_derivative(self, k):
        return self.density.diff(k) / self.density * self.exponent

    def lines(self, name="volume"):
        suffix = "" if self.exponent == 1 else f"  # to the power {self.exponent}"
        return [f"{name}[] = {self.density}{suffix}"]

    def __eq__(self, other):
        if not isinstance(other, VolumeForm):
            return NotImplemented
        return (self.chart == other.chart and self.density == other.density
                and self.exponent == other.exponent)

    __hash__ = None


class LinearConnection:
    """Linear connection with Christoffel symbols gamma[(k, i, j)] = Gamma^k_{ij}."""

    kind = "linconn"

    def __init__(self, chart, gamma=None):
        self.chart = chart
        clean = {}
        for (k, i, j), v in (gamma or {}).items():
            if not all(0 <= a < chart.arity for a in (k, i, j)):
                raise StructuralError("connection index out of range")
            v = chart.coerce(v)
            if chart.is_tangent:
                raise StructuralError("linear connections live on base charts")
            if not v.is_zero():
                clean[(k, i, j)] = v
        self.gamma = clean

    def __call__(self, k, i, j):
        return self.gamma.get((k, i, j), self.chart.zero())

    @property
    def torsion_free(self):
        return all(self(k, j, i) == v for (k, i, j), v in self.gamma.items())

    def lines(self, name="linconn"):
        return [f"{name}[{k + 1},{i + 1},{j + 1}] = {v}"
                for (k, i, j), v in sorted(self.gamma.items())]


class NonlinearConnection:
    """Nonlinear connection on a tangent chart: gamma[(j, i)] = Gamma^j_i(x, y)."""

    kind = "nonlinconn"

    def __init__(self, chart, gamma=None):
        if not chart.is_tangent:
            raise StructuralError("nonlinear connections live on tangent charts")
        self.chart = chart
        n = chart.n
        clean = {}
        for (j, i), v in (gamma or {}).items():
            if not (0 <= j < n and 0 <= i < n):
                raise StructuralError("connection index out of range")
            v = chart.coerce(v)
            if not v.is_zero():
                clean[(j, i)] = v
        self.gamma = clean

    @classmethod
    def from_linear(cls, conn):
        """Gamma^k_i = Gamma^k_{ij} y^j."""
        tm = conn.chart.tangent
        out = {}
        for (k, i, j), v in conn.gamma.items():
            out[(k, i)] = out.get((k, i), tm.zero()) + v.extend(tm.coords) * tm.y(j)
        return cls(tm, out)

    def __call__(self, j, i):
        return self.gamma.get((j, i), self.chart.zero())

    def delta(self, i):
        """Horizontal frame field d/dx^i - Gamma^j_i d/dy^j."""
        n = self.chart.n
        comps = {i: self.chart.one()}
        for j in range(n):
            g = self(j, i)
            if not g.is_zero():
                comps[n + j] = -g
        return Multivector.vector(self.chart, comps)

    def lines(self, name="nonlinconn"):
        return [f"{name}[{j + 1},{i + 1}] = {v}" for (j, i), v in sorted(self.gamma.items())]


class ContravariantConnection:
    """Contravariant connection D_{dx^i} dx^j = Gamma^{ij}_k dx^k relative to a bivector."""

    kind = "contraconn"

    def __init__(self, chart, w, gamma=None):
        same_chart(chart, w.chart)
        self.chart = chart
        self.w = w
        clean = {}
        for (i, j, k), v in (gamma or {}).items():
            v = chart.coerce(v)
            if not v.is_zero():
                clean[(i, j, k)] = v
        self.gamma = clean

    def __call__(self, i, j, k):
        return self.gamma.get((i, j, k), self.chart.zero())

    def lines(self, name="contraconn"):
        return [f"{name}[{i + 1},{j + 1},{k + 1}] = {v}"
                for (i, j, k), v in sorted(self.gamma.items())]


class Metric:
    """Symmetric (pseudo-)metric g_{ij} with nonzero determinant."""

    kind = "metric"

    def __init__(self, chart, comps):
        self.chart = chart
        clean = {}
        for (i, j), v in comps.items():
            key = (min(i, j), max(i, j))
            v = chart.coerce(v)
            if not v.is_zero():
                clean[key] = v
        self.comps = clean
        if self.det().is_zero():
            raise StructuralError("degenerate metric")

    @classmethod
    def identity(cls, chart):
        return cls(chart, {(i, i): 1 for i in range(chart.arity)})

    def __getitem__(self, idx):
        i, j = idx
        return self.comps.get((min(i, j), max(i, j)), self.chart.zero())

    def det(self):
        n = self.chart.arity
        return _det([[self[i, j] for j in range(n)] for i in range(n)], self.chart)

    def volume(self):
        """Riemannian volume sqrt(det g) dx^1 ^ ... ^ dx^n."""
        return VolumeForm(self.chart, self.det(), Fraction(1, 2))

    def lines(self, name="metric"):
        return [f"{name}[{i + 1},{j + 1}] = {v}" for (i, j), v in sorted(self.comps.items())]


def _cofactor_det(m, chart):
    if len(m) == 1:
        return m[0][0]
    total = chart.zero()
    for c, a in enumerate(m[0]):
        if a.is_zero():
            continue
        minor = _cofactor_det([row[:c] + row[c + 1:] for row in m[1:]], chart)
        total = total + a * minor if c % 2 == 0 else total - a * minor
    return total


def _det(rows, chart):
    """Determinant over the rational-function field.

    Small matrices use division-free cofactor expansion (no gcds on the way);
    larger ones use Gaussian elimination.
    """
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return chart.one()
    if n <= 4:
        return _cofactor_det(m, chart)
    det = chart.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return chart.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        p = m[c][c]
        det = det * p
        for r in range(c + 1, n):
            if m[r][c].is_zero():
                continue
            f = m[r][c] / p
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


determinant = _det


# ---------------------------------------------------------------------------
# operations

def wedge(P, Q):
    """Exterior product of multivectors (degree-0 factors act as functions)."""
    same_chart(P.chart, Q.chart)
    deg = P.degree + Q.degree
    out = {}
    if deg > P.chart.arity:
        return Multivector.zero(P.chart, deg)
    for I, a in P.comps.items():
        for J, b in Q.comps.items():
            sign, K = merge_sign(I, J)
            if sign:
                _add_into(out, K, a * b if sign > 0 else -(a * b))
    return Multivector(P.chart, deg, out, check=False)


def sym_product(G, H):
    """Symmetric product, normalized so that iota(G (.) H) = iota(G) iota(H)."""
    same_chart(G.chart, H.chart)
    if G.degree == 0:
        return H * G.scalar
    if H.degree == 0:
        return G * H.scalar
    return SymCovariant.from_poly(G.chart, G.to_poly() * H.to_poly(), G.degree + H.degree)


def left_derivative(P, k):
    """Contract the coordinate coframe element dx^k into the first slot of P."""
    out = {}
    for I, v in P.comps.items():
        if k in I:
            pos = I.index(k)
            key = I[:pos] + I[pos + 1:]
            out[key] = v if pos % 2 == 0 else -v
    return Multivector(P.chart, P.degree - 1, out, check=False)


def right_derivative(P, k):
    """Remove d_k from the right end of each basis element."""
    p = P.degree
    out = {}
    for I, v in P.comps.items():
        if k in I:
            pos = I.index(k)
            key = I[:pos] + I[pos + 1:]
            out[key] = v if (p - 1 - pos) % 2 == 0 else -v
    return Multivector(P.chart, p - 1, out, check=False)


def interior_product(arg, T):
    """``i_alpha P`` for a one-form and a multivector, ``i_X G`` for a vector and a symmetric tensor.

    The symmetric contraction carries the factor k of a degree-k tensor, so
    that ``iota(i_X G) = X^i d iota(G)/d y^i``.
    """
    if T.degree == 0:
        raise StructuralError("interior product of a degree-0 object")
    if isinstance(T, Multivector) and isinstance(arg, OneForm):
        same_chart(arg.chart, T.chart)
        out = Multivector.zero(T.chart, T.degree - 1)
        for k, a in enumerate(arg.comps):
            if not a.is_zero():
                out = out + left_derivative(T, k) * a
        return out
    if isinstance(T, SymCovariant) and isinstance(arg, Multivector) and arg.degree == 1:
        same_chart(arg.chart, T.chart)
        k = T.degree
        out = {}
        for (i,), xi in arg.comps.items():
            for rest in combinations_with_replacement(range(T.chart.arity), k - 1):
                c = T[(i,) + rest]
                if not c.is_zero():
                    _add_into(out, rest, c * xi * k)
        return SymCovariant(T.chart, k - 1, out, check=False)
    raise TypeError("interior_product expects (OneForm, Multivector) or (vector, SymCovariant)")


def linear_curvature(conn):
    """R^k_{hij} = d_i G^k_{hj} - d_j G^k_{hi} + G^k_{il} G^l_{hj} - G^k_{jl} G^l_{hi}."""
    n = conn.chart.arity
    R = {}
    for k in range(n):
        for h in range(n):
            for i in range(n):
                for j in range(i + 1, n):
                    v = conn(k, h, j).diff(i) - conn(k, h, i).diff(j)
                    for l in range(n):
                        v = v + conn(k, i, l) * conn(l, h, j) - conn(k, j, l) * conn(l, h, i)
                    if not v.is_zero():
                        R[(k, h, i, j)] = v
                        R[(k, h, j, i)] = -v
    return R


def nabla_covariant(conn, H, X):
    """Covariant derivative nabla_X H of a symmetric covariant tensor (or function)."""
    same_chart(conn.chart, H.chart)
    same_chart(conn.chart, X.chart)
    if isinstance(H, OneForm):
        H = SymCovariant.from_oneform(H)
    n = conn.chart.arity
    k = H.degree
    out = {}
    for key in combinations_with_replacement(range(n), k):
        total = conn.chart.zero()
        for (i,), xi in X.comps.items():
            t = H[key].diff(i)
            for pos in range(k):
                for a in range(n):
                    g = conn(a, i, key[pos])
                    if g.is_zero():
                        continue
                    t = t - g * H[key[:pos] + (a,) + key[pos + 1:]]
            total = total + xi * t
        if not total.is_zero():
            out[key] = total
    return SymCovariant(H.chart, k, out, check=False)


def nabla_w(conn, w):
    """(nabla w)^{ij}_b = d_b w^{ij} + G^i_{bk} w^{kj} + G^j_{bk} w^{ik} (all i, j, b)."""
    n = conn.chart.arity
    T = {}
    for i in range(n):
        for j in range(n):
            for b in range(n):
                v = w[i, j].diff(b)
                for k in range(n):
                    v = v + conn(i, b, k) * w[k, j] + conn(j, b, k) * w[i, k]
                if not v.is_zero():
                    T[(i, j, b)] = v
    return T


def nabla_squared_w(conn, w):
    """Second covariant derivative of a bivector: keys (i, j, a, b) for nabla_a nabla_b w^{ij}."""
    same_chart(conn.chart, w.chart)
    if not conn.torsion_free:
        raise StructuralError("nabla_squared_w needs a torsion-free connection")
    n = conn.chart.arity
    zero = conn.chart.zero()
    T = nabla_w(conn, w)
    get = lambda i, j, b: T.get((i, j, b), zero)  # noqa: E731
    out = {}
    for i in range(n):
        for j in range(n):
            for a in range(n):
                for b in range(n):
                    v = get(i, j, b).diff(a)
                    for k in range(n):
                        v = (v + conn(i, a, k) * get(k, j, b) + conn(j, a, k) * get(i, k, b)
                             - conn(k, a, b) * get(i, j, k))
                    if not v.is_zero():
                        out[(i, j, a, b)] = v
    return out


def sharp(w, alpha):
    """(sharp alpha)^j = w^{ij} alpha_i, so that beta(sharp alpha) = w(alpha, beta)."""
    same_chart(w.chart, alpha.chart)
    n = w.chart.arity
    comps = {}
    for j in range(n):
        v = w.chart.zero()
        for i in range(n):
            if not alpha.comps[i].is_zero():
                v = v + w[i, j] * alpha.comps[i]
        comps[j] = v
    return Multivector.vector(w.chart, comps)


def differential(chart, f):
    return OneForm.differential(chart, f)
