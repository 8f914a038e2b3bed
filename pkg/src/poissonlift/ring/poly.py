"""Sparse multivariate polynomials and rational functions over Q.

Polynomials are keyed by dense exponent tuples (one slot per variable of
the owning chart).  Monomials are compared in graded lexicographic order
over the declared variable order; that order fixes leading terms,
denominator normalization and printing.
"""

import math
from fractions import Fraction
from functools import reduce

from ..errors import StructuralError
from . import kernel


def grlex_key(exp):
    return (sum(exp), exp)


def _fmt_coeff(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _fmt_monomial(exp, names):
    parts = []
    for p, name in zip(exp, names):
        if p == 1:
            parts.append(name)
        elif p:
            parts.append(f"{name}^{p}")
    return "*".join(parts)


class Poly:
    """Polynomial with rational coefficients on a fixed variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = terms if terms is not None else {}

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        if not c:
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, which):
        vars = tuple(vars)
        i = which if isinstance(which, int) else _index_of(vars, which)
        if not 0 <= i < len(vars):
            raise StructuralError(f"variable index {i} out of range for {vars}")
        exp = [0] * len(vars)
        exp[i] = 1
        return cls(vars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, vars, exp, c=1):
        vars = tuple(vars)
        if len(exp) != len(vars):
            raise StructuralError("exponent vector length does not match chart arity")
        return cls(vars, {tuple(exp): c} if c else {})

    # -- basic queries --------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        if not self.terms:
            return True
        if len(self.terms) > 1:
            return False
        (e,) = self.terms
        return not any(e)

    def constant_value(self):
        if not self.terms:
            return 0
        return self.terms.get((0,) * len(self.vars), 0)

    def leading(self):
        """Leading (exponent, coefficient) under grlex."""
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, idx):
        """Maximal exponent of variable ``idx``."""
        return max((e[idx] for e in self.terms), default=-1)

    def used_vars(self):
        used = set()
        for e in self.terms:
            used.update(i for i, p in enumerate(e) if p)
        return used

    def depends_on(self, idx):
        return any(e[idx] for e in self.terms)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if other.vars is not self.vars and other.vars != self.vars:
            raise StructuralError(f"chart mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, kernel.add(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, kernel.sub(self.terms, other.terms))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Poly(self.vars, kernel.neg(self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.vars, kernel.scale(self.terms, other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly(self.vars, kernel.mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        return Poly(self.vars, kernel.scale(self.terms, c))

    def mul_term(self, exp, c):
        return Poly(self.vars, kernel.mul_term(self.terms, tuple(exp), c))

    def diff(self, idx):
        if not 0 <= idx < len(self.vars):
            raise StructuralError(f"unknown variable index {idx}")
        return Poly(self.vars, kernel.diff(self.terms, idx))

    def monic(self):
        if not self.terms:
            return self
        _, lc = self.leading()
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    # -- chart changes --------------------------------------------------
    def extend(self, vars):
        """Embed into a chart whose variables extend this one's as a prefix."""
        vars = tuple(vars)
        k = len(self.vars)
        if vars[:k] != self.vars:
            raise StructuralError(f"{vars} does not extend {self.vars}")
        pad = (0,) * (len(vars) - k)
        return Poly(vars, {e + pad: c for e, c in self.terms.items()})

    def restrict(self, vars):
        """Inverse of ``extend``; fails if a dropped variable occurs."""
        vars = tuple(vars)
        k = len(vars)
        if self.vars[:k] != vars:
            raise StructuralError(f"{self.vars} does not extend {vars}")
        out = {}
        for e, c in self.terms.items():
            if any(e[k:]):
                raise StructuralError("polynomial depends on dropped variables")
            out[e[:k]] = c
        return Poly(vars, out)

    def coeffs_in(self, idx):
        """View as a univariate polynomial in variable ``idx``: {power: Poly}."""
        out = {}
        for e, c in self.terms.items():
            p = e[idx]
            lst = list(e)
            lst[idx] = 0
            out.setdefault(p, {})[tuple(lst)] = c
        return {p: Poly(self.vars, t) for p, t in out.items()}

    # -- comparison / printing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = _fmt_monomial(e, self.vars)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(a)}*{mono}"
            if k == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


def _index_of(vars, name):
    try:
        return vars.index(name)
    except ValueError:
        raise StructuralError(f"unknown variable {name!r}") from None


# ---------------------------------------------------------------------------
# exact division and gcd over Q[x1..xm]

def divexact(a, b):
    """Return q with a == q*b; raise ArithmeticError if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if b.is_constant():
        return a.scale(Fraction(1) / b.constant_value())
    eb, cb = b.leading()
    inv = Fraction(1) / cb
    q = {}
    r = a.terms
    while r:
        er = max(r, key=grlex_key)
        d = tuple(x - y for x, y in zip(er, eb))
        if min(d) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = r[er] * inv
        q[d] = c
        r = kernel.sub(r, kernel.mul_term(b.terms, d, c))
    return Poly(a.vars, q)


def _zprimitive(p):
    """Scale p to integer coefficients with content 1 (positive leading term)."""
    if p.is_zero():
        return p
    den = reduce(lambda m, c: m * Fraction(c).denominator // math.gcd(m, Fraction(c).denominator),
                 p.terms.values(), 1)
    ints = [int(Fraction(c) * den) for c in p.terms.values()]
    g = reduce(math.gcd, ints)
    if p.leading()[1] < 0:
        g = -g
    return p.scale(Fraction(den, g))


def _content(p, v):
    coeffs = list(p.coeffs_in(v).values())
    return reduce(gcd, coeffs[1:], coeffs[0].monic())


def _content_outside(p, keep):
    """gcd of the coefficients of p viewed as a polynomial in the variables not in ``keep``."""
    groups = {}
    for e, c in p.terms.items():
        outer = tuple(x if i not in keep else 0 for i, x in enumerate(e))
        inner = tuple(x if i in keep else 0 for i, x in enumerate(e))
        groups.setdefault(outer, {})[inner] = c
    coeffs = sorted((Poly(p.vars, t) for t in groups.values()), key=lambda q: len(q.terms))
    return reduce(gcd, coeffs[1:], coeffs[0].monic())


def _primitive(p, v):
    if p.is_zero():
        return p
    return _zprimitive(divexact(p, _content(p, v)))


def _prem(a, b, v):
    db = b.degree_in(v)
    lcb = b.coeffs_in(v)[db]
    exp = [0] * len(a.vars)
    while not a.is_zero():
        da = a.degree_in(v)
        if da < db:
            break
        lca = a.coeffs_in(v)[da]
        exp[v] = da - db
        a = _zprimitive(lcb * a - lca * b.mul_term(exp, 1))
    return a


def gcd(a, b):
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.const(a.vars, 1)
    if a == b:
        return a.monic()
    used_a, used_b = a.used_vars(), b.used_vars()
    if used_a != used_b:
        # a common divisor only involves the shared variables
        keep = used_a & used_b
        if not keep:
            return Poly.const(a.vars, 1)
        if used_a != keep:
            a = _content_outside(a, keep)
        if used_b != keep:
            b = _content_outside(b, keep)
        return gcd(a, b)
    if len(b.terms) < len(a.terms):
        a, b = b, a
    try:
        divexact(b, a)
        return a.monic()
    except ArithmeticError:
        pass  # not a divisor; run the PRS
    v = min(used_a)
    ca, cb = _content(a, v), _content(b, v)
    pa, pb = _zprimitive(divexact(a, ca)), _zprimitive(divexact(b, cb))
    c = gcd(ca, cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _prem(pa, pb, v)
        pa, pb = pb, (_primitive(r, v) if not r.is_zero() else r)
    g = _primitive(pa, v) if pa.degree_in(v) > 0 else Poly.const(a.vars, 1)
    return (c * g).monic()


# ---------------------------------------------------------------------------

class RatFunc:
    """Reduced quotient of polynomials with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalized=False):
        if den is None:
            self.num = num
            self.den = Poly.const(num.vars, 1)
            return
        if normalized:
            self.num, self.den = num, den
            return
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if den.is_constant():
            c = den.constant_value()
            self.num = num if c == 1 else num.scale(Fraction(1) / c)
            self.den = Poly.const(num.vars, 1)
            return
        if num.is_zero():
            self.num, self.den = num, Poly.const(num.vars, 1)
            return
        g = gcd(num, den)
        if not g.is_constant():
            num, den = divexact(num, g), divexact(den, g)
        _, lc = den.leading()
        if lc != 1:
            inv = Fraction(1) / lc
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def const(cls, vars, c):
        return cls(Poly.const(vars, c))

    @classmethod
    def var(cls, vars, which):
        return cls(Poly.var(vars, which))

    @classmethod
    def zero(cls, vars):
        return cls(Poly(vars, {}))

    @classmethod
    def one(cls, vars):
        return cls(Poly.const(vars, 1))

    def is_zero(self):
        return not self.num.terms

    def is_polynomial(self):
        return self.den.is_constant()

    def is_constant(self):
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def normalize(self):
        """Canonical form (already maintained; re-running is a no-op)."""
        return RatFunc(self.num, self.den)

    def depends_on(self, idx):
        return self.num.depends_on(idx) or self.den.depends_on(idx)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            self.num._check(other.num)
            return other
        if isinstance(other, Poly):
            self.num._check(other)
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num + o.num)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc.zero(self.vars)
            return RatFunc(self.num.scale(other), self.den, normalized=True)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_constant() and o.den.is_constant():
            return RatFunc(self.num * o.num)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return RatFunc(self.num.scale(Fraction(1) / Fraction(other)), self.den,
                           normalized=True)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise ValueError("integer exponents only")
        if k < 0:
            return RatFunc.one(self.vars) / self ** (-k)
        return RatFunc(self.num ** k, self.den ** k, normalized=True)

    def diff(self, idx):
        """Exact partial derivative by the quotient rule."""
        if not 0 <= idx < len(self.vars):
            raise StructuralError(f"unknown variable index {idx}")
        dn = self.num.diff(idx)
        if self.den.is_constant():
            return RatFunc(dn, self.den, normalized=True)
        dd = self.den.diff(idx)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def extend(self, vars):
        return RatFunc(self.num.extend(vars), self.den.extend(vars), normalized=True)

    def restrict(self, vars):
        return RatFunc(self.num.restrict(vars), self.den.restrict(vars), normalized=True)

    # -- comparison / printing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        if isinstance(other, Poly):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num.terms)

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den.terms) > 1 or not _is_bare_monomial(self.den):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self})"


def _is_bare_monomial(p):
    if len(p.terms) != 1:
        return False
    ((e, c),) = p.terms.items()
    return c == 1 and sum(1 for x in e if x) <= 1


def ratfunc_normalize(r):
    return r.normalize()


def partial_derivative(r, var):
    """Derivative of ``r`` with respect to a variable given by index or name."""
    idx = var if isinstance(var, int) else _index_of(r.vars, var)
    return r.diff(idx)


def poly_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
