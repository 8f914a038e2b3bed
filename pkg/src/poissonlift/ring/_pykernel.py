"""Pure-Python term-map kernels.

A term map is a ``dict`` from exponent tuples to nonzero rational
coefficients (``int`` or ``Fraction``).  Every function returns a fresh
dict and never mutates its arguments.
"""


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def neg(a):
    return {e: -c for e, c in a.items()}


def scale(a, k):
    if not k:
        return {}
    return {e: c * k for e, c in a.items()}


def mul(a, b):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([i + j for i, j in zip(ea, eb)])
            s = get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def mul_term(a, exp, k):
    """Multiply by the single term ``k * x**exp``."""
    if not k:
        return {}
    return {tuple([i + j for i, j in zip(e, exp)]): c * k for e, c in a.items()}


def diff(a, var):
    out = {}
    for e, c in a.items():
        p = e[var]
        if p:
            lst = list(e)
            lst[var] = p - 1
            out[tuple(lst)] = c * p
    return out
