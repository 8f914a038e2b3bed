# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-map kernels; same contract as ``_pykernel``."""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM, PyTuple_GET_SIZE
from cpython.ref cimport Py_INCREF


cdef inline tuple _add_exp(tuple x, tuple y):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(x)
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t i
    cdef long v
    for i in range(n):
        v = <long>(<object>PyTuple_GET_ITEM(x, i)) + <long>(<object>PyTuple_GET_ITEM(y, i))
        o = v
        Py_INCREF(o)
        PyTuple_SET_ITEM(out, i, o)
    return out


def add(dict a, dict b):
    cdef dict out
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


def sub(dict a, dict b):
    cdef dict out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) - c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


def neg(dict a):
    return {e: -c for e, c in a.items()}


def scale(dict a, k):
    if not k:
        return {}
    return {e: c * k for e, c in a.items()}


def mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple e, ea, eb
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = _add_exp(ea, eb)
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def mul_term(dict a, tuple exp, k):
    cdef dict out = {}
    cdef tuple e
    if not k:
        return out
    for e, c in a.items():
        out[_add_exp(e, exp)] = c * k
    return out


def diff(dict a, Py_ssize_t var):
    cdef dict out = {}
    cdef tuple e
    cdef long p
    for e, c in a.items():
        p = e[var]
        if p:
            lst = list(e)
            lst[var] = p - 1
            out[tuple(lst)] = c * p
    return out
