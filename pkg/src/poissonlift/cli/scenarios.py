"""Deterministic scenario models."""

import random
import re

from ..geometry import Chart, Metric, Multivector
from .dsl import Model, ParseError

NAMES = ("so3", "symplectic2", "symplectic4", "heisenberg", "zero3",
         "random-linear(SEED)", "random-quadratic(SEED)")


def _model(coords, comps, metric=None):
    M = Chart("M", coords)
    m = Model()
    m.add_manifold(M)
    g = metric(M) if metric else {(i, i): 1 for i in range(len(coords))}
    m.add("g", "metric", Metric(M, g), 2)
    m.add("w", "bivector", Multivector(M, 2, comps(M)), 2)
    return m


def _so3(M):
    x1, x2, x3 = (M.x(i) for i in range(3))
    return {(0, 1): x3, (1, 2): x1, (0, 2): -x2}


def _random_quadratic_function(M, rng):
    """Random quadratic polynomial with integer coefficients in [-3, 3]."""
    f = M.zero()
    xs = [M.x(i) for i in range(M.arity)]
    for i in range(M.arity):
        for j in range(i, M.arity):
            f = f + xs[i] * xs[j] * rng.randint(-3, 3)
    return f


def random_linear(seed):
    """Nambu bivector w^{ij} = eps_{ijk} d_k C for a random quadratic C: linear and Poisson."""
    rng = random.Random(seed)

    def comps(M):
        C = _random_quadratic_function(M, rng)
        d = [C.diff(k) for k in range(3)]
        return {(0, 1): d[2], (1, 2): d[0], (0, 2): -d[1]}

    return _model(("x1", "x2", "x3"), comps)


def random_quadratic(seed):
    """Generic random quadratic bivector on R^3; a non-Poisson control for most seeds."""
    rng = random.Random(seed)

    def comps(M):
        return {(0, 1): _random_quadratic_function(M, rng),
                (1, 2): _random_quadratic_function(M, rng),
                (0, 2): _random_quadratic_function(M, rng)}

    return _model(("x1", "x2", "x3"), comps)


def scenario(name):
    """Model for a named scenario; random ones take ``NAME(SEED)`` or ``NAME:SEED``."""
    m = re.fullmatch(r"(random-linear|random-quadratic)(?:\((-?\d+)\)|:(-?\d+))", name)
    if m:
        seed = int(m.group(2) if m.group(2) is not None else m.group(3))
        return random_linear(seed) if m.group(1) == "random-linear" else random_quadratic(seed)
    if name == "so3":
        return _model(("x1", "x2", "x3"), _so3)
    if name == "symplectic2":
        return _model(("x1", "x2"), lambda M: {(0, 1): 1},
                      metric=lambda M: {(0, 0): 1, (1, 1): 1 + M.x(0) ** 2})
    if name == "symplectic4":
        return _model(("x1", "x2", "x3", "x4"), lambda M: {(0, 2): 1, (1, 3): 1})
    if name == "heisenberg":
        return _model(("x1", "x2", "x3"), lambda M: {(0, 1): M.x(2)})
    if name == "zero3":
        return _model(("x1", "x2", "x3"), lambda M: {})
    raise ParseError("unknown-name", f"unknown scenario {name!r}; known: {', '.join(NAMES)}")
