import os
import sys

import sympy as sp
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from frontalrec.jets import Jet, monomials

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

T = sp.symbols("t1:5")


def to_sympy(j: Jet):
    """Jet as a sympy polynomial expression in t1, t2, ..."""
    out = sp.Integer(0)
    for e, c in j.terms.items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for v, k in zip(T, e):
            term *= v ** k
        out += term
    return out


def from_sympy(expr, nvars, order):
    """Truncate a sympy polynomial at total degree ``order``."""
    poly = sp.Poly(sp.expand(expr), *T[:nvars])
    terms = {}
    for e, c in poly.terms():
        if sum(e) <= order:
            terms[e] = mpq(int(c.p), int(c.q))
    return Jet(nvars, order, terms)


rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-5, 5), st.integers(1, 4))


@st.composite
def jets(draw, nvars=2, order=5, max_terms=5, min_degree=0):
    exps = monomials(nvars, order, min_degree)
    picked = draw(st.lists(st.sampled_from(exps), max_size=max_terms, unique=True))
    return Jet(nvars, order, {e: draw(rationals) for e in picked})


@st.composite
def units(draw, nvars=2, order=5):
    j = draw(jets(nvars, order, min_degree=1))
    c = draw(rationals.filter(lambda x: x != 0))
    return j + Jet.constant(c, nvars, order)


@st.composite
def diffeos(draw, nvars=2, order=5):
    """Random origin-preserving map with an invertible linear part."""
    # L * U with unit lower L and nonzero diagonal in U is always invertible
    nz = st.sampled_from([-2, -1, 1, 2])
    L = [[1 if i == j else (draw(st.integers(-2, 2)) if j < i else 0) for j in range(nvars)]
         for i in range(nvars)]
    U = [[draw(nz) if i == j else (draw(st.integers(-2, 2)) if j > i else 0) for j in range(nvars)]
         for i in range(nvars)]
    lin = (sp.Matrix(L) * sp.Matrix(U)).tolist()
    out = []
    for i in range(nvars):
        h = draw(jets(nvars, order, max_terms=3, min_degree=2))
        terms = {tuple(1 if k == j else 0 for k in range(nvars)): int(lin[i][j]) for j in range(nvars)}
        out.append(Jet(nvars, order, terms) + h)
    return out


@st.composite
def corank1_germs(draw, m=3, order=5):
    """(t1 + ..., higher-order terms ...) composed with a random source diffeomorphism."""
    from frontalrec.germs import JetMap

    comps = [Jet.variable(0, 2, order) + draw(jets(2, order, max_terms=3, min_degree=2))]
    for _ in range(m - 1):
        comps.append(draw(jets(2, order, max_terms=4, min_degree=2)))
    sigma = draw(diffeos(2, order))
    return JetMap(comps).compose_source(sigma)
