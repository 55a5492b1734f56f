"""Fixture factory: normal forms, tangent surfaces and random A-equivalent copies."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from . import jets as J
from .germs import JetMap
from .jets import DEFAULT_ORDER, Jet
from .linalg import det
from .recognize import Tag


@dataclass(frozen=True)
class CurveType:
    """Exponents l1 < l2 < ... of a space curve plus optional higher terms.

    ``extra[i]`` maps a power k > exponents[i] to a coefficient added to
    component i.
    """

    exponents: tuple
    extra: tuple = field(default=())

    def __post_init__(self):
        ex = tuple(int(e) for e in self.exponents)
        if not ex or ex[0] < 1 or any(b <= a for a, b in zip(ex, ex[1:])):
            raise ValueError(f"curve type must be strictly increasing positive integers, got {ex}")
        object.__setattr__(self, "exponents", ex)
        extra = tuple(dict(x) for x in self.extra) or tuple({} for _ in ex)
        if len(extra) != len(ex):
            raise ValueError("one dict of higher terms per component")
        for l, terms in zip(ex, extra):
            if any(k <= l for k in terms):
                raise ValueError(f"higher terms of a component of order {l} must have degree > {l}")
        object.__setattr__(self, "extra", extra)


def curve_of_type(L, order: int = DEFAULT_ORDER) -> list:
    """Components t^l_i + (higher terms) as one-variable jets."""
    if not isinstance(L, CurveType):
        L = CurveType(tuple(L))
    out = []
    for l, terms in zip(L.exponents, L.extra):
        poly = {(l,): 1}
        for k, c in terms.items():
            poly[(k,)] = c
        out.append(Jet(1, order, poly))
    return out


def tangent_surface(gamma: Sequence[Jet], order: int | None = None) -> JetMap:
    """The ruled surface (t, u) -> gamma(t) + u * gamma'(t) / t^(l-1), l = order of gamma.

    Dividing by t^(l-1) keeps the ruling direction well defined when the curve
    is singular; for a regular curve it is the usual tangent developable.
    Curves are treated as exact polynomials.
    """
    order = order or gamma[0].order
    l = min(c.valuation() for c in gamma if c.terms)
    comps = []
    for c in gamma:
        terms = {}
        for (k,), v in c.terms.items():
            if k <= order:
                terms[(k, 0)] = terms.get((k, 0), 0) + v
            d = k - l  # exponent of t in k t^(k-1) / t^(l-1)
            if d + 1 <= order:
                terms[(d, 1)] = terms.get((d, 1), 0) + k * v
        comps.append(Jet(2, order, terms))
    return JetMap(comps)


def random_curve(L, rng: random.Random, order: int = DEFAULT_ORDER, span: int = 3) -> list:
    """Type-preserving random perturbation: each component gets a few terms of higher degree."""
    ex = CurveType(tuple(L)).exponents
    extra = []
    for l in ex:
        terms = {}
        for k in range(l + 1, min(l + span, order) + 1):
            if rng.random() < 0.6:
                terms[k] = _small(rng)
        extra.append(terms)
    return curve_of_type(CurveType(ex, tuple(extra)), order)


def _small(rng):
    num = 0
    while not num:
        num = rng.randint(-9, 9)
    return mpq(num, rng.randint(1, 9))


def _poly(order, terms):
    return Jet(2, order, terms)


def normal_form(tag, m: int | None = None, c=0, order: int = DEFAULT_ORDER) -> JetMap:
    """Catalog normal form for a class tag (str or :class:`Tag`), padded with zeros to m."""
    tag = Tag(tag) if isinstance(tag, str) else tag
    q = mpq
    N = order
    fold = {(0, 2): 1}
    cusp = {(0, 3): 1, (1, 1): 1}
    beak = {(0, 3): 1, (1, 2): 1}
    swb = {(0, 4): 1, (1, 1): 1}
    lips = {(0, 3): 1, (2, 1): 1}
    U1 = {(0, 4): q(3, 4), (1, 2): q(1, 2)}
    U2 = {(0, 5): q(3, 5), (1, 3): q(1, 3)}
    table = {
        Tag.IMMERSION: [{(0, 1): 1}],
        Tag.FOLD: [fold],
        Tag.WHITNEY_CUSP: [cusp],
        Tag.BEAK_TO_BEAK: [beak],
        Tag.SWALLOWTAIL_BASE: [swb],
        Tag.LIPS_BASE: [lips],
        Tag.CUSPIDAL_EDGE: [fold, {(0, 3): 1}],
        Tag.EMBEDDED_CUSPIDAL_EDGE: [fold, {(0, 3): 1}, {}],
        Tag.FOLDED_UMBRELLA: [fold, {(1, 3): 1}],
        Tag.OPEN_FOLDED_UMBRELLA: [fold, {(1, 3): 1}, {(0, 5): 1}],
        Tag.SWALLOWTAIL: [cusp, U1],
        Tag.OPEN_SWALLOWTAIL: [cusp, U1, U2],
        Tag.MOND: [beak, {(0, 4): q(3, 4), (1, 3): q(2, 3)}],
        Tag.OPEN_MOND: [beak, {(0, 4): q(3, 4), (1, 3): q(2, 3)}, {(0, 5): q(3, 5), (1, 4): q(1, 2)}],
        Tag.SHCHERBAK: [beak, {(0, 5): q(3, 5), (1, 4): q(1, 2)}],
        Tag.CUSPIDAL_SWALLOWTAIL: [swb, {(0, 5): q(4, 5), (1, 2): q(1, 2)}],
        Tag.CUSPIDAL_LIPS: [lips, {(0, 4): q(3, 4), (2, 2): q(1, 2)}],
        Tag.FOLDED_PLEAT_CLASS: [cusp, _fp_third(c)],
    }
    if tag not in table:
        raise ValueError(f"no normal form for {tag.value}")
    comps = [{(1, 0): 1}] + table[tag]
    if m is not None:
        if m < len(comps):
            raise ValueError(f"{tag.value} needs at least {len(comps)} target dimensions")
        comps += [{}] * (m - len(comps))
    return JetMap(_poly(N, t) for t in comps)


def _fp_third(c):
    """3/5 t2^5 + 1/3 t1 t2^3 + c (1/2 t2^6 + 3/4 t1 t2^4 + 1/3 t1^2 t2^2)."""
    c = mpq(c)
    out = {(0, 5): mpq(3, 5), (1, 3): mpq(1, 3)}
    if c:
        out.update({(0, 6): c / 2, (1, 4): 3 * c / 4, (2, 2): c / 3})
    return out


CATALOG = [
    (Tag.FOLD, {}), (Tag.WHITNEY_CUSP, {}), (Tag.BEAK_TO_BEAK, {}), (Tag.LIPS_BASE, {}),
    (Tag.SWALLOWTAIL_BASE, {}),
    (Tag.CUSPIDAL_EDGE, {}), (Tag.EMBEDDED_CUSPIDAL_EDGE, {}), (Tag.FOLDED_UMBRELLA, {}),
    (Tag.OPEN_FOLDED_UMBRELLA, {}), (Tag.SWALLOWTAIL, {}), (Tag.OPEN_SWALLOWTAIL, {}),
    (Tag.MOND, {}), (Tag.OPEN_MOND, {}), (Tag.SHCHERBAK, {}), (Tag.CUSPIDAL_SWALLOWTAIL, {}),
    (Tag.CUSPIDAL_LIPS, {}), (Tag.FOLDED_PLEAT_CLASS, {"c": 0}), (Tag.FOLDED_PLEAT_CLASS, {"c": 1}),
]


def _random_diffeo(rng, nvars, order, degree, identity_linear, terms_per_comp=2):
    while True:
        if identity_linear:
            lin = [[mpq(int(i == j)) for j in range(nvars)] for i in range(nvars)]
        else:
            lin = [[mpq(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(nvars)]
                   for _ in range(nvars)]
            for i in range(nvars):  # diagonal bias makes a singular draw rare
                lin[i][i] += rng.choice((1, 2))
        if det(lin):
            break
    comps = []
    monos = J.monomials(nvars, degree, 2) if degree >= 2 else ()
    for i in range(nvars):
        terms = {tuple(1 if k == j else 0 for k in range(nvars)): lin[i][j]
                 for j in range(nvars) if lin[i][j]}
        if monos:
            for e in rng.sample(monos, min(terms_per_comp, len(monos))):
                terms[e] = terms.get(e, 0) + _small(rng)
        comps.append(Jet(nvars, order, terms))
    return comps


def random_a_perturbation(f: JetMap, seed, degree: int = 4, identity_linear: bool = False,
                          terms_per_comp: int = 2) -> JetMap:
    """tau o f o sigma for seeded random polynomial diffeomorphisms sigma and tau.

    Linear parts are random invertible rational matrices (or the identity);
    each component gets ``terms_per_comp`` random monomials of degree 2..degree
    with coefficients p/q, |p|, q <= 9.
    """
    if degree > f.order:
        raise ValueError("perturbation degree exceeds the truncation order")
    rng = random.Random(seed)
    sigma = _random_diffeo(rng, f.n, f.order, degree, identity_linear, terms_per_comp)
    tau = _random_diffeo(rng, f.m, f.order, degree, identity_linear, terms_per_comp)
    return f.compose_source(sigma).apply_target(tau)


def mond_surface(order: int = DEFAULT_ORDER) -> JetMap:
    """Tangent surface of (t, t^3, t^4) in source variables (u, t)."""
    return tangent_surface_uv([{(1,): 1}, {(3,): 1}, {(4,): 1}], order)


def tangent_surface_uv(polys, order=DEFAULT_ORDER) -> JetMap:
    """Tangent surface with the ruling parameter u as the first source variable."""
    g = tangent_surface([Jet(1, order, p) for p in polys], order)
    return JetMap(Jet(2, order, {(e[1], e[0]): v for e, v in c.terms.items()}) for c in g)


TANGENT_TABLE = [
    ((1, 2, 3), Tag.CUSPIDAL_EDGE),
    ((1, 2, 4), Tag.FOLDED_UMBRELLA),
    ((2, 3, 4), Tag.SWALLOWTAIL),
    ((1, 3, 4), Tag.MOND),
    ((1, 3, 5), Tag.SHCHERBAK),
    ((3, 4, 5), Tag.CUSPIDAL_SWALLOWTAIL),
    ((1, 2, 4, 5), Tag.OPEN_FOLDED_UMBRELLA),
    ((2, 3, 4, 5), Tag.OPEN_SWALLOWTAIL),
    ((1, 3, 4, 5), Tag.OPEN_MOND),
]


def butterfly_pair(order: int = DEFAULT_ORDER):
    """(t1, t1 t2 + t2^5 + t2^7) and (t1, t1 t2 + t2^5): J-equivalent only through a
    nontrivial source change, so a witness search with the identity is expected to fail."""
    q = {(1, 0): 1}
    return (JetMap([_poly(order, q), _poly(order, {(1, 1): 1, (0, 5): 1, (0, 7): 1})]),
            JetMap([_poly(order, q), _poly(order, {(1, 1): 1, (0, 5): 1})]))
