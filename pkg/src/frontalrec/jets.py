"""Truncated multivariate power series ("jets") with exact rational coefficients.

A :class:`Jet` stores the Taylor coefficients of a function germ at the
origin up to a total degree ``order``.  Besides the truncation order every jet
carries a *reliable order*: the highest total degree through which its stored
coefficients are known to be exact.  Polynomial inputs are reliable through
``order``; differentiation, division by non-units and substitution of
imprecise jets lower it.  Coefficients above the reliable order are kept (they
are what the arithmetic produced) but must not be used for decisions; the
``checked_*`` accessors raise :class:`~frontalrec.errors.InconclusiveError`
when asked for one.

Variables are indexed from 0.  Exponents are tuples of non-negative ints.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import InconclusiveError, NotDivisible

DEFAULT_ORDER = 12

QQ = mpq


def qq(x) -> mpq:
    """Coerce ints, Fractions, strings like ``"3/4"`` and mpq to mpq."""
    if isinstance(x, str):
        return mpq(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


@lru_cache(maxsize=None)
def monomials(nvars: int, max_degree: int, min_degree: int = 0) -> tuple:
    """All exponents with ``min_degree <= |e| <= max_degree`` in graded-lex order."""
    out = []
    for d in range(min_degree, max_degree + 1):
        out.extend(_homogeneous_exponents(nvars, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _homogeneous_exponents(nvars: int, degree: int) -> tuple:
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in _homogeneous_exponents(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def grlex_key(e):
    return (sum(e), e)


class Jet:
    """Immutable truncated power series in ``nvars`` variables."""

    __slots__ = ("nvars", "order", "terms", "reliable")

    def __init__(self, nvars: int, order: int = DEFAULT_ORDER,
                 terms: Mapping | None = None, reliable: int | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        if order < 0:
            raise ValueError("order must be non-negative")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or min(e) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            if sum(e) > order:
                continue
            c = qq(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.nvars = nvars
        self.order = order
        self.terms = clean
        self.reliable = order if reliable is None else min(reliable, order)

    @classmethod
    def _raw(cls, nvars, order, terms, reliable):
        # trusted constructor: terms already clean and truncated
        j = object.__new__(cls)
        j.nvars = nvars
        j.order = order
        j.terms = terms
        j.reliable = min(reliable, order)
        return j

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars, order=DEFAULT_ORDER):
        return cls._raw(nvars, order, {}, order)

    @classmethod
    def constant(cls, c, nvars, order=DEFAULT_ORDER):
        c = qq(c)
        return cls._raw(nvars, order, {(0,) * nvars: c} if c else {}, order)

    @classmethod
    def variable(cls, i, nvars, order=DEFAULT_ORDER):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, order, {tuple(e): mpq(1)} if order >= 1 else {}, order)

    @classmethod
    def monomial(cls, exponent, nvars, order=DEFAULT_ORDER, coeff=1):
        return cls(nvars, order, {tuple(exponent): coeff})

    # -- inspection -------------------------------------------------------
    def coeff(self, exponent) -> mpq:
        return self.terms.get(tuple(exponent), mpq(0))

    def checked_coeff(self, exponent) -> mpq:
        d = sum(exponent)
        if d > self.reliable:
            raise InconclusiveError(
                f"coefficient of degree {d} is beyond reliable order {self.reliable}", self.reliable)
        return self.coeff(exponent)

    def value_at_zero(self) -> mpq:
        return self.checked_coeff((0,) * self.nvars)

    def derivative_at_zero(self, alpha) -> mpq:
        """``(d^alpha h)(0)`` = alpha! * coefficient, checked against reliability."""
        c = self.checked_coeff(alpha)
        for a in alpha:
            c *= factorial(a)
        return c

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self):
        """Lowest total degree with a nonzero coefficient; ``None`` for the zero jet."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def reliable_valuation(self):
        """Valuation if it is certified by the reliable part, else ``None``."""
        v = self.valuation()
        if v is None or v > self.reliable:
            return None
        return v

    def degree(self):
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def homogeneous_part(self, d) -> "Jet":
        return Jet._raw(self.nvars, self.order,
                        {e: c for e, c in self.terms.items() if sum(e) == d}, self.order)

    def lowest_part(self) -> "Jet":
        v = self.valuation()
        return self if v is None else self.homogeneous_part(v)

    def truncate(self, order) -> "Jet":
        order = min(order, self.order)
        return Jet._raw(self.nvars, order,
                        {e: c for e, c in self.terms.items() if sum(e) <= order},
                        min(self.reliable, order))

    def with_order(self, order) -> "Jet":
        """Change the truncation order; raising it does not raise reliability."""
        if order <= self.order:
            return self.truncate(order)
        return Jet._raw(self.nvars, order, dict(self.terms), self.reliable)

    def with_reliable(self, reliable) -> "Jet":
        return Jet._raw(self.nvars, self.order, self.terms, min(reliable, self.reliable))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Jet):
            raise TypeError(f"expected Jet, got {type(other).__name__}")
        if other.nvars != self.nvars or other.order != self.order:
            raise ValueError(
                f"jet mismatch: ({self.nvars} vars, order {self.order}) vs "
                f"({other.nvars} vars, order {other.order})")

    def _lift(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return other
        return Jet.constant(other, self.nvars, self.order)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Jet._raw(self.nvars, self.order, terms, min(self.reliable, other.reliable))

    __radd__ = __add__

    def __neg__(self):
        return Jet._raw(self.nvars, self.order, {e: -c for e, c in self.terms.items()}, self.reliable)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, Jet):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Jet.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (self.nvars == other.nvars and self.order == other.order
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.terms.items())))

    def equal_through(self, other, degree) -> bool:
        """Coefficient-wise equality for total degrees ``<= degree``."""
        keys = set(self.terms) | set(other.terms)
        return all(self.coeff(e) == other.coeff(e) for e in keys if sum(e) <= degree)

    def derive(self, i) -> "Jet":
        return derive(self, i)

    def __call__(self, *inner):
        return compose(self, list(inner))

    # -- display ----------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"t{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: grlex_key(t[0])):
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Jet({self.nvars}, order={self.order}, reliable={self.reliable}: {self.to_str()})"


def add(a: Jet, b: Jet) -> Jet:
    a._check(b)
    return a + b


def scale(q, a: Jet) -> Jet:
    q = qq(q)
    if not q:
        return Jet._raw(a.nvars, a.order, {}, a.reliable)
    return Jet._raw(a.nvars, a.order, {e: q * c for e, c in a.terms.items()}, a.reliable)


def _val_or_beyond(a: Jet) -> int:
    v = a.valuation()
    return a.reliable + 1 if v is None else min(v, a.reliable + 1)


def mul(a: Jet, b: Jet) -> Jet:
    """Truncated product.  Reliable through ``min(ra + vb, rb + va)``."""
    a._check(b)
    N = a.order
    rel = min(a.reliable + _val_or_beyond(b), b.reliable + _val_or_beyond(a), N)
    if len(a.terms) < len(b.terms):
        a, b = b, a
    out = {}
    if len(b.terms) == 1:
        (eb, cb), = b.terms.items()
        db = sum(eb)
        for ea, ca in a.terms.items():
            if sum(ea) + db <= N:
                out[tuple(x + y for x, y in zip(ea, eb))] = ca * cb
        return Jet._raw(a.nvars, N, out, rel)
    bl = sorted(((eb, cb, sum(eb)) for eb, cb in b.terms.items()), key=lambda t: t[2])
    get = out.get
    if a.nvars == 2:
        for (a0, a1), ca in a.terms.items():
            room = N - a0 - a1
            for (b0, b1), cb, db in bl:
                if db > room:
                    break
                e = (a0 + b0, a1 + b1)
                out[e] = get(e, 0) + ca * cb
    else:
        for ea, ca in a.terms.items():
            room = N - sum(ea)
            for eb, cb, db in bl:
                if db > room:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
    out = {e: c for e, c in out.items() if c}
    return Jet._raw(a.nvars, N, out, rel)


def derive(a: Jet, i: int) -> Jet:
    """Formal partial derivative in variable ``i`` (0-based); reliability drops by one."""
    if not 0 <= i < a.nvars:
        raise IndexError(f"variable index {i} out of range for {a.nvars} variables")
    out = {}
    for e, c in a.terms.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1:]
            out[ne] = c * k
    return Jet._raw(a.nvars, a.order, out, a.reliable - 1)


def shift(a: Jet, exponent) -> Jet:
    """Multiply by the monomial t^exponent (exact; used for cheap products)."""
    return mul(a, Jet.monomial(exponent, a.nvars, a.order))


def divide_by_monomial(a: Jet, exponent) -> Jet:
    """Exact division by t^exponent; every stored term must be divisible."""
    d = sum(exponent)
    out = {}
    for e, c in a.terms.items():
        ne = tuple(x - y for x, y in zip(e, exponent))
        if min(ne) < 0:
            if sum(e) <= a.reliable:
                raise NotDivisible(sum(e))
            continue
        out[ne] = c
    return Jet._raw(a.nvars, a.order, out, a.reliable - d)


def compose(outer: Jet, inner: Sequence[Jet]) -> Jet:
    """Substitute the jets ``inner`` (all without constant term) into ``outer``.

    The result lives in ``inner[0].nvars`` variables at the smallest truncation
    order among the inner jets; ``outer`` terms of higher degree are dropped.
    """
    if len(inner) != outer.nvars:
        raise ValueError(f"outer has {outer.nvars} variables, got {len(inner)} inner jets")
    if not inner:
        raise ValueError("need at least one inner jet")
    n = inner[0].nvars
    N = min(j.order for j in inner)
    inner = [j if j.order == N else j.truncate(N) for j in inner]
    for j in inner:
        if j.nvars != n:
            raise ValueError("inner jets must share nvars")
        if j.coeff((0,) * n):
            raise ValueError("inner jet has a nonzero constant term (germ must fix the origin)")
    vals = [_val_or_beyond(j) for j in inner]
    vmin = max(1, min(vals))

    # reliability bookkeeping
    rel = min(N, (outer.reliable + 1) * vmin - 1)
    for i, j in enumerate(inner):
        degs = [sum(e) for e in outer.terms if e[i]]
        if degs:
            rel = min(rel, j.reliable + (min(degs) - 1) * vmin)

    cache = {(0,) * outer.nvars: Jet.constant(1, n, N)}

    def mono(e):
        got = cache.get(e)
        if got is not None:
            return got
        i = max(k for k in range(len(e)) if e[k])
        prev = e[:i] + (e[i] - 1,) + e[i + 1:]
        got = mul(mono(prev), inner[i])
        cache[e] = got
        return got

    acc = {}
    get = acc.get
    for e, c in sorted(outer.terms.items(), key=lambda t: grlex_key(t[0])):
        if sum(x * v for x, v in zip(e, vals)) > N:
            continue
        for f, d in mono(e).terms.items():
            acc[f] = get(f, 0) + c * d
    acc = {e: c for e, c in acc.items() if c}
    return Jet._raw(n, N, acc, rel)


def compose_series(coeffs: Sequence, x: Jet) -> Jet:
    """Evaluate the univariate power series sum coeffs[k] x^k at a jet ``x`` with x(0) = 0."""
    if x.coeff((0,) * x.nvars):
        raise ValueError("series argument must vanish at the origin")
    out = Jet.zero(x.nvars, x.order)
    for c in reversed(coeffs):  # Horner
        out = out * x + Jet.constant(c, x.nvars, x.order)
    v = _val_or_beyond(x)
    tail = (len(coeffs)) * max(v, 1)
    return out.with_reliable(min(x.reliable, tail - 1))


def unit_inverse(u: Jet) -> Jet:
    """1/u for a unit u (u(0) != 0) through u's reliable order."""
    c = u.value_at_zero()
    if not c:
        raise ZeroDivisionError("not a unit")
    x = scale(1 / c, u) - 1
    return scale(1 / c, compose_series([(-1) ** k for k in range(u.order + 1)], x))


def unit_sqrt(u: Jet) -> Jet:
    """Square root of a unit with u(0) = 1, as a jet with value 1 at the origin."""
    if u.value_at_zero() != 1:
        raise ValueError("unit_sqrt needs u(0) = 1")
    coeffs = [mpq(1)]
    for k in range(1, u.order + 1):
        coeffs.append(coeffs[-1] * (mpq(1, 2) - (k - 1)) / k)
    return compose_series(coeffs, u - 1)


def invert_map(sigma: Sequence[Jet]) -> list[Jet]:
    """Formal inverse of a diffeomorphism germ given by ``n`` jets in ``n`` variables.

    Fixed-point iteration ``tau = L^-1 (x - H(tau))`` where ``L`` is the linear
    part and ``H`` the higher-order part; iteration ``k`` is carried out at
    truncation order ``k`` so the early passes stay cheap.
    """
    from .linalg import inverse

    n = len(sigma)
    if n == 0 or any(s.nvars != n for s in sigma):
        raise ValueError("invert_map needs n jets in n variables")
    N = sigma[0].order
    for s in sigma:
        if s.coeff((0,) * n):
            raise ValueError("map must fix the origin")
    lin = [[s.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)] for s in sigma]
    Linv = inverse(lin)  # raises on a singular linear part
    higher = [Jet._raw(n, N, {e: c for e, c in s.terms.items() if sum(e) >= 2}, s.reliable)
              for s in sigma]

    def linear_combo(mat, jets, order):
        out = []
        for row in mat:
            acc = Jet.zero(n, order)
            for c, j in zip(row, jets):
                if c:
                    acc = acc + scale(c, j)
            out.append(acc)
        return out

    def xs(order):
        return [Jet.variable(i, n, order) for i in range(n)]

    tau = linear_combo(Linv, xs(max(N, 1)), max(N, 1))
    if N <= 1:
        return [t.with_reliable(min(s.reliable for s in sigma)) for t in tau]
    tau = [t.truncate(1) for t in tau]
    for k in range(2, N + 1):
        tau_k = [t.with_order(k) for t in tau]
        hk = [compose(h.truncate(k), tau_k) for h in higher]
        rhs = [x - h for x, h in zip(xs(k), hk)]
        tau = linear_combo(Linv, rhs, k)
    rel = min(s.reliable for s in sigma)
    return [Jet._raw(n, N, t.terms, rel) for t in tau]


def _divide_homogeneous(r: dict, d: list, nvars):
    """Divide homogeneous polynomial ``r`` by homogeneous ``d`` (terms sorted grlex desc).

    Returns the quotient dict, or ``None`` when the remainder is nonzero.
    """
    lead_e, lead_c = d[0]
    r = dict(r)
    q = {}
    while r:
        e = max(r, key=grlex_key)
        c = r[e]
        diff = tuple(x - y for x, y in zip(e, lead_e))
        if min(diff) < 0:
            return None
        k = c / lead_c
        q[diff] = q.get(diff, 0) + k
        for de, dc in d:
            te = tuple(x + y for x, y in zip(diff, de))
            v = r.get(te, 0) - k * dc
            if v:
                r[te] = v
            else:
                r.pop(te, None)
    return q


def divide(num: Jet, den: Jet) -> Jet:
    """Quotient ``q`` with ``num = q * den`` through the reliable order.

    Coefficients of ``q`` are solved degree by degree against the lowest
    homogeneous part of ``den`` (graded-lex division).  Raises
    :class:`NotDivisible` at the first inconsistent degree within the checked
    range, which certifies non-divisibility among formal power series.
    """
    num._check(den)
    v = den.valuation()
    if v is None:
        raise ZeroDivisionError("division by the zero jet")
    if v > den.reliable:
        raise InconclusiveError("divisor vanishes through its reliable order", den.reliable)
    n, N = num.nvars, num.order
    check = min(num.reliable, den.reliable)
    low = sorted(((e, c) for e, c in den.terms.items() if sum(e) == v),
                 key=lambda t: grlex_key(t[0]), reverse=True)
    for e, c in num.terms.items():
        if sum(e) < v and sum(e) <= check:
            raise NotDivisible(sum(e))
    residual = dict(num.terms)
    q = {}
    for k in range(0, check - v + 1):
        deg = k + v
        part = {e: c for e, c in residual.items() if sum(e) == deg}
        if not part:
            continue
        qk = _divide_homogeneous(part, low, n)
        if qk is None:
            raise NotDivisible(deg)
        qj = Jet._raw(n, N, {e: c for e, c in qk.items() if c}, N)
        q.update(qj.terms)
        prod = mul(qj, den)
        for e, c in prod.terms.items():
            s = residual.get(e, 0) - c
            if s:
                residual[e] = s
            else:
                residual.pop(e, None)
    return Jet._raw(n, N, q, check - v)


def divides(num: Jet, den: Jet) -> bool:
    try:
        divide(num, den)
    except NotDivisible:
        return False
    return True


class FormJet:
    """A differential 1-form sum_i coeffs[i] dt_i with jet coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Jet]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a 1-form needs at least one coefficient")
        first = coeffs[0]
        for c in coeffs:
            first._check(c)
        if len(coeffs) != first.nvars:
            raise ValueError("a 1-form needs one coefficient per variable")
        self.coeffs = coeffs

    @property
    def nvars(self):
        return self.coeffs[0].nvars

    @property
    def order(self):
        return self.coeffs[0].order

    @classmethod
    def d(cls, h: Jet) -> "FormJet":
        """Exterior derivative of a function jet."""
        return cls(derive(h, i) for i in range(h.nvars))

    def __add__(self, other):
        return FormJet(a + b for a, b in zip(self.coeffs, other.coeffs))

    def times(self, h: Jet) -> "FormJet":
        return FormJet(h * c for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, FormJet) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        body = " + ".join(f"({c})dt{i + 1}" for i, c in enumerate(self.coeffs))
        return f"FormJet({body})"


def wedge_coefficient(w1: FormJet, w2: FormJet) -> Jet:
    """The dt1^dt2 coefficient of w1 ^ w2 for forms in two variables."""
    if w1.nvars != 2 or w2.nvars != 2:
        raise ValueError("wedge_coefficient is defined for two variables only")
    return w1.coeffs[0] * w2.coeffs[1] - w1.coeffs[1] * w2.coeffs[0]
