"""Jacobi modules, ramification modules and openings, truncated at a fixed degree.

All answers are about truncations: a :class:`Subspace` of function jets (or of
1-form jets) keeps coefficients of total degree <= ``degree``, and membership
means membership modulo terms of higher degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from gmpy2 import mpq

from . import jets as J
from .errors import InconclusiveError
from .germs import JetMap, jacobi_matrix
from .jets import FormJet, Jet, grlex_key, monomials
from .linalg import Echelon


def _fn_key(e):
    return grlex_key(e)


def _form_key(col):
    i, e = col
    return (sum(e), e, i)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def function_vector(h: Jet, degree: int) -> dict:
    return {e: c for e, c in h.terms.items() if sum(e) <= degree}


def form_vector(w, degree: int) -> dict:
    coeffs = w.coeffs if isinstance(w, FormJet) else w
    out = {}
    for i, c in enumerate(coeffs):
        for e, v in c.terms.items():
            if sum(e) <= degree:
                out[(i, e)] = v
    return out


class Subspace:
    """Canonical echelon basis of a space of truncated function or 1-form jets."""

    def __init__(self, kind: str, nvars: int, degree: int, track: bool = False):
        if kind not in ("functions", "forms"):
            raise ValueError("kind must be 'functions' or 'forms'")
        self.kind = kind
        self.nvars = nvars
        self.degree = degree
        self.echelon = Echelon(_fn_key if kind == "functions" else _form_key, track=track)

    def vector(self, x) -> dict:
        if isinstance(x, dict):
            return {k: v for k, v in x.items() if sum(k[1] if self.kind == "forms" else k) <= self.degree}
        if self.kind == "functions":
            return function_vector(x, self.degree)
        return form_vector(x, self.degree)

    def add(self, x) -> bool:
        return self.echelon.add(self.vector(x))

    def contains(self, x) -> bool:
        return self.echelon.contains(self.vector(x))

    __contains__ = contains

    @property
    def dim(self):
        return len(self.echelon)

    def basis(self):
        return self.echelon.basis()

    def basis_jets(self, order=None):
        """Basis rows as function jets (functions only)."""
        if self.kind != "functions":
            raise ValueError("basis_jets is defined for function spaces")
        order = order or self.degree
        return [Jet(self.nvars, order, dict(row)) for row in self.basis()]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.kind == other.kind
                and self.degree == other.degree and self.basis() == other.basis())

    def __repr__(self):
        return f"Subspace({self.kind}, nvars={self.nvars}, degree<={self.degree}, dim={self.dim})"


def _default_degree(f: JetMap, degree):
    limit = f.reliable - 1
    if degree is None:
        return limit
    if degree > limit:
        raise InconclusiveError(f"differentials are reliable only through degree {limit}", limit)
    return degree


def _generators(f: JetMap, degree: int):
    """Yield (j, u, vector of u * df_j) for monomials u of degree <= ``degree``."""
    jac = jacobi_matrix(f)
    n = f.n
    for j, row in enumerate(jac):
        base = form_vector(row, degree)
        if not base:
            continue
        for u in monomials(n, degree):
            du = sum(u)
            vec = {}
            for (i, e), c in base.items():
                if sum(e) + du <= degree:
                    vec[(i, _add_exp(e, u))] = c
            if vec:
                yield j, u, vec


def jacobi_module(f: JetMap, degree: int | None = None, track: bool = False) -> Subspace:
    """Span of u * df_j over all monomials u, truncated at ``degree`` (default: reliable order - 1)."""
    degree = _default_degree(f, degree)
    S = Subspace("forms", f.n, degree, track=track)
    labels = []
    for j, u, vec in _generators(f, degree):
        S.echelon.add(vec)
        labels.append((j, u))
    S.labels = labels
    return S


def ramification_jets(g: JetMap, degree: int | None = None) -> Subspace:
    """Function jets h (no constant term, degree <= D + 1) with dh in the Jacobi module mod degree > D."""
    D = _default_degree(g, degree)
    JM = jacobi_module(g, D)
    n = g.n
    aug = Echelon(lambda c: (0, _form_key(c[1])) if c[0] == "r" else (1, grlex_key(c[1])))
    for e in monomials(n, D + 1, 1):
        dh = {}
        for i in range(n):
            if e[i] and sum(e) - 1 <= D:
                de = e[:i] + (e[i] - 1,) + e[i + 1:]
                dh[(i, de)] = mpq(e[i])
        res, _ = JM.echelon.reduce(dh)
        vec = {("r", k): v for k, v in res.items()}
        vec[("h", e)] = mpq(1)
        aug.add(vec)
    out = Subspace("functions", n, D + 1)
    for row in aug.rows.values():
        if all(k[0] == "h" for k in row):
            out.echelon.add({k[1]: v for k, v in row.items()})
    return out


def project(S: Subspace, degree: int) -> Subspace:
    """Image of a function subspace under truncation to ``degree``."""
    out = Subspace(S.kind, S.nvars, degree)
    for row in S.basis():
        out.add(dict(row))
    return out


def _prefix_check(f: JetMap, g: JetMap):
    if f.n != g.n or f.m < g.m or any(f[i] != g[i] for i in range(g.m)):
        raise ValueError("f must start with the components of g")


def is_opening(f: JetMap, g: JetMap, degree: int | None = None) -> bool:
    """True iff df_j lies in the Jacobi module of g for every extra component (truncated)."""
    _prefix_check(f, g)
    D = _default_degree(g, degree)
    D = min(D, f.reliable - 1)
    JM = jacobi_module(g, D)
    jac = jacobi_matrix(f)
    return all(JM.contains(form_vector(jac[j], D)) for j in range(g.m, f.m))


@dataclass
class VersalityResult:
    versal: bool
    degree: int
    missing: list = field(default_factory=list)

    def __bool__(self):
        return self.versal


def pullback_space(f: JetMap, g: JetMap, degree: int) -> Subspace:
    """Span of g*(x^a) and g*(x^a) f_j (j > n) truncated at ``degree``."""
    n = g.m
    N = f.order
    S = Subspace("functions", f.n, degree)
    vals = [max(c.valuation() or degree + 1, 1) for c in g.comps]
    extra = [Jet.constant(1, f.n, N)] + [f[j] for j in range(n, f.m)]
    ranges = [range(0, degree // v + 1) for v in vals]
    for a in product(*ranges):
        if sum(x * v for x, v in zip(a, vals)) > degree:
            continue
        mono = Jet.constant(1, f.n, N)
        for k, x in enumerate(a):
            if x:
                mono = mono * g[k] ** x
        for e in extra:
            S.add(mono * e if e.terms else e)
    return S


def is_versal_opening(f: JetMap, g: JetMap, degree: int | None = None) -> VersalityResult:
    """Order-qualified versality: every ramification jet of g, truncated at
    N' = N - (largest degree among the components of g), is a combination
    g*(k_0) + sum_i g*(k_i) f_{n+i} modulo terms of degree > N'."""
    _prefix_check(f, g)
    R = ramification_jets(g, degree)
    overhead = max(c.degree() or 0 for c in g.comps)
    N = R.degree
    Np = N - overhead
    if Np < 1:
        raise InconclusiveError("truncation order too small for a versality check", N)
    if not is_opening(f, g, degree):
        return VersalityResult(False, Np, ["not an opening"])
    Rp = project(R, Np)
    V = pullback_space(f, g, Np)
    missing = [row for row in Rp.basis() if not V.contains(dict(row))]
    return VersalityResult(not missing, Np, [Jet(f.n, f.order, dict(r)) for r in missing])


@dataclass
class JModuleResult:
    equal: bool
    degree: int
    P: Optional[list] = None
    Q: Optional[list] = None
    obstruction: Optional[str] = None

    def __bool__(self):
        return self.equal


def _factor(target: JetMap, source: JetMap, D: int):
    """Matrix P of jets with d(target_i) = sum_j P_ij d(source_j) mod degree > D, or the failing row."""
    JM = jacobi_module(source, D, track=True)
    jac = jacobi_matrix(target)
    P = []
    for i in range(target.m):
        combo = JM.echelon.express(form_vector(jac[i], D))
        if combo is None:
            return None, i
        row = [{} for _ in range(source.m)]
        for idx, c in combo.items():
            j, u = JM.labels[idx]
            row[j][u] = row[j].get(u, 0) + c
        P.append([Jet(source.n, source.order, r) for r in row])
    return P, None


def j_module_equal(f: JetMap, f2: JetMap, degree: int | None = None) -> JModuleResult:
    """Whether the Jacobi modules agree (truncated), with witnesses J(f2) = P J(f), J(f) = Q J(f2)."""
    if f.n != f2.n or f.order != f2.order:
        raise ValueError("germs must share source dimension and order")
    D = min(_default_degree(f, degree), _default_degree(f2, degree))
    P, bad = _factor(f2, f, D)
    if P is None:
        return JModuleResult(False, D, obstruction=f"d(f'_{bad + 1}) is not in the Jacobi module of f")
    Q, bad = _factor(f, f2, D)
    if Q is None:
        return JModuleResult(False, D, P=P, obstruction=f"d(f_{bad + 1}) is not in the Jacobi module of f'")
    return JModuleResult(True, D, P, Q)
