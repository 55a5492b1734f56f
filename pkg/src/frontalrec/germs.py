"""Map-germs as tuples of jets: Jacobi matrices, minors, corank, prepared form."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from . import jets as J
from .errors import CorankError
from .jets import Jet
from .linalg import inverse, nullspace, rank


def _unit(i, n):
    return tuple(1 if k == i else 0 for k in range(n))


class JetMap:
    """A map-germ (R^n, 0) -> (R^m, 0) given by m component jets in n variables."""

    __slots__ = ("comps",)

    def __init__(self, comps: Sequence[Jet]):
        comps = tuple(comps)
        if not comps:
            raise ValueError("a map-germ needs at least one component")
        first = comps[0]
        for c in comps:
            first._check(c)
            if c.coeff((0,) * c.nvars):
                raise ValueError("components must vanish at the origin")
        self.comps = comps

    @classmethod
    def from_polys(cls, polys, nvars, order=J.DEFAULT_ORDER):
        """Build from dicts ``exponent -> coefficient``."""
        return cls(Jet(nvars, order, p) for p in polys)

    @property
    def n(self):
        return self.comps[0].nvars

    @property
    def m(self):
        return len(self.comps)

    @property
    def order(self):
        return self.comps[0].order

    @property
    def reliable(self):
        return min(c.reliable for c in self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __len__(self):
        return len(self.comps)

    def __eq__(self, other):
        return isinstance(other, JetMap) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def linear_part(self):
        """m x n rational matrix of the differential at 0."""
        return [[c.coeff(_unit(j, self.n)) for j in range(self.n)] for c in self.comps]

    def compose_source(self, sigma: Sequence[Jet]) -> "JetMap":
        """``f o sigma`` for a source map given as n jets."""
        return JetMap(J.compose(c, sigma) for c in self.comps)

    def apply_target(self, tau: Sequence[Jet]) -> "JetMap":
        """``tau o f`` for a target map given as jets in m variables."""
        return JetMap(J.compose(t, self.comps) for t in tau)

    def apply_linear(self, mat) -> "JetMap":
        """Target linear change: new component i is sum_j mat[i][j] f_j."""
        out = []
        for row in mat:
            acc = Jet.zero(self.n, self.order)
            for c, f in zip(row, self.comps):
                if c:
                    acc = acc + J.scale(c, f)
            out.append(acc)
        return JetMap(out)

    def with_order(self, order) -> "JetMap":
        return JetMap(c.with_order(order) for c in self.comps)

    def to_strs(self, names=None):
        return [c.to_str(names) for c in self.comps]

    def __repr__(self):
        return f"JetMap(n={self.n}, m={self.m}, order={self.order}: ({', '.join(self.to_strs())}))"


class VectorFieldJet:
    """A vector field sum_j coeffs[j] d/dt_j with jet coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Jet]):
        coeffs = tuple(coeffs)
        for c in coeffs:
            coeffs[0]._check(c)
        if len(coeffs) != coeffs[0].nvars:
            raise ValueError("a vector field needs one coefficient per variable")
        self.coeffs = coeffs

    @classmethod
    def coordinate(cls, i, nvars, order=J.DEFAULT_ORDER):
        return cls(Jet.constant(1 if j == i else 0, nvars, order) for j in range(nvars))

    def apply(self, h: Jet) -> Jet:
        """The derivative of ``h`` along the field."""
        out = None
        for j, c in enumerate(self.coeffs):
            if not c.terms:
                continue
            term = J.derive(h, j)
            if not (len(c.terms) == 1 and c.coeff((0,) * h.nvars) == 1):
                term = c * term
            out = term if out is None else out + term
        if out is None:
            return Jet.zero(h.nvars, h.order).with_reliable(h.reliable - 1)
        return out

    def power_apply(self, h: Jet, k: int) -> Jet:
        for _ in range(k):
            h = self.apply(h)
        return h

    def at_zero(self):
        return [c.coeff((0,) * c.nvars) for c in self.coeffs]

    def __eq__(self, other):
        return isinstance(other, VectorFieldJet) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        body = " + ".join(f"({c})d/dt{i + 1}" for i, c in enumerate(self.coeffs) if c.terms)
        return f"VectorFieldJet({body or '0'})"


def jacobi_matrix(f: JetMap):
    """m x n matrix of partial derivatives."""
    return [[J.derive(c, j) for j in range(f.n)] for c in f.comps]


def _det(rows):
    k = len(rows)
    if k == 1:
        return rows[0][0]
    if k == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    out = None
    for j in range(k):
        if not rows[0][j].terms:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(sub)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    if out is None:
        zero = rows[0][0]
        rel = min(x.reliable for r in rows for x in r)
        return Jet.zero(zero.nvars, zero.order).with_reliable(rel)
    return out


def minor(f: JetMap, index, jac=None) -> Jet:
    """Determinant of the rows ``index`` (0-based, increasing) of the Jacobi matrix."""
    index = tuple(index)
    if len(index) != f.n or len(set(index)) != f.n or not all(0 <= i < f.m for i in index):
        raise ValueError(f"bad index set {index} for an {f.m}x{f.n} Jacobi matrix")
    jac = jac or jacobi_matrix(f)
    return _det([jac[i] for i in index])


def all_minors(f: JetMap):
    jac = jacobi_matrix(f)
    return {I: _det([jac[i] for i in I]) for I in combinations(range(f.m), f.n)}


def corank(f: JetMap) -> int:
    return f.n - rank(f.linear_part())


@dataclass(frozen=True)
class PreparedGerm:
    """A germ of the shape (s_1, .., s_{n-1}, phi_n, .., phi_m).

    ``target`` is the m x m matrix T and ``source`` the n jets Psi with
    ``germ = T f o Psi``; ``source_inverse`` is Psi^-1 in the original variables.
    """

    germ: JetMap
    target: list
    source: tuple
    source_inverse: tuple
    linear: list = field(default_factory=list)

    def reconstruct(self) -> JetMap:
        """T^-1 germ o Psi^-1, which should agree with the input germ."""
        return self.germ.compose_source(self.source_inverse).apply_linear(inverse(self.target))


def _pick_rows(mat, count):
    """First rows (in order) whose span reaches ``count`` dimensions."""
    chosen = []
    for i in range(len(mat)):
        if rank([mat[k] for k in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == count:
                break
    return chosen


def prepare(f: JetMap) -> PreparedGerm:
    """A-equivalent germ whose first n-1 components are the coordinates s_1..s_{n-1}.

    Target components are reordered (first independent ones to the front, the
    rest in their original order), a linear source change moves the kernel of
    the differential to d/ds_n, and the inverse of (f_1, .., f_{n-1}, s_n)
    straightens the first n-1 components.
    """
    k = corank(f)
    if k != 1:
        raise CorankError(k)
    n, m, N = f.n, f.m, f.order
    lin = f.linear_part()
    chosen = _pick_rows(lin, n - 1)
    perm = chosen + [i for i in range(m) if i not in chosen]
    T = [[mpq(1 if j == perm[i] else 0) for j in range(m)] for i in range(m)]
    g = f.apply_linear(T)

    # linear source change: columns e_{free...} then the kernel vector
    kern = nullspace(g.linear_part())[0]
    cols = []
    for j in range(n):
        cand = [mpq(1 if i == j else 0) for i in range(n)]
        if rank([c for c in cols] + [cand, kern]) == len(cols) + 2:
            cols.append(cand)
        if len(cols) == n - 1:
            break
    cols.append(kern)
    L = [[cols[j][i] for j in range(n)] for i in range(n)]  # t = L s
    Ls = [sum_linear(L[i], n, N) for i in range(n)]
    gL = g.compose_source(Ls)
    sigma = [gL[i] for i in range(n - 1)] + [Jet.variable(n - 1, n, N)]
    tau = J.invert_map(sigma)
    prepared = gL.compose_source(tau)
    # clean the coordinate components exactly
    comps = [Jet.variable(i, n, N).with_reliable(prepared.reliable) for i in range(n - 1)]
    comps += list(prepared.comps[n - 1:])
    prepared = JetMap(comps)
    source = tuple(J.compose(l, tau) for l in Ls)  # Psi = L o tau
    Linv = inverse(L)
    Linv_t = [sum_linear(Linv[i], n, N) for i in range(n)]
    # Psi^-1 = sigma o L^-1
    source_inverse = tuple([g[i] for i in range(n - 1)] + [Linv_t[n - 1]])
    return PreparedGerm(prepared, T, source, source_inverse, L)


def sum_linear(row, nvars, order):
    """The linear form sum_j row[j] t_j as a jet."""
    return Jet(nvars, order, {_unit(j, nvars): c for j, c in enumerate(row) if c})
