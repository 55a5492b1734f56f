"""Frontality, the Jacobian, Pluecker coefficients, adapted coordinates and the kernel field."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from . import jets as J
from .errors import CorankError, InconclusiveError, NotDivisible
from .germs import JetMap, PreparedGerm, VectorFieldJet, all_minors, corank, prepare
from .jets import Jet
from .linalg import rank


class FrontalStatus(enum.Enum):
    PROPER = "ProperFrontal"
    DEGENERATE = "DegenerateJacobiIdeal"
    NOT_FRONTAL = "NotFrontalWitness"
    INCONCLUSIVE = "InconclusiveAtOrder"


@dataclass
class FrontalData:
    """Everything extracted by :func:`frontality`.

    ``pluecker[I]`` is h_I with D_I = h_I * lambda.  ``witness`` is set for a
    non-frontal verdict: (I0, I, degree) where D_I is not a multiple of D_I0.
    ``adapted`` is the m x m target matrix of :func:`adapt_target`.
    """

    status: FrontalStatus
    minors: dict
    generator_index: Optional[tuple] = None
    lam: Optional[Jet] = None
    pluecker: dict = field(default_factory=dict)
    adapted: Optional[list] = None
    witness: Optional[tuple] = None
    order: Optional[int] = None
    reason: str = ""
    germ: Optional[JetMap] = field(default=None, repr=False)
    _prepared: Optional[PreparedGerm] = field(default=None, repr=False)

    @property
    def is_proper(self):
        return self.status is FrontalStatus.PROPER

    @property
    def prepared(self) -> Optional[PreparedGerm]:
        if self._prepared is None and self.germ is not None and corank(self.germ) == 1:
            self._prepared = prepare(self.germ)
        return self._prepared

    @property
    def kernel(self) -> Optional[VectorFieldJet]:
        """Kernel field in the original source coordinates (corank 1 only), computed on demand."""
        p = self.prepared
        return None if p is None else kernel_field(self.germ, p)


def _generator_key(item):
    I, D = item
    low = D.lowest_part()
    lead = max(low.terms, key=J.grlex_key)
    return (D.valuation(), tuple(-k for k in lead), I)


def frontality(f: JetMap) -> FrontalData:
    """Decide whether the Jacobi ideal is principal and nonzero.

    The candidate generator is the minor of lowest valuation (ties: leading
    monomial of the lowest part, then the index set); every other minor is
    divided by it.  A failed division certifies non-principality in the
    formal power series ring.
    """
    if f.n > f.m:
        raise ValueError(f"source dimension {f.n} exceeds target dimension {f.m}")
    minors = all_minors(f)
    live = {I: D for I, D in minors.items() if D.reliable_valuation() is not None}
    if not live:
        if all(not D.terms for D in minors.values()):
            return FrontalData(FrontalStatus.DEGENERATE, minors,
                               reason="all n-minors vanish identically")
        rel = min(D.reliable for D in minors.values())
        return FrontalData(FrontalStatus.INCONCLUSIVE, minors, order=rel,
                           reason=f"all n-minors vanish through reliable order {rel}")
    I0, lam = min(live.items(), key=_generator_key)
    pl = {}
    for I, D in minors.items():
        if I == I0:
            pl[I] = Jet.constant(1, f.n, f.order)
            continue
        try:
            pl[I] = J.divide(D, lam)
        except NotDivisible as exc:
            return FrontalData(FrontalStatus.NOT_FRONTAL, minors, I0, lam,
                               witness=(I0, I, exc.degree),
                               reason=f"minor {_fmt(I)} is not a multiple of minor {_fmt(I0)} "
                                      f"(degree {exc.degree})")
        except InconclusiveError as exc:
            return FrontalData(FrontalStatus.INCONCLUSIVE, minors, I0, lam, order=exc.order,
                               reason=exc.reason)
    fd = FrontalData(FrontalStatus.PROPER, minors, I0, lam, pl, germ=f)
    fd.adapted = adapting_matrix(f, fd)
    return fd


def _fmt(I):
    return "".join(str(i + 1) for i in I)


def plucker_h(fd: FrontalData, i, j):
    """h_ij with df_i = sum_j h_ij df_j (j in I0), by Cramer's rule on the minors."""
    I0 = fd.generator_index
    pos = I0.index(j)
    replaced = list(I0)
    replaced[pos] = i
    if i in I0:
        return Jet.constant(1 if i == j else 0, fd.lam.nvars, fd.lam.order)
    # reorder the index set increasingly, tracking the sign of the permutation
    order = sorted(range(len(replaced)), key=lambda k: replaced[k])
    sign = _perm_sign(order)
    h = fd.pluecker[tuple(replaced[k] for k in order)]
    return -h if sign < 0 else h


def _perm_sign(p):
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def adapting_matrix(f: JetMap, fd: FrontalData):
    """Target matrix A with x~ = A x: I0 moved to the front, then x~_i -= h_ij(0) x_j."""
    I0 = fd.generator_index
    m = f.m
    rest = [i for i in range(m) if i not in I0]
    perm = list(I0) + rest
    A = [[mpq(1 if c == perm[r] else 0) for c in range(m)] for r in range(m)]
    for r, i in enumerate(rest, start=len(I0)):
        for j in I0:
            c = plucker_h(fd, i, j).value_at_zero()
            if c:
                A[r][j] -= c
    return A


def adapt_target(f: JetMap, fd: FrontalData) -> JetMap:
    """The germ in adapted target coordinates (see :func:`adapting_matrix`)."""
    if f.m == f.n:
        return f
    if not fd.is_proper:
        raise ValueError("adapted coordinates need a proper frontal")
    if corank(f) > 1:
        raise CorankError(corank(f))
    A = fd.adapted if fd.adapted is not None else adapting_matrix(f, fd)
    return f.apply_linear(A)


def kernel_field(f: JetMap, prepared: PreparedGerm | None = None) -> VectorFieldJet:
    """d/ds_n of the prepared frame pushed forward to the original source coordinates."""
    k = corank(f)
    if k != 1:
        raise CorankError(k)
    prepared = prepared or prepare(f)
    n = f.n
    dpsi = [J.derive(p, n - 1) for p in prepared.source]
    return VectorFieldJet(J.compose(c, list(prepared.source_inverse)) for c in dpsi)


def is_front(f: JetMap, fd: FrontalData) -> bool:
    """True iff the Legendre lift (f, h_ij) is immersive at 0."""
    if f.m == f.n:
        return corank(f) == 0
    if not fd.is_proper:
        raise ValueError("is_front needs a proper frontal")
    I0 = fd.generator_index
    rows = [row for row in f.linear_part()]
    n = f.n
    for i in range(f.m):
        if i in I0:
            continue
        for j in I0:
            h = plucker_h(fd, i, j)
            if h.reliable < 1:
                raise InconclusiveError("Pluecker coefficient not reliable in degree 1", h.reliable)
            rows.append([h.coeff(tuple(1 if k == q else 0 for k in range(n))) for q in range(n)])
    return rank(rows) == n


class KTag(enum.Enum):
    UNIT = "Unit"
    REGULAR = "Regular"
    MORSE_INDEFINITE = "MorseIndefinite"
    MORSE_DEFINITE = "MorseDefinite"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class KClass:
    tag: KTag
    hessian_det: Optional[mpq] = None


def kclass_of_lambda(lam: Jet) -> KClass:
    """Contact class of a function of two variables at 0 (unit / regular / Morse / worse)."""
    if lam.nvars != 2:
        raise ValueError("kclass_of_lambda expects two variables")
    if lam.value_at_zero():
        return KClass(KTag.UNIT)
    if lam.checked_coeff((1, 0)) or lam.checked_coeff((0, 1)):
        return KClass(KTag.REGULAR)
    a = 2 * lam.checked_coeff((2, 0))
    b = lam.checked_coeff((1, 1))
    c = 2 * lam.checked_coeff((0, 2))
    det = a * c - b * b
    if det < 0:
        return KClass(KTag.MORSE_INDEFINITE, det)
    if det > 0:
        return KClass(KTag.MORSE_DEFINITE, det)
    return KClass(KTag.DEGENERATE, det)
