"""Recognition of frontal singularities of surfaces from their jets.

Everything is decided in one normalized frame: target coordinates adapted
to the Legendre plane, then the prepared shape (s1, phi2, phi3, ...) in which
the kernel field is d/ds2 and the Jacobian is d(phi2)/ds2.  Every predicate
that is evaluated lands in a :class:`Certificate` together with the exact
numbers it was decided on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from gmpy2 import mpq

from . import jets as J
from .errors import CorankError, InconclusiveError, NotFrontalError, PreconditionError
from .frontal import (FrontalData, KClass, KTag, adapt_target, frontality,
                      kclass_of_lambda)
from .germs import JetMap, VectorFieldJet, corank, prepare
from .jets import FormJet, Jet, wedge_coefficient
from .linalg import rank

MAX_ETA_ORDER = 7


class Tag(enum.Enum):
    IMMERSION = "Immersion"
    FOLD = "Fold"
    WHITNEY_CUSP = "WhitneyCusp"
    BEAK_TO_BEAK = "BeakToBeak"
    SWALLOWTAIL_BASE = "SwallowtailBase"
    LIPS_BASE = "LipsBase"
    CUSPIDAL_EDGE = "CuspidalEdge"
    EMBEDDED_CUSPIDAL_EDGE = "EmbeddedCuspidalEdge"
    FOLDED_UMBRELLA = "FoldedUmbrella"
    OPEN_FOLDED_UMBRELLA = "OpenFoldedUmbrella"
    SWALLOWTAIL = "Swallowtail"
    OPEN_SWALLOWTAIL = "OpenSwallowtail"
    MOND = "Mond"
    OPEN_MOND = "OpenMond"
    SHCHERBAK = "Shcherbak"
    CUSPIDAL_SWALLOWTAIL = "CuspidalSwallowtail"
    CUSPIDAL_LIPS = "CuspidalLips"
    FOLDED_PLEAT_CLASS = "FoldedPleatClass"
    UNRECOGNIZED = "Unrecognized"
    INCONCLUSIVE = "Inconclusive"

    @property
    def definite(self):
        return self not in (Tag.UNRECOGNIZED, Tag.INCONCLUSIVE)


# -- certificates -----------------------------------------------------------

def _kclass_check(v):
    lam = Jet(2, 2, {(0, 0): v["value"], (1, 0): v["d1"], (0, 1): v["d2"],
                     (2, 0): v["c20"], (1, 1): v["c11"], (0, 2): v["c02"]})
    return kclass_of_lambda(lam).tag.value == v["expected"]


def _order_check(v):
    vals = v["values"]
    first = next((i for i, x in enumerate(vals) if x), None)
    return first == v["expected"]


def _form_check(v):
    return _form_verdict(v["form"])[0] is v["expected"]


CHECKS = {
    "nonzero": lambda v: v["value"] != 0,
    "zero": lambda v: v["value"] == 0,
    "all_zero": lambda v: all(x == 0 for x in v["values"]),
    "some_nonzero": lambda v: any(x != 0 for x in v["values"]),
    "equals": lambda v: v["value"] == v["expected"],
    "kclass": _kclass_check,
    "order": _order_check,
    "rank2": lambda v: rank(v["rows"]) == 2 if v["rows"] else False,
    "some_true": lambda v: any(v["values"]),
    "injective": _form_check,
}


@dataclass
class Entry:
    """One evaluated criterion: what was tested, on which exact numbers, and the outcome."""

    id: str
    criterion: str
    check: str
    values: dict
    holds: bool

    def replay(self) -> bool:
        return CHECKS[self.check](self.values) == self.holds


@dataclass
class Certificate:
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, id, criterion, check, **values) -> bool:
        holds = bool(CHECKS[check](values))
        self.entries.append(Entry(id, criterion, check, values, holds))
        return holds

    def note(self, text):
        self.notes.append(text)

    def replay(self) -> bool:
        """Re-evaluate every recorded predicate on its recorded values."""
        return all(e.replay() for e in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class SingularityClass:
    """Verdict plus the certificate that produced it.

    ``detail`` names the first failed criterion (Unrecognized) or the reason a
    value was out of reach (Inconclusive, with the exhausted ``order``).
    """

    tag: Tag
    certificate: Certificate
    detail: str = ""
    order: Optional[int] = None
    frame: Optional[JetMap] = None
    frontal: Optional[FrontalData] = None
    extras: dict = field(default_factory=dict)

    def __str__(self):
        return self.tag.value


class _Unrecognized(Exception):
    def __init__(self, detail):
        super().__init__(detail)
        self.detail = detail


# -- vanishing orders ---------------------------------------------------------

def vanishing_order(h: Jet, eta: VectorFieldJet, max_order: int = MAX_ETA_ORDER) -> int:
    """Least i <= max_order with (eta^i h)(0) != 0.

    Raises InconclusiveError if the values checked so far all vanish and the
    next one is beyond the reliable order, or if all of them up to
    ``max_order`` vanish.
    """
    i = _order_upto(h, eta, max_order)
    if i is None:
        raise InconclusiveError(f"(eta^i h)(0) = 0 for all i <= {max_order}", max_order)
    return i


def _order_upto(h, eta, cap):
    """Vanishing order, or None when it is certified to exceed ``cap``."""
    cur = h
    for i in range(cap + 1):
        if i:
            cur = eta.apply(cur)
        if cur.reliable < 0:
            raise InconclusiveError(f"eta^{i} h is beyond the reliable order", h.reliable)
        if cur.value_at_zero():
            return i
    return None


def _d2(phi: Jet, j: int, d1: int = 0) -> mpq:
    """(d/ds1)^d1 (d/ds2)^j phi at 0, refusing unreliable coefficients."""
    return phi.derivative_at_zero((d1, j))


def _orders_values(phi, upto):
    return [_d2(phi, j) for j in range(upto + 1)]


def _frame_order(phi, cap):
    vals = []
    for j in range(cap + 1):
        vals.append(_d2(phi, j))
        if vals[-1]:
            return j, vals
    return None, vals


# -- frames -----------------------------------------------------------------

def prepared_frame(f: JetMap, fd: FrontalData | None = None) -> JetMap:
    """Adapted target coordinates followed by the prepared source shape."""
    if f.m > f.n:
        fd = fd or frontality(f)
        f = adapt_target(f, fd)
    return prepare(f).germ


def normalize_fold(g: JetMap) -> JetMap:
    """Bring a prepared germ over a fold base to the shape (s1, s2^2, ...).

    Source: the critical curve is moved to s2 = 0 and s2 is rescaled by a unit;
    target: x2 -> (x2 - p(x1)) / q.  Coordinates x3.. are untouched, so
    adaptedness is kept.
    """
    N = g.order
    s1 = Jet.variable(0, 2, N)
    s2 = Jet.variable(1, 2, N)
    lam = J.derive(g[1], 1)
    a = lam.checked_coeff((0, 1))
    if not a:
        raise ValueError("not a fold base")
    c = Jet.zero(2, N)
    for _ in range(N):
        c = c - J.scale(1 / a, J.compose(lam, [s1, c]))
        c = Jet._raw(2, N, {e: v for e, v in c.terms.items() if e[1] == 0}, c.reliable)
    g1 = g.compose_source([s1, s2 + c])
    phi = g1[1]
    p = Jet._raw(2, N, {e: v for e, v in phi.terms.items() if e[1] == 0}, phi.reliable)
    Q = J.divide_by_monomial(phi - p, (0, 2))
    q = Q.value_at_zero()
    unit = J.scale(1 / q, Q)
    u = s2 * J.unit_sqrt(unit)
    tau = J.invert_map([s1, u.with_reliable(Q.reliable)])
    rest = [J.compose(k, tau) for k in g1.comps[2:]]
    rel = min(t.reliable for t in tau)
    second = (s2 * s2).with_reliable(rel)
    return JetMap([s1.with_reliable(rel), second] + rest)


# -- branches of a Morse Jacobian ---------------------------------------------

def _rational_sqrt(x: mpq):
    from gmpy2 import is_square, isqrt
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    if is_square(num) and is_square(den):
        return mpq(isqrt(num), isqrt(den))
    return None


def _branch_directions(lam: Jet):
    """Projective roots [x:y] of the quadratic part of an indefinite Morse function."""
    a = lam.checked_coeff((2, 0))
    b = lam.checked_coeff((1, 1))
    c = lam.checked_coeff((0, 2))
    disc = b * b - 4 * a * c
    if disc <= 0:
        raise ValueError("not an indefinite Morse function")
    root = _rational_sqrt(disc)
    if c == 0:
        return [("graph", -a / b), ("vertical", mpq(0))]
    if root is None:
        raise InconclusiveError("branch tangents of the singular set are irrational", None)
    return [("graph", (-b + root) / (2 * c)), ("graph", (-b - root) / (2 * c))]


def _solve_branch(lam: Jet, kind: str, slope: mpq):
    """Formal parametrization of one branch of {lam = 0} as a pair of univariate jets."""
    N = lam.order
    s = Jet.variable(0, 1, N)
    if kind == "vertical":
        # swap roles: s1 = X(s2); reuse the graph solver on the swapped function
        swapped = Jet._raw(2, N, {(e[1], e[0]): v for e, v in lam.terms.items()}, lam.reliable)
        x, y = _solve_branch(swapped, "graph", slope)
        return y, x
    b = lam.checked_coeff((1, 1))
    c = lam.checked_coeff((0, 2))
    kappa = b + 2 * c * slope
    Y = J.scale(slope, s)
    for d in range(2, N + 1):
        R = J.compose(lam, [s, Y])
        if d + 1 > R.reliable:
            break
        r = R.coeff((d + 1,))
        if r:
            Y = Y - Jet._raw(1, N, {(d,): r / kappa}, N)
    R = J.compose(lam, [s, Y])
    rel = min(R.reliable - 1, lam.reliable - 1)
    return s, Y.with_reliable(rel)


def branch_vanishing(lam: Jet, h: Jet, eta: VectorFieldJet | None = None, times: int = 3):
    """For each branch of {lam = 0}, does eta^times h vanish identically along it?

    Branches are ordered by increasing |slope| of the tangent, the vertical
    branch last.  Raises InconclusiveError when a branch is irrational or the
    restriction is known through fewer than 3 degrees.
    """
    if kclass_of_lambda(lam).tag is not KTag.MORSE_INDEFINITE:
        raise ValueError("branch_vanishing needs an indefinite Morse Jacobian")
    eta = eta or VectorFieldJet.coordinate(1, 2, lam.order)
    target = eta.power_apply(h, times)
    dirs = _branch_directions(lam)
    dirs.sort(key=lambda d: (d[0] == "vertical", abs(d[1]), d[1]))
    out = []
    for kind, slope in dirs:
        x, y = _solve_branch(lam, kind, slope)
        rest = J.compose(target, [x, y])
        if rest.reliable < 3:
            raise InconclusiveError("restriction to a branch known through fewer than 3 degrees",
                                    rest.reliable)
        out.append(all(sum(e) > rest.reliable for e in rest.terms))
    return tuple(out)


# -- double points over a cusp base -------------------------------------------

def _divided_difference(phi: Jet) -> Jet:
    """(phi(s1, s) - phi(s1, s')) / (s - s') as a jet in (s1, s, s')."""
    terms = {}
    for (i, j), c in phi.terms.items():
        for p in range(j):
            e = (i, p, j - 1 - p)
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
    return Jet._raw(3, phi.order, terms, phi.reliable - 1)


def _form_verdict(form):
    """Classify a binary form by its real projective roots.

    ``form`` lists the coefficients of s^k s'^(d-k), k = 0..d.  Returns
    (True, why) when the form is definite, (False, why) when it changes sign
    in a direction off the diagonal s = s', (None, why) otherwise.
    """
    import sympy

    form = [mpq(c) for c in form]
    if not any(form):
        return None, "lowest form vanishes"
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(form)], x)
    inf_mult = 0
    for c in reversed(form):
        if c:
            break
        inf_mult += 1
    if inf_mult % 2:
        return False, "sign change in the direction s' = 0"
    if poly.degree() <= 0:
        return (True, "definite") if inf_mult == 0 else (None, "even root at s' = 0")
    odd_off = False
    other = False
    for factor, mult in poly.sqf_list()[1]:
        for r in sympy.real_roots(factor):
            if r == 1:
                other = True
            elif mult % 2:
                odd_off = True
            else:
                other = True
    if odd_off:
        return False, "sign change off the diagonal"
    if other or inf_mult:
        return None, "degenerate lowest form"
    return True, "definite"


def double_point_form(g: JetMap):
    """Lowest form of the double-point function of a prepared germ over a cusp base.

    With s1 = S(s, s') solving (phi2(s1,s) - phi2(s1,s'))/(s - s') = 0, the
    function G = (phi3(S,s) - phi3(S,s')) / (s - s')^3 vanishes at a pair
    (s, s') with s != s' exactly at double points.  Returns its lowest
    homogeneous part as coefficients of s^k s'^(d-k).
    """
    N = g.order
    D = _divided_difference(g[1])
    kappa = D.coeff((1, 0, 0))
    if not kappa:
        raise ValueError("base is not a cusp")
    s = Jet.variable(0, 2, N)
    sp = Jet.variable(1, 2, N)
    S = Jet.zero(2, N)
    for _ in range(N):
        S = S - J.scale(1 / kappa, J.compose(D, [S, s, sp]))
    E = J.compose(_divided_difference(g[2]), [S, s, sp])
    diff = s - sp
    G = J.divide(E, diff * diff)
    d = G.reliable_valuation()
    if d is None:
        raise InconclusiveError("double-point function vanishes through its reliable order", G.reliable)
    return [G.coeff((k, d - k)) for k in range(d + 1)]


def folded_pleat_parameter(f: JetMap):
    """Fit c when f is literally (t1, t2^3 + t1 t2, a U2 + c' C) with the catalog U2 and C.

    Returns c'/a or None when f does not have that shape.  Diagnostic only.
    """
    if f.n != 2 or f.m != 3:
        return None
    N = f.order
    t1, t2 = Jet.variable(0, 2, N), Jet.variable(1, 2, N)
    if f[0] != t1 or f[1] != t2 ** 3 + t1 * t2:
        return None
    U2 = J.scale(mpq(3, 5), t2 ** 5) + J.scale(mpq(1, 3), t1 * t2 ** 3)
    C = J.scale(mpq(1, 2), t2 ** 6) + J.scale(mpq(3, 4), t1 * t2 ** 4) + J.scale(mpq(1, 3), t1 ** 2 * t2 ** 2)
    a = f[2].coeff((0, 5)) * mpq(5, 3)
    c = f[2].coeff((0, 6)) * 2
    if not a or f[2] != J.scale(a, U2) + J.scale(c, C):
        return None
    return c / a


# -- classifiers --------------------------------------------------------------

def _kclass_entry(cert, lam, expected=None):
    K = kclass_of_lambda(lam)
    vals = dict(value=lam.value_at_zero(), d1=lam.checked_coeff((1, 0)), d2=lam.checked_coeff((0, 1)),
                c20=lam.coeff((2, 0)), c11=lam.coeff((1, 1)), c02=lam.coeff((0, 2)))
    cert.add("kclass", "contact class of the Jacobian at 0", "kclass",
             expected=K.tag.value, **vals)
    if K.tag in (KTag.MORSE_DEFINITE, KTag.MORSE_INDEFINITE, KTag.DEGENERATE):
        for key in ("c20", "c11", "c02"):
            lam.checked_coeff({"c20": (2, 0), "c11": (1, 1), "c02": (0, 2)}[key])
    return K


def _lambda_order(cert, lam, cap=4):
    r, vals = _frame_order(lam, cap)
    cert.add("ord_lambda", "vanishing order of the Jacobian along the kernel field", "order",
             values=vals, expected=r)
    return r


def _base_tag(K, r):
    if K.tag is KTag.REGULAR and r == 1:
        return Tag.FOLD
    if K.tag is KTag.REGULAR and r == 2:
        return Tag.WHITNEY_CUSP
    if K.tag is KTag.REGULAR and r == 3:
        return Tag.SWALLOWTAIL_BASE
    if K.tag is KTag.MORSE_INDEFINITE and r == 2:
        return Tag.BEAK_TO_BEAK
    if K.tag is KTag.MORSE_DEFINITE:
        return Tag.LIPS_BASE
    return None


def _run(fn, cert, **kw):
    try:
        tag, extras = fn(cert)
        return SingularityClass(tag, cert, extras=extras, **kw)
    except _Unrecognized as exc:
        return SingularityClass(Tag.UNRECOGNIZED, cert, detail=exc.detail, **kw)
    except InconclusiveError as exc:
        return SingularityClass(Tag.INCONCLUSIVE, cert, detail=exc.reason, order=exc.order, **kw)


def classify_base(g: JetMap) -> SingularityClass:
    """Plane-to-plane germs: immersion, fold, cusp, beak-to-beak, swallowtail and lips bases."""
    if g.n != 2 or g.m != 2:
        raise PreconditionError("classify_base expects a germ (R^2,0) -> (R^2,0)")
    cert = Certificate()
    k = corank(g)
    if k == 0:
        cert.add("corank", "differential at 0 has full rank", "equals", value=0, expected=0)
        return SingularityClass(Tag.IMMERSION, cert)
    if k > 1:
        raise CorankError(k)
    frame = prepare(g).germ
    lam = J.derive(frame[1], 1)

    def decide(cert):
        K = _kclass_entry(cert, lam)
        r = _lambda_order(cert, lam)
        tag = _base_tag(K, r)
        if tag is None:
            raise _Unrecognized(f"Jacobian of contact class {K.tag.value} with kernel order {r}")
        return tag, {}

    return _run(decide, cert, frame=frame)


def classify_frontal(f: JetMap, fd: FrontalData | None = None) -> SingularityClass:
    """Frontal surfaces in R^m, m >= 3, of corank 1."""
    if f.n != 2:
        raise PreconditionError("recognition is implemented for surfaces (n = 2) only")
    if f.m < 3:
        raise PreconditionError("classify_frontal expects m >= 3; use classify_base")
    fd = fd or frontality(f)
    if not fd.is_proper:
        raise NotFrontalError(fd)
    k = corank(f)
    if k != 1:
        raise CorankError(k)
    g = prepare(adapt_target(f, fd)).germ
    m = g.m
    lam = J.derive(g[1], 1)
    cert = Certificate()
    comps = list(range(2, m))

    def label(k):
        return f"f{k + 1}"

    def decide(cert):
        K = _kclass_entry(cert, lam)
        r = _lambda_order(cert, lam)
        if K.tag is KTag.REGULAR and r == 1:
            return _fold_branch(cert, g)
        if K.tag is KTag.REGULAR and r == 2:
            if m == 3:
                o, vals = _frame_order(g[2], 5)
                cert.add("ord_f3", "vanishing order of f3 along the kernel field", "order",
                         values=vals, expected=o)
                if o == 4:
                    return Tag.SWALLOWTAIL, {}
                if o == 5:
                    return _folded_pleat(cert, g)
                raise _Unrecognized(f"cusp base with ord(f3) {_fmt_order(o, 5)}")
            return _open_branch(cert, g, Tag.OPEN_SWALLOWTAIL)
        if K.tag is KTag.REGULAR and r == 3:
            if m == 3:
                o, vals = _frame_order(g[2], 5)
                cert.add("ord_f3", "vanishing order of f3 along the kernel field", "order",
                         values=vals, expected=o)
                if o == 5:
                    return Tag.CUSPIDAL_SWALLOWTAIL, {}
                raise _Unrecognized(f"swallowtail base with ord(f3) {_fmt_order(o, 5)}")
            raise _Unrecognized("swallowtail base in codimension > 1")
        if K.tag is KTag.MORSE_INDEFINITE and r == 2:
            if m == 3:
                o, vals = _frame_order(g[2], 5)
                cert.add("ord_f3", "vanishing order of f3 along the kernel field", "order",
                         values=vals, expected=o)
                if o == 4:
                    return Tag.MOND, {}
                if o == 5:
                    return _shcherbak(cert, g, lam)
                raise _Unrecognized(f"beak-to-beak base with ord(f3) {_fmt_order(o, 5)}")
            return _open_branch(cert, g, Tag.OPEN_MOND)
        if K.tag is KTag.MORSE_DEFINITE:
            if m == 3:
                o, vals = _frame_order(g[2], 4)
                cert.add("ord_f3", "vanishing order of f3 along the kernel field", "order",
                         values=vals, expected=o)
                if o == 4:
                    return Tag.CUSPIDAL_LIPS, {}
                raise _Unrecognized(f"lips base with ord(f3) {_fmt_order(o, 4)}")
            raise _Unrecognized("lips base in codimension > 1")
        raise _Unrecognized(f"Jacobian of contact class {K.tag.value} with kernel order {_fmt_order(r, 4)}")

    return _run(decide, cert, frame=g, frontal=fd)


def _fmt_order(o, cap):
    return f"> {cap}" if o is None else f"= {o}"


def _fold_branch(cert, g):
    m = g.m
    gn = normalize_fold(g)
    c3 = [_d2(gn[k], 3) for k in range(2, m)]
    if cert.add("eta3", "(eta^3 f_k)(0) for k >= 3", "some_nonzero", values=c3):
        # lower derivatives vanish in adapted coordinates; record them anyway
        for k in range(2, m):
            if c3[k - 2]:
                low = [_d2(gn[k], j) for j in range(4)]
                cert.add(f"ord_f{k + 1}", f"vanishing order of f{k + 1} along the kernel field",
                         "order", values=low, expected=3)
                break
        return (Tag.CUSPIDAL_EDGE if m == 3 else Tag.EMBEDDED_CUSPIDAL_EDGE), {}
    lam = J.derive(gn[1], 1)
    dlam = FormJet.d(lam)
    rows = []
    for k in range(2, m):
        e3 = J.derive(J.derive(J.derive(gn[k], 1), 1), 1)
        w = wedge_coefficient(dlam, FormJet.d(e3))
        alpha = w.value_at_zero()
        beta = _d2(gn[k], 5)
        rows.append([alpha, beta])
    if m == 3:
        if cert.add("wedge", "(d lambda ^ d(eta^3 f3))(0) != 0", "nonzero", value=rows[0][0]):
            return Tag.FOLDED_UMBRELLA, {}
        raise _Unrecognized("fold base with eta^3 f3 = 0 and degenerate wedge condition")
    if cert.add("rank_ofu", "rank of rows ((d lambda ^ d(eta^3 f_k))(0), (eta^5 f_k)(0)) is 2",
                "rank2", rows=rows):
        return Tag.OPEN_FOLDED_UMBRELLA, {}
    raise _Unrecognized("fold base: rank condition on (wedge, eta^5) rows fails")


def _open_branch(cert, g, tag):
    m = g.m
    c3 = [_d2(g[k], 3) for k in range(2, m)]
    if not cert.add("eta3_zero", "(eta^3 f_k)(0) = 0 for all k >= 3", "all_zero", values=c3):
        raise _Unrecognized("some (eta^3 f_k)(0) is nonzero")
    rows = [[_d2(g[k], 4), _d2(g[k], 5)] for k in range(2, m)]
    if cert.add("rank_open", "rank of rows ((eta^4 f_k)(0), (eta^5 f_k)(0)) is 2", "rank2", rows=rows):
        return tag, {}
    raise _Unrecognized("rank condition on (eta^4, eta^5) rows fails")


def _folded_pleat(cert, g):
    form = double_point_form(g)
    verdict, why = _form_verdict(form)
    if verdict is None:
        cert.note(f"injectivity undecided: {why}")
        raise InconclusiveError(f"injectivity not certified ({why})", None)
    cert.add("injective", "double-point function has no zeros off the diagonal near 0",
             "injective", form=form, expected=True)
    if not verdict:
        raise _Unrecognized(f"not injective: {why}")
    return Tag.FOLDED_PLEAT_CLASS, {}


def _shcherbak(cert, g, lam):
    N = g.order
    h32 = J.divide(J.derive(g[2], 1), lam)
    d3 = lambda h: J.derive(J.derive(J.derive(h, 1), 1), 1)
    E = d3(g[2]) - h32 * d3(g[1])
    flags = branch_vanishing(lam, E, VectorFieldJet.coordinate(1, 2, N), times=0)
    if cert.add("branch", "eta^3 f3 in coordinates adapted at each point vanishes along a branch "
                "of the singular set", "some_true", values=list(flags)):
        return Tag.SHCHERBAK, {}
    raise _Unrecognized("no branch of the singular set carries a higher-order cuspidal edge")


def recognize(f: JetMap) -> SingularityClass:
    """Full pipeline: frontality, corank, then the base or frontal classifier."""
    if f.m == f.n:
        if f.n != 2:
            if corank(f) == 0:
                cert = Certificate()
                cert.add("corank", "differential at 0 has full rank", "equals", value=0, expected=0)
                return SingularityClass(Tag.IMMERSION, cert)
            raise PreconditionError("only plane-to-plane germs are classified when m = n")
        return classify_base(f)
    fd = frontality(f)
    if not fd.is_proper:
        raise NotFrontalError(fd)
    k = corank(f)
    if k == 0:
        cert = Certificate()
        cert.add("corank", "differential at 0 has full rank", "equals", value=0, expected=0)
        return SingularityClass(Tag.IMMERSION, cert, frontal=fd)
    if f.n != 2:
        raise PreconditionError("recognition is implemented for surfaces (n = 2) only")
    if k > 1:
        raise CorankError(k)
    return classify_frontal(f, fd)
