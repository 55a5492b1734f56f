"""Acceptance criteria 1-9; each test prints one PASS/FAIL line (visible with -s or -v)."""

import random

import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import T, diffeos, from_sympy, jets
from frontalrec import jets as J
from frontalrec.errors import NotFrontalError
from frontalrec.frontal import FrontalStatus, frontality, is_front
from frontalrec.gallery import (CATALOG, TANGENT_TABLE, curve_of_type, mond_surface, normal_form,
                                random_a_perturbation, random_curve, tangent_surface)
from frontalrec.germs import JetMap, minor
from frontalrec.jets import Jet
from frontalrec.openings import is_versal_opening, ramification_jets
from frontalrec.recognize import Tag, recognize

t1, t2 = T[0], T[1]
PERTURBATIONS = 50
RANDOM_CURVES = 10
PROPERTY_CASES = 1000


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def _label(tag, kw):
    return tag.value + "".join(f"[{k}={v}]" for k, v in kw.items())


def test_1_normal_form_catalog(report):
    wrong = [(_label(tag, kw), recognize(normal_form(tag, **kw)).tag.value) for tag, kw in CATALOG
             if recognize(normal_form(tag, **kw)).tag is not tag]
    report(1, f"{len(CATALOG)} catalog normal forms classify to their own class", not wrong, str(wrong or ""))


def test_2_perturbation_invariance(report):
    bad = []
    for tag, kw in CATALOG:
        f = normal_form(tag, **kw)
        for seed in range(PERTURBATIONS):
            got = recognize(random_a_perturbation(f, seed, degree=4)).tag
            if got is not tag:
                bad.append((_label(tag, kw), seed, got.value))
    total = PERTURBATIONS * len(CATALOG)
    report(2, f"{total} seeded perturbations tau.NF.sigma agree with the class", not bad,
           f"{total - len(bad)}/{total}" + (f"; first failures {bad[:3]}" if bad else ""))


def test_3_tangent_surface_table(report):
    bad = []
    for L, tag in TANGENT_TABLE:
        rng = random.Random(sum(L) * 1000 + len(L))
        curves = [curve_of_type(L)] + [random_curve(L, rng) for _ in range(RANDOM_CURVES)]
        for gamma in curves:
            got = recognize(tangent_surface(gamma)).tag
            if got is not tag:
                bad.append((L, got.value))
    total = len(TANGENT_TABLE) * (RANDOM_CURVES + 1)
    report(3, "tangent surfaces classify by curve type", not bad, f"{total - len(bad)}/{total}")


def test_4_mond_surface(report):
    u, t = t1, t2
    f = mond_surface()
    fd = frontality(f)
    P = lambda e: from_sympy(e, 2, 12)
    checks = [
        minor(f, (0, 1)) == P(6 * t * u),
        minor(f, (0, 2)) == P(12 * t**2 * u),
        minor(f, (1, 2)) == P(12 * t**4 * u),
        fd.lam == J.scale(6, P(t * u)),
        [fd.pluecker[I] for I in ((0, 1), (0, 2), (1, 2))] == [P(1), P(2 * t), P(2 * t**3)],
        J.divide(fd.lam, P(t * u)) == Jet.constant(6, 2),
        recognize(f).tag is Tag.MOND,
    ]
    report(4, "Mond surface minors 6tu, 12t^2u, 12t^4u; lambda = 6tu; Pluecker (1, 2t, 2t^3)", all(checks),
           f"{sum(checks)}/{len(checks)} checks")


def test_5_cone(report):
    cone = JetMap(from_sympy(e, 3, 12) for e in (t1**3, t1**2 * t2, t1 * t2**2, t2**3))
    degenerate = frontality(cone).status is FrontalStatus.DEGENERATE
    try:
        recognize(cone)
        refused = False
    except NotFrontalError:
        refused = True
    report(5, "cone germ is DegenerateJacobiIdeal and recognition is refused", degenerate and refused)


def test_6_ramification_and_versality(report):
    R = sp.Rational
    cusp = normal_form(Tag.WHITNEY_CUSP)
    Rm = ramification_jets(cusp)
    P = lambda e: from_sympy(e, 2, 12)
    U1, U2 = P(R(3, 4) * t2**4 + R(1, 2) * t1 * t2**2), P(R(3, 5) * t2**5 + R(1, 3) * t1 * t2**3)
    osw = is_versal_opening(normal_form(Tag.OPEN_SWALLOWTAIL), cusp)
    sw = is_versal_opening(normal_form(Tag.SWALLOWTAIL), cusp)
    checks = [Rm.contains(U1), Rm.contains(U2), not Rm.contains(P(t2)), osw.versal, not sw.versal,
              osw.degree >= 8, sw.degree >= 8]
    report(6, f"U1, U2 ramify and t2 does not; OSW versal, SW not (N' = {osw.degree})", all(checks),
           f"{sum(checks)}/{len(checks)} checks")


def test_7_front_split(report):
    fronts = [Tag.CUSPIDAL_EDGE, Tag.SWALLOWTAIL, Tag.MOND, Tag.CUSPIDAL_LIPS]
    non_fronts = [Tag.FOLDED_UMBRELLA, Tag.OPEN_FOLDED_UMBRELLA, Tag.OPEN_SWALLOWTAIL, Tag.OPEN_MOND,
                  Tag.SHCHERBAK]
    def front(tag):
        f = normal_form(tag)
        return is_front(f, frontality(f))
    bad = [t.value for t in fronts if not front(t)] + [t.value for t in non_fronts if front(t)]
    report(7, "is_front true on CE, SW, MD, CL and false on FU, OFU, OSW, OMD, SB", not bad, str(bad or ""))


def test_8_truncation_honesty(report):
    out = {}
    for tag, kw in CATALOG:
        out[_label(tag, kw)] = (tag, recognize(normal_form(tag, order=5, **kw)).tag)
    wrong = [k for k, (tag, got) in out.items() if got not in (tag, Tag.INCONCLUSIVE)]
    inconclusive = [k for k, (tag, got) in out.items() if got is Tag.INCONCLUSIVE]
    report(8, "at order 5 every catalog form gives its class or Inconclusive", not wrong,
           f"wrong: {wrong}; inconclusive: {inconclusive}")


# -- criterion 9: jet-engine properties, 1000 cases each -------------------------



@settings(max_examples=PROPERTY_CASES, database=None)
@given(jets(), jets(), jets())
def _ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a and a + b == b + a


@settings(max_examples=PROPERTY_CASES, database=None)
@given(diffeos(order=4))
def _compose_invert(sigma):
    tau = J.invert_map(sigma)
    ident = [Jet.variable(i, 2, 4) for i in range(2)]
    assert [J.compose(s, tau) for s in sigma] == ident
    assert [J.compose(s, sigma) for s in tau] == ident


@settings(max_examples=PROPERTY_CASES, database=None)
@given(jets(), jets(max_terms=3).filter(lambda d: not d.is_zero()))
def _divide_mul(q, d):
    back = J.divide(q * d, d)
    assert back.reliable == q.order - d.valuation()
    assert back.equal_through(q, back.reliable)


@settings(max_examples=PROPERTY_CASES, database=None)
@given(jets(), jets())
def _leibniz(a, b):
    for i in (0, 1):
        lhs = J.derive(a * b, i)
        assert lhs.equal_through(J.derive(a, i) * b + a * J.derive(b, i), lhs.reliable)
        assert J.derive(a + b, i) == J.derive(a, i) + J.derive(b, i)


PROPERTIES = {"ring axioms": _ring_axioms, "compose/invert round trip": _compose_invert,
              "divide/mul round trip": _divide_mul, "Leibniz rule": _leibniz}


@pytest.mark.parametrize("name", list(PROPERTIES))
def test_9_jet_properties(name, report):
    try:
        PROPERTIES[name]()
        ok, detail = True, f"{PROPERTY_CASES} cases"
    except AssertionError as exc:
        ok, detail = False, str(exc).splitlines()[0] if str(exc) else "counterexample found"
    report(9, f"jet engine: {name}", ok, detail)
