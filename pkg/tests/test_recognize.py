import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import T, from_sympy, units
from frontalrec.errors import CorankError, InconclusiveError, NotFrontalError, PreconditionError
from frontalrec.gallery import CATALOG, normal_form, random_a_perturbation
from frontalrec.germs import JetMap, VectorFieldJet
from frontalrec.jets import Jet
from frontalrec.recognize import (CHECKS, Tag, branch_vanishing, classify_base, classify_frontal,
                                  double_point_form, folded_pleat_parameter, recognize, vanishing_order)

t1, t2 = T[0], T[1]
R = sp.Rational
ETA = VectorFieldJet.coordinate(1, 2)


def P(e, order=12):
    return from_sympy(e, 2, order)


def F(*exprs, order=12):
    return JetMap(P(e, order) for e in exprs)


@pytest.mark.parametrize("h, expect", [(3 * t2**2 + t1, 2), (R(3, 4) * t2**4 + R(1, 2) * t1 * t2**2, 4),
                                       (1 + t1, 0)])
def test_vanishing_order_examples(h, expect):
    assert vanishing_order(P(h), ETA) == expect


def test_vanishing_order_cap_and_reliability():
    with pytest.raises(InconclusiveError):
        vanishing_order(P(t2**9), ETA)  # beyond the cap of 7
    with pytest.raises(InconclusiveError):
        vanishing_order(P(t2**5, 4), ETA)  # order 4 cannot see t2^5


@pytest.mark.parametrize("exprs, tag", [((t1, t2**2), Tag.FOLD), ((t1, t2**3 + t1 * t2), Tag.WHITNEY_CUSP),
                                        ((t1, t2**3 + t1 * t2**2), Tag.BEAK_TO_BEAK),
                                        ((t1, t2), Tag.IMMERSION)])
def test_classify_base_examples(exprs, tag):
    assert classify_base(F(*exprs)).tag is tag


@pytest.mark.parametrize("exprs, tag", [
    ((t1, t2**2, t2**3), Tag.CUSPIDAL_EDGE),
    ((t1, t2**3 + t1 * t2, R(3, 4) * t2**4 + R(1, 2) * t1 * t2**2), Tag.SWALLOWTAIL),
    ((t1, t2**3 + t1 * t2**2, R(3, 5) * t2**5 + R(1, 2) * t1 * t2**4), Tag.SHCHERBAK),
    ((t1, t2**2, t1 * t2**3, t2**5, 0), Tag.OPEN_FOLDED_UMBRELLA),
    ((t1, t2**3 + t1**2 * t2, R(3, 4) * t2**4 + R(1, 2) * t1**2 * t2**2), Tag.CUSPIDAL_LIPS),
    ((t1, t2**2, t2**3, t2**3), Tag.EMBEDDED_CUSPIDAL_EDGE),
])
def test_classify_frontal_examples(exprs, tag):
    res = classify_frontal(F(*exprs))
    assert res.tag is tag
    assert res.certificate.replay()


@pytest.mark.parametrize("exprs, detail", [
    ((t1, t2**2, 0), "fold base"),
    ((t1, t2**2, t2**5), "fold base"),
    ((t1, t2**3 + t1 * t2, 0), "cusp base"),
    ((t1, t2**3 + t1 * t2**2, 0), "beak-to-beak base"),
    ((t1, t2**4 + t1 * t2, 0), "swallowtail base"),
])
def test_unrecognized_names_the_failed_criterion(exprs, detail):
    res = recognize(F(*exprs))
    assert res.tag is Tag.UNRECOGNIZED
    assert res.detail.startswith(detail)
    assert res.certificate.replay()


def test_preconditions():
    with pytest.raises(NotFrontalError):
        recognize(F(t1**2, t2**2, t1 * t2))
    with pytest.raises(CorankError):
        recognize(F(t1**2, t2**2, 0))
    cone = JetMap(from_sympy(e, 3, 12) for e in (t1**3, t1**2 * t2, t1 * t2**2, t2**3))
    with pytest.raises(NotFrontalError) as exc:
        recognize(cone)
    assert exc.value.frontal_data.status.value == "DegenerateJacobiIdeal"
    with pytest.raises(PreconditionError):
        classify_base(F(t1, t2, 0))


def test_branch_vanishing_examples():
    lam = P(t2 * (3 * t2 + 2 * t1))
    assert branch_vanishing(lam, P(R(3, 5) * t2**5 + R(1, 2) * t1 * t2**4), ETA) == (True, False)
    assert branch_vanishing(P(t1 * t2), Jet.zero(2), ETA) == (True, True)
    assert branch_vanishing(P(t1 * t2), P(t2**4), ETA) == (True, False)


def test_branch_vanishing_irrational_is_inconclusive():
    with pytest.raises(InconclusiveError):
        branch_vanishing(P(t2**2 - 2 * t1**2), P(t2**4), ETA)


def test_branch_vanishing_rejects_non_morse():
    with pytest.raises(ValueError):
        branch_vanishing(P(t1), P(t2**4), ETA)


def test_folded_pleat_double_points():
    for c in (0, 1):
        f = normal_form(Tag.FOLDED_PLEAT_CLASS, c=c)
        assert folded_pleat_parameter(f) == c
        form = double_point_form(f)
        assert any(form)


@pytest.mark.parametrize("tag, kw", CATALOG)
def test_catalog_certificates_replay(tag, kw):
    res = recognize(normal_form(tag, **kw))
    assert res.tag is tag
    assert len(res.certificate) > 0
    assert res.certificate.replay()
    for e in res.certificate:
        assert e.check in CHECKS


def test_tampered_certificate_fails_replay():
    res = recognize(normal_form(Tag.CUSPIDAL_EDGE))
    entry = res.certificate.entries[-1]
    entry.holds = not entry.holds
    assert not res.certificate.replay()


@pytest.mark.parametrize("tag, kw", CATALOG)
def test_verdict_stable_under_truncation(tag, kw):
    res = recognize(normal_form(tag, order=5, **kw))
    assert res.tag in (tag, Tag.INCONCLUSIVE)


FRONTAL_CASES = [(tag, kw) for tag, kw in CATALOG if normal_form(tag, **kw).m >= 3]


@settings(max_examples=30)
@given(st.sampled_from(FRONTAL_CASES), units(order=12))
def test_invariant_under_unit_multiples(case, u):
    # scaling the source direction t2 by a unit rescales eta and lambda by units;
    # scaling the target by a constant is linear; neither may change the verdict
    tag, kw = case
    f = normal_form(tag, **kw)
    c = u.value_at_zero()
    t1j, t2j = Jet.variable(0, 2), Jet.variable(1, 2)
    g = JetMap([f[0]] + [c * x for x in f.comps[1:]]).compose_source([t1j, t2j * u * (1 / c)])
    assert recognize(g).tag is tag


@settings(max_examples=20)
@given(st.sampled_from(CATALOG), st.integers(0, 10**6))
def test_perturbation_invariance_sample(case, seed):
    tag, kw = case
    f = random_a_perturbation(normal_form(tag, order=10, **kw), seed)
    assert recognize(f).tag is tag
