"""Orbit avoidance certificates: parameters, construction, verification."""

import math
from fractions import Fraction

import pytest

from refinable.errors import InvalidLambda
from refinable.exactreal import field_make
from refinable.powermod import (
    ErdosCertificate,
    check_admissibility,
    dist_to_int,
    erdos_construct,
    erdos_params,
    erdos_verify,
    interval_distance_lower,
    orbit_distance_scan,
)


def test_dist_to_int_examples():
    assert dist_to_int(Fraction(1, 2)) == Fraction(1, 2)
    assert dist_to_int(Fraction(-1, 5)) == Fraction(1, 5)
    assert dist_to_int(7) == 0
    F = field_make(10, 2)
    d = dist_to_int(F.theta())  # sqrt(10) = 3.162...: distance 0.162...
    assert d == F.theta() - 3


def test_erdos_params_examples():
    assert erdos_params(2, 1) == (3, Fraction(1, 1440))
    assert erdos_params(3, 1) == (2, Fraction(1, 1215))
    assert erdos_params(10, 1) == (1, Fraction(9, 20000))
    with pytest.raises(InvalidLambda):
        erdos_params(1, 1)


def test_erdos_params_irrational_lower_bound():
    F = field_make(10, 2)
    g, c = erdos_params(F.theta(), 2)
    assert g == 2  # 10 >= 2(1 + 2*2) = 10, exact boundary case
    exact = (F.theta() - 1) ** 2 / (20 * 16 * F.theta() ** 3)
    assert c > 0 and F.rational(c) <= exact


def test_admissibility_check():
    adm = check_admissibility(2, 1, 3, Fraction(1, 1440))
    assert adm == {"base": True, "induction": True}
    bad = check_admissibility(2, 1, 3, Fraction(1, 4))
    assert not all(bad.values())


def test_base_interval_example():
    cert = erdos_construct(2, [0], 0)
    a, b = cert.intervals[0]
    # leftmost admissible start after the removed (-1/720, 1/720)
    assert a == Fraction(1, 720)
    # ell0 is a dyadic lower bound of sqrt(2*lambda*c) = sqrt(1/360)
    assert cert.ell0 ** 2 <= Fraction(1, 360)
    assert float(cert.ell0) == pytest.approx(math.sqrt(1 / 360), rel=1e-9)
    assert b - a == cert.ell0


def test_depth5_certificate_and_verify():
    cert = erdos_construct(2, [0], 5)
    assert cert.guaranteed_depth == 14
    rep = erdos_verify(cert, extra_n=14)
    assert rep.certified and rep.structure_ok
    assert rep.first_violation is None or rep.first_violation > 14
    # interval length law, exactly
    lam3 = 2 ** cert.g
    for (a0, b0), (a1, b1) in zip(cert.intervals, cert.intervals[1:]):
        assert (b1 - a1) * lam3 == (b0 - a0)


def test_irrational_lambda_certificate():
    F = field_make(10, 2)
    cert = erdos_construct(F.theta(), [0, Fraction(1, 2)], 3)
    rep = erdos_verify(cert, extra_n=20)
    assert rep.certified
    # endpoints are exact field elements; the length law is exact
    lamg = F.theta() ** cert.g
    for (a0, b0), (a1, b1) in zip(cert.intervals, cert.intervals[1:]):
        assert (b1 - a1) * lamg == (b0 - a0)


def test_serialization_roundtrip():
    F = field_make(10, 2)
    cert = erdos_construct(F.theta(), [0], 2)
    back = ErdosCertificate.from_json(cert.to_json())
    assert back.xi == cert.xi
    assert back.intervals == cert.intervals
    assert erdos_verify(back, extra_n=5).certified


def test_trivial_oracles_small():
    mn, fv = orbit_distance_scan(2, Fraction(1, 3), [0], Fraction(1, 3), 200)
    assert mn == Fraction(1, 3) and fv is None
    mn, fv = orbit_distance_scan(3, Fraction(1, 2), [0], Fraction(1, 2), 200)
    assert mn == Fraction(1, 2) and fv is None
    mn, fv = orbit_distance_scan(3, Fraction(1, 3), [0], Fraction(1, 1000), 10)
    assert fv == 1  # 3 * 1/3 = 1 is an integer


def test_interval_distance_lower():
    from refinable.exactreal import QQ

    a, b = QQ.rational(Fraction(1, 10)), QQ.rational(Fraction(2, 10))
    assert interval_distance_lower(a, b, Fraction(0)) == Fraction(1, 10)
    # interval straddling an integer: lower bound 0
    a2, b2 = QQ.rational(Fraction(9, 10)), QQ.rational(Fraction(11, 10))
    assert interval_distance_lower(a2, b2, Fraction(0)) == 0


def test_verify_detects_tampering():
    cert = erdos_construct(2, [0], 3)
    data = cert.to_jsonable()
    data["xi"] = ["1/2"]  # 2 * 1/2 hits an integer immediately
    bad = ErdosCertificate.from_jsonable(data)
    rep = erdos_verify(bad, extra_n=3)
    assert not rep.certified or rep.first_violation is not None


def test_construction_rejects_bad_lambda():
    with pytest.raises(InvalidLambda):
        erdos_construct(Fraction(1, 2), [0], 1)
