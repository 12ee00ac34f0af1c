import pytest
from mpmath import mp

from borcherds_cm.gzoracle import (
    GZResult,
    gz_product,
    gz_support_check,
    j_value,
)


def test_j_value_d3_is_zero():
    with mp.workdps(60):
        v = j_value((1, 1, 1), 3, 40)
        assert abs(v) < mp.mpf("1e-30")


def test_j_value_d7():
    with mp.workdps(60):
        v = j_value((1, 1, 2), 7, 40)
        assert abs(v - (-3375)) < mp.mpf("1e-25")


def test_j_value_d43():
    with mp.workdps(80):
        v = j_value((1, 1, 11), 43, 60)
        assert abs(v - (-884736000)) < mp.mpf("1e-20")


def test_j_value_domain():
    with pytest.raises(ValueError):
        j_value((1, 1, 2), 11, 40)  # discriminant mismatch
    with pytest.raises(ValueError):
        j_value((1, 1, 2), 7, 10)  # prec too small


def test_gz_3_7():
    r = gz_product(3, 7)
    assert r.product == 3375
    assert r.factorization == ((3, 3), (5, 3))
    assert r.margin < 1e-20
    assert r.factored_string() == "3^3 * 5^3"


def test_gz_7_43():
    r = gz_product(7, 43)
    assert abs(r.product) == 3**6 * 5**3 * 7 * 19 * 73
    assert r.product == 884732625  # j(tau_7) - j(tau_43) > 0
    assert r.factorization == ((3, 6), (5, 3), (7, 1), (19, 1), (73, 1))
    assert r.margin < 1e-20


def test_gz_symmetry_sign():
    a = gz_product(3, 7)
    b = gz_product(7, 3)
    assert b.product == -a.product  # h1 = h2 = 1 flips the single factor


def test_gz_doubling_invariance():
    a = gz_product(3, 7)
    b = gz_product(3, 7, prec=2 * a.precision_used)
    assert a.product == b.product


def test_gz_rejects_non_coprime():
    with pytest.raises(ValueError):
        gz_product(7, 7)
    with pytest.raises(ValueError):
        gz_product(15, 35)


def test_gz_support_check_pass():
    ok, violations = gz_support_check(gz_product(3, 7))
    assert ok and not violations
    ok, violations = gz_support_check(gz_product(7, 43))
    assert ok and not violations


def test_gz_support_check_flags_split_prime():
    # 11 splits in Q(sqrt(-7)): -7 = 4 is a square mod 11
    fake = GZResult(
        d1=7,
        d2=43,
        product=11,
        factorization=((11, 1),),
        precision_used=50,
        margin=0.0,
    )
    ok, violations = gz_support_check(fake)
    assert not ok
    assert (11, "split") in violations


def test_gz_support_check_flags_large_prime():
    fake = GZResult(
        d1=3,
        d2=7,
        product=17,
        factorization=((17, 1),),
        precision_used=50,
        margin=0.0,
    )
    ok, violations = gz_support_check(fake)
    assert not ok
    assert any(v[1] in ("split", "too-large") for v in violations)
