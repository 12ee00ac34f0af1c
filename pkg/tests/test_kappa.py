from fractions import Fraction

import pytest

from borcherds_cm.arith import FactoredLog, ZERO_LOG
from borcherds_cm.kappa import (
    KAPPA_ZERO,
    KappaValue,
    UnsupportedLatticeError,
    kappa_at,
    kappa_positive,
)
from borcherds_cm.lattice import enumerate_dual_cosets, make_ideal_lattice
from borcherds_cm.locwhit import eisenstein_deriv_coeff
from borcherds_cm.quadfield import make_field


def _mu(lat, label):
    return next(c for c in enumerate_dual_cosets(lat) if c.label == label)


def test_kappa_value_algebra():
    a = KappaValue(FactoredLog({7: 1}), Fraction(1, 2))
    b = KappaValue(FactoredLog({7: -1}), Fraction(1, 2))
    s = a + b
    assert s.log_part == ZERO_LOG and s.kzero_multiple == 1
    assert (2 * a).log_part == FactoredLog({7: 2})
    assert (-a + a).is_zero()
    assert KAPPA_ZERO.is_zero()
    assert "k0(0)" in s.render()


def test_kappa_d7_reference_values():
    fld = make_field(7)
    lat = make_ideal_lattice(fld, "unit")
    mu0 = _mu(lat, 0)
    assert kappa_positive(fld, lat, mu0, 1).log_part == FactoredLog({7: -2})
    assert kappa_positive(fld, lat, mu0, 2).log_part == FactoredLog({7: -4})
    assert kappa_positive(fld, lat, mu0, 3).log_part == FactoredLog({3: -4})
    assert kappa_positive(fld, lat, mu0, 4).log_part == FactoredLog({7: -6})


def test_kappa_fractional_off_coset_is_zero():
    fld = make_field(7)
    lat = make_ideal_lattice(fld, "unit")
    mu0 = _mu(lat, 0)
    assert kappa_positive(fld, lat, mu0, Fraction(1, 7)).is_zero()
    assert kappa_positive(fld, lat, mu0, Fraction(2, 7)).is_zero()
    # off the Q(mu) + Z support at a ramified prime
    mu1 = _mu(lat, 1)
    assert kappa_positive(fld, lat, mu1, Fraction(1, 7)).is_zero()


def test_kappa_at_zero_and_negative():
    fld = make_field(7)
    lat = make_ideal_lattice(fld, "unit")
    mu0 = _mu(lat, 0)
    mu1 = _mu(lat, 1)
    k = kappa_at(fld, lat, mu0, 0)
    assert k.log_part == ZERO_LOG and k.kzero_multiple == 1
    assert kappa_at(fld, lat, mu1, 0).is_zero()
    assert kappa_at(fld, lat, mu0, -1).is_zero()
    assert kappa_at(fld, lat, mu0, Fraction(-1, 7)).is_zero()


def test_kappa_norm_twist_nonprincipal_ideal():
    # d = 15, norm-2 prime ideal: the genus twist chi_3(2) = -1 changes the
    # eta factors; the oracle fixes the value at -log 3
    fld = make_field(15)
    lat = make_ideal_lattice(fld, "prime:2")
    mu6 = _mu(lat, 6)
    t = Fraction(1, 5)
    val = kappa_positive(fld, lat, mu6, t)
    assert val.log_part == FactoredLog({3: -1})
    oracle = eisenstein_deriv_coeff(fld, lat, mu6, t)
    assert oracle.flag is None
    assert oracle.value == val.log_part


def test_kappa_oracle_agreement_small_sweep():
    for d in (7, 15):
        fld = make_field(d)
        ideals = ["unit"] + (["prime:2"] if fld.h > 1 else [])
        for ideal in ideals:
            lat = make_ideal_lattice(fld, ideal)
            cosets = enumerate_dual_cosets(lat)
            for a in range(1, 4 * d + 1):
                t = Fraction(a, d)
                for mu in cosets:
                    formula = kappa_positive(fld, lat, mu, t)
                    oracle = eisenstein_deriv_coeff(fld, lat, mu, t)
                    assert oracle.flag is None
                    assert formula.log_part == oracle.value, (d, ideal, mu.label, t)


def test_kappa_requires_positive_t():
    fld = make_field(7)
    lat = make_ideal_lattice(fld, "unit")
    mu0 = _mu(lat, 0)
    with pytest.raises(ValueError):
        kappa_positive(fld, lat, mu0, 0)


def test_kappa_rejects_non_ideal_lattice():
    fld = make_field(7)
    lat = make_ideal_lattice(fld, "unit")
    mu0 = _mu(lat, 0)

    class NotAnIdeal:
        is_integral_ideal = False

    with pytest.raises(UnsupportedLatticeError):
        kappa_positive(fld, NotAnIdeal(), mu0, 1)
