from fractions import Fraction

import pytest
from mpmath import mp

from borcherds_cm.arith import FactoredLog
from borcherds_cm.cmvalue import (
    c00_contraction,
    check_prime_support,
    contraction_coeffs,
    default_vol_kt,
    kappa_eta,
    log_psi_product,
    phi_average,
    transcendental_base,
)
from borcherds_cm.forms import FourierForm
from borcherds_cm.lattice import PosLattice, SplitLattice, make_ideal_lattice
from borcherds_cm.quadfield import kappa_zero_constant, make_field


def _instance(d=7, gram=(), ideal="unit", coeffs=None):
    fld = make_field(d)
    sl = SplitLattice(PosLattice(gram), make_ideal_lattice(fld, ideal))
    form = FourierForm(sl, coeffs or {(0, Fraction(-1)): Fraction(1)})
    return fld, sl, form


def test_desk_instance_phi():
    fld, sl, form = _instance()
    phi = phi_average(form, sl, fld)
    assert phi.value.log_part == FactoredLog({7: -4})
    assert phi.value.kzero_multiple == 0
    assert phi.vol_kt == 2
    # with vol(K_T) = 2/h and h = 1 the cycle sum equals the SO(U) integral
    assert phi.cycle_sum.log_part == phi.value.log_part


def test_desk_instance_report():
    fld, sl, form = _instance()
    report = log_psi_product(form, sl, fld)
    assert report.rational_part == FactoredLog({7: 2})
    assert report.kzero_coeff == 0
    assert report.c00 == 0
    assert report.degree == 2
    assert report.is_rational()
    assert report.rational_value() == 49
    ok, violations = check_prime_support(report, fld, form)
    assert ok and not violations


def test_constant_term_drives_transcendence():
    fld, sl, form = _instance(
        coeffs={(0, Fraction(-1)): Fraction(1), (0, Fraction(0)): Fraction(3)}
    )
    report = log_psi_product(form, sl, fld)
    assert report.c00 == 3
    assert report.kzero_coeff == -3
    assert report.transcendental_exponent == 3
    assert not report.is_rational()
    # at default vol(K_T) the exponent is h * c00
    assert report.transcendental_exponent == fld.h * report.c00


def test_rank_one_instance():
    fld, sl, form = _instance(gram=((2,),))
    report = log_psi_product(form, sl, fld)
    assert report.rational_part == FactoredLog({7: 2})
    assert report.c00 == 2  # the two vectors x = +-1 with Q(x) = 1
    assert report.kzero_coeff == -2


def test_numeric_consistency():
    fld, sl, form = _instance(
        coeffs={(0, Fraction(-1)): Fraction(1), (0, Fraction(0)): Fraction(1)}
    )
    report = log_psi_product(form, sl, fld)
    with mp.workdps(50):
        k0, _ = kappa_zero_constant(fld, 40)
        expect = report.rational_part.numeric(40) + float(report.kzero_coeff) * k0
        assert abs(report.numeric(fld, 40) - expect) < mp.mpf("1e-35")


def test_vol_kt_scaling():
    fld, sl, form = _instance()
    assert default_vol_kt(fld) == Fraction(2, 1)
    a = log_psi_product(form, sl, fld, vol_kt=Fraction(2))
    b = log_psi_product(form, sl, fld, vol_kt=Fraction(1))
    assert b.rational_part == 2 * a.rational_part
    with pytest.raises(ValueError):
        log_psi_product(form, sl, fld, vol_kt=0)


def test_kappa_eta_zero_for_negative_m():
    fld, sl, form = _instance()
    assert kappa_eta(fld, sl, 0, -1).is_zero()
    k0 = kappa_eta(fld, sl, 0, 0)
    assert k0.kzero_multiple == 1  # only the zero coset at m = 0


def test_contraction_coeffs_integral_and_match():
    fld, sl, form = _instance(
        gram=((2,),),
        coeffs={(0, Fraction(-1)): Fraction(2), (0, Fraction(0)): Fraction(-1)},
    )
    table = contraction_coeffs(form, sl, [Fraction(0), Fraction(-1)])
    for (label, li, m), value in table.items():
        if m <= 0:
            assert value.denominator == 1
    # C_{0,0}(0) = c(-1) * r(1) + c(0) * r(0) = 2*2 - 1 = 3
    assert table[(0, 0, Fraction(0))] == 3
    assert c00_contraction(form, sl) == 3


def test_check_prime_support_flags_foreign_prime():
    fld, sl, form = _instance()
    report = log_psi_product(form, sl, fld)
    fake = type(report)(
        rational_part=FactoredLog({11: 1}),  # 11 splits in Q(sqrt(-7))
        kzero_coeff=Fraction(0),
        c00=Fraction(0),
        degree=2,
        vol_kt=Fraction(2),
        d=7,
    )
    ok, violations = check_prime_support(fake, fld, form)
    assert not ok and violations == [11]


def test_transcendental_base_two_forms_agree():
    fld = make_field(15)
    with mp.workdps(50):
        f1, f2 = transcendental_base(fld, 40)
        assert abs(f1 - f2) < mp.mpf("1e-35")
