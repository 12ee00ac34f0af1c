from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from borcherds_cm.forms import (
    FourierForm,
    IntegralityViolation,
    QExpansion,
    SupportCongruenceViolation,
    classical_qexp,
    load_form,
    m_max,
    save_form,
)
from borcherds_cm.lattice import PosLattice, SplitLattice, make_ideal_lattice
from borcherds_cm.quadfield import make_field


# ---------------------------------------------------------------------------
# QExpansion arithmetic
# ---------------------------------------------------------------------------


def test_qexp_basic():
    f = QExpansion(0, (1, 2, 3))
    assert f.order == 2
    assert f.coeff(1) == 2
    assert f.coeff(2) == 3
    with pytest.raises(IndexError):
        f.coeff(3)
    g = f.truncate(1)
    assert g.coeffs == (1, 2)


def test_qexp_normalizes_leading_zeros():
    f = QExpansion(-1, (0, 0, 5))
    assert f.leading == 1 and f.coeffs == (5,)


def test_qexp_mul_tracks_order():
    a = QExpansion(0, (1, 1))       # order 1
    b = QExpansion(1, (1, 0, 1))    # order 3
    c = a * b
    assert c.leading == 1
    assert c.order == 2  # min(1 + 1, 3 + 0)


def test_qexp_inverse_identity():
    delta = classical_qexp("delta", 20)
    one = delta * delta.inverse()
    assert one.leading == 0
    assert one.coeffs[0] == 1
    assert all(c == 0 for c in one.coeffs[1:])


coeff_lists = st.lists(
    st.integers(min_value=-9, max_value=9), min_size=1, max_size=6
).filter(lambda xs: xs[0] != 0)


@given(coeff_lists, coeff_lists)
@settings(max_examples=100, deadline=None)
def test_qexp_ring_laws(a, b):
    fa = QExpansion(0, a)
    fb = QExpansion(0, b)
    assert fa * fb == fb * fa
    assert (fa + fb) - fb == fa.truncate((fa + fb).order)
    inv = fa.inverse()
    prod = fa * inv
    assert prod.coeff(0) == 1


# ---------------------------------------------------------------------------
# Classical expansions
# ---------------------------------------------------------------------------


def test_delta_expansion():
    d = classical_qexp("delta", 3)
    assert d.leading == 1
    assert d.coeffs == (1, -24, 252)


def test_delta_tau_values():
    d = classical_qexp("delta", 10)
    # Ramanujan tau
    assert d.coeff(5) == 4830
    assert d.coeff(10) == -115920


def test_e4_e6():
    e4 = classical_qexp("e4", 2)
    assert e4.coeffs == (1, 240, 2160)
    e6 = classical_qexp("e6", 2)
    assert e6.coeffs == (1, -504, -16632)


def test_j_expansion():
    j = classical_qexp("j", 2)
    assert j.leading == -1
    assert j.coeffs == (1, 744, 196884, 21493760)


def test_j_integrality_to_200():
    j = classical_qexp("j", 200)
    assert j.coeff(-1) == 1
    assert j.coeff(0) == 744
    assert j.coeff(1) == 196884
    for n in range(-1, 201):
        assert j.coeff(n).denominator == 1


def test_classical_qexp_errors():
    with pytest.raises(ValueError):
        classical_qexp("theta", 5)
    with pytest.raises(ValueError):
        classical_qexp("delta", 0)


# ---------------------------------------------------------------------------
# FourierForm tables
# ---------------------------------------------------------------------------


def _desk_lattice():
    fld = make_field(7)
    sl = SplitLattice(PosLattice(()), make_ideal_lattice(fld, "unit"))
    return fld, sl


def test_fourier_form_basic():
    fld, sl = _desk_lattice()
    form = FourierForm(sl, {(0, Fraction(-1)): 1, (0, Fraction(0)): 3})
    assert form.c(0, -1) == 1
    assert form.c(0, 5) == 0
    assert form.principal_support == [(0, Fraction(-1))]
    assert m_max(form) == 1
    assert form.labels() == [0]


def test_fourier_form_scaling_and_sum():
    fld, sl = _desk_lattice()
    a = FourierForm(sl, {(0, Fraction(-1)): 1})
    b = a.scaled(2)
    assert b.c(0, -1) == 2
    c = a.plus(b)
    assert c.c(0, -1) == 3


def test_integrality_violation():
    fld, sl = _desk_lattice()
    with pytest.raises(IntegralityViolation):
        FourierForm(sl, {(0, Fraction(-1)): Fraction(1, 2)})


def test_support_congruence_violation():
    fld, sl = _desk_lattice()
    # eta 1 has Q = 5/7; an integer m breaks m + Q(eta) in Z
    assert sl.etas[1].q_mod_one == Fraction(5, 7)
    with pytest.raises(SupportCongruenceViolation):
        FourierForm(sl, {(1, Fraction(-1)): 1})
    # the congruent index m = -Q(eta) mod 1, shifted negative, is accepted
    FourierForm(sl, {(1, Fraction(2, 7) - 1): 1})


def test_label_range():
    fld, sl = _desk_lattice()
    with pytest.raises(ValueError):
        FourierForm(sl, {(99, Fraction(-1)): 1})


def test_m_max_holomorphic():
    fld, sl = _desk_lattice()
    form = FourierForm(sl, {(0, Fraction(0)): 2})
    assert m_max(form) == 0


def test_save_load_round_trip(tmp_path):
    fld, sl = _desk_lattice()
    form = FourierForm(
        sl, {(0, Fraction(-2)): 3, (1, Fraction(2, 7)): Fraction(1, 2)}
    )
    path = tmp_path / "form.txt"
    save_form(form, path, d=7)
    loaded = load_form(path, sl)
    assert loaded.coeffs == form.coeffs


def test_load_form_errors(tmp_path):
    fld, sl = _desk_lattice()
    path = tmp_path / "bad.txt"
    path.write_text("0 -1\n")
    with pytest.raises(ValueError):
        load_form(path, sl)
    path.write_text("0 -1/1 1/1\n0 -1/1 2/1\n")
    with pytest.raises(ValueError):
        load_form(path, sl)
