import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ulamc.exceptions import ImaginaryAxisError, RepeatedRootsError
from ulamc.poly import (ALL_NEGATIVE, ALL_POSITIVE, MIXED, OperatorSpec, RootSet,
                        coeffs_from_roots, format_complex, parse_complex,
                        parse_complex_list, roots_from_coeffs)


@pytest.mark.parametrize("text,value", [
    ("3", 3), ("-2.5", -2.5), ("i", 1j), ("-i", -1j), ("+i", 1j), ("2i", 2j),
    ("1+i", 1 + 1j), ("1-2i", 1 - 2j), ("-1.5e-3+4.25i", -1.5e-3 + 4.25j),
    (" 1 + 2 i ", 1 + 2j), (".5-.5i", 0.5 - 0.5j), ("1e2", 100),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "foo", "1+", "i2", "1+2j", "1++2i", "2ii", "--1"])
def test_parse_complex_rejects(bad):
    with pytest.raises(ValueError):
        parse_complex(bad)


def test_parse_list_and_format_roundtrip():
    zs = parse_complex_list("-1+2i, -1-2i,3")
    assert zs == [-1 + 2j, -1 - 2j, 3]
    assert [parse_complex(format_complex(z)) for z in zs] == zs


def test_operator_horner():
    spec = OperatorSpec.from_coeffs([3, 2])
    assert spec.order == 2
    assert spec(-1) == 0 and spec(-2) == 0
    assert spec(1j) == (1j) ** 2 + 3j + 2
    assert spec.is_real


def test_roots_from_coeffs_canonical_order():
    rs = roots_from_coeffs(OperatorSpec.from_coeffs([0, -2, 4]))  # (z-1-i)(z-1+i)(z+2)
    assert rs.classification.tag == MIXED and rs.p == 2
    assert np.allclose(rs.roots, [1 - 1j, 1 + 1j, -2], atol=1e-14)


def test_real_coefficients_give_exact_real_roots():
    rs = roots_from_coeffs(OperatorSpec.from_coeffs([3, 2]))
    assert all(r.imag == 0 for r in rs.roots)
    assert sorted(r.real for r in rs.roots) == pytest.approx([-2, -1], abs=1e-15)


def test_classification_tags():
    assert RootSet.from_roots([-1, -2]).classification.tag == ALL_NEGATIVE
    assert RootSet.from_roots([1, 2]).classification.tag == ALL_POSITIVE
    mixed = RootSet.from_roots([-1, 2, 3]).classification
    assert mixed.tag == MIXED and mixed.p == 2 and str(mixed) == "Mixed(p=2)"


def test_imaginary_axis_rejected():
    with pytest.raises(ImaginaryAxisError) as err:
        RootSet.from_roots([1j, -1])
    assert err.value.tag == "ImaginaryAxis"
    with pytest.raises(ImaginaryAxisError):
        roots_from_coeffs(OperatorSpec.from_coeffs([0, 1]))  # z^2 + 1


def test_repeated_rejected():
    with pytest.raises(RepeatedRootsError) as err:
        RootSet.from_roots([-1, -1 + 1e-12])
    assert err.value.tag == "Repeated"
    with pytest.raises(RepeatedRootsError):
        roots_from_coeffs(OperatorSpec.from_coeffs([2, 1]))  # (z+1)^2


def test_tolerances_are_adjustable():
    RootSet.from_roots([-1, -1 - 1e-6], sep_tol=1e-9)
    RootSet.from_roots([1e-12, -1], axis_tol=1e-14)


root = st.complex_numbers(min_magnitude=0.2, max_magnitude=5, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(root, min_size=1, max_size=6))
def test_coeffs_roots_roundtrip(roots):
    roots = [complex(r.real if abs(r.real) > 0.1 else 0.1 + r.real, r.imag) for r in roots]
    gaps = [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]]
    if gaps and min(gaps) < 0.05:
        return
    spec = coeffs_from_roots(roots)
    rs = roots_from_coeffs(spec)
    for r in roots:
        assert min(abs(r - z) for z in rs.roots) <= 1e-8 * max(1.0, abs(r))


@settings(max_examples=60, deadline=None)
@given(st.lists(root, min_size=1, max_size=6), st.floats(-1, 1))
def test_canonical_order_is_permutation_invariant(roots, shuffle_key):
    roots = [complex(r.real if abs(r.real) > 0.1 else 0.1 + r.real, r.imag) for r in roots]
    gaps = [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]]
    if gaps and min(gaps) < 1e-3:
        return
    rng = np.random.default_rng(int(abs(shuffle_key) * 1e6))
    a = RootSet.from_roots(roots)
    b = RootSet.from_roots([roots[i] for i in rng.permutation(len(roots))])
    assert a.roots == b.roots
    assert all(r.real > 0 for r in a.roots[:a.p]) and all(r.real < 0 for r in a.roots[a.p:])
    assert cmath.isclose(a.rho_min, min(abs(r.real) for r in roots))
