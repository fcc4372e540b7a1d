from fractions import Fraction as F

import pytest

from tropical_heights.curves import CurvePoint, WeierstrassCurve, naive_height
from tropical_heights.errors import AdditiveReductionError, InputError
from tropical_heights.heights import (
    RunConfig,
    bad_primes,
    doubling_oracle,
    factorize,
    find_semistable_examples,
    global_height,
    is_semistable,
    place_list,
)

E37 = WeierstrassCurve.from_coeffs(0, 0, 1, -1, 0)
E11 = WeierstrassCurve.from_coeffs(0, -1, 1, -10, -20)


def test_factorize():
    assert factorize(2**3 * 3 * 37**2) == {2: 3, 3: 1, 37: 2}
    assert factorize(1) == {}
    assert factorize(10**12 + 39) == {10**12 + 39: 1}  # prime


def test_bad_primes_and_places():
    assert bad_primes(E37) == [37]
    assert bad_primes(E11) == [11]
    # fifth multiple of the generator has x = 1/4
    P = CurvePoint.affine(F(1, 4), F(-5, 8))
    assert place_list(E37, P) == [2, 37]


def test_is_semistable():
    assert is_semistable(E37)
    assert is_semistable(E11)
    assert not is_semistable(WeierstrassCurve.from_coeffs(0, 0, 0, 0, 1))


def test_doubling_oracle_torsion_is_exact_zero():
    result = doubling_oracle(E11, CurvePoint.affine(5, 5), 10)
    assert result.is_torsion
    assert result.value == 0.0


def test_doubling_oracle_matches_naive_limit():
    # independent check of the integer-pair duplication: full group law
    P = CurvePoint.affine(0, 0)
    result = doubling_oracle(E37, P, 8)
    Q = P
    for n in range(1, 9):
        Q = E37.double(Q)
    assert abs(result.estimates[-1] - naive_height(Q.x) / 4**8) < 1e-12
    # successive estimates stabilize at rate ~ 4^-n
    diffs = [abs(a - b) for a, b in zip(result.estimates, result.estimates[1:])]
    assert diffs[-1] < 1e-3


def test_doubling_oracle_known_value():
    # hhat_x((0,0)) on 37a = 0.0511114082...; the oracle reports half of it
    result = doubling_oracle(E37, CurvePoint.affine(0, 0), 12)
    assert abs(result.value - 0.0511114082399688 / 2) < 1e-8


def test_global_height_37a():
    report = global_height(E37, CurvePoint.affine(0, 0))
    assert report.discrepancy < 1e-6
    assert [rep.prime for rep in report.local_reports] == [37]
    assert len(report.checked_good_primes) == 5


def test_global_height_quadraticity():
    P = CurvePoint.affine(0, 0)
    r1 = global_height(E37, P)
    r2 = global_height(E37, E37.double(P))
    assert abs(r2.global_sum / r1.global_sum - 4) < 1e-5


def test_global_height_torsion_vanishes():
    report = global_height(E11, CurvePoint.affine(5, 5))
    assert abs(report.global_sum) < 1e-8


def test_global_height_rejects_additive():
    curve = WeierstrassCurve.from_coeffs(0, 0, 0, 0, 1)
    with pytest.raises(AdditiveReductionError):
        global_height(curve, CurvePoint.affine(0, 1))


def test_global_height_rejects_off_curve_point():
    with pytest.raises(InputError):
        global_height(E37, CurvePoint.affine(5, 5))


def test_global_height_model_independence():
    # non-integral model of 37a: the normalized heights are intrinsic
    moved_curve = E37.transform(2, 1, 0, -1)
    moved_point = WeierstrassCurve.transform_point(
        CurvePoint.affine(0, 0), 2, 1, 0, -1
    )
    assert moved_curve.contains(moved_point)
    assert not moved_curve.is_integral()
    base = global_height(E37, CurvePoint.affine(0, 0))
    moved = global_height(moved_curve, moved_point)
    assert abs(base.global_sum - moved.global_sum) < 1e-9


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig(precision_bits=10)
    with pytest.raises(InputError):
        RunConfig(tolerance=0)


def test_find_semistable_examples_deterministic(semistable_examples):
    again = find_semistable_examples(count=len(semistable_examples), max_coeff=10)
    assert [(c.a1, c.a2, c.a3, c.a4, c.a6) for c, _ in again] == [
        (c.a1, c.a2, c.a3, c.a4, c.a6) for c, _ in semistable_examples
    ]
    for curve, point in semistable_examples:
        assert curve.contains(point)
        assert curve.torsion_order(point) is None
        assert is_semistable(curve)


def test_lambda_vanishes_at_good_primes(semistable_examples):
    from tropical_heights.tate import local_height_report

    curve, point = semistable_examples[0]
    bad = set(bad_primes(curve)) | set(factorize(point.x.denominator))
    checked = 0
    for p in (2, 3, 5, 7, 11, 13, 17, 19):
        if p in bad:
            continue
        assert local_height_report(curve, p, point).lambda_v == 0
        checked += 1
    assert checked >= 5
