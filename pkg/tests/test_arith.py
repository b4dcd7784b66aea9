import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nblab.arith import build_profile, floor_sum_check, sign_changes
from nblab.sieve import sieve_mobius


def test_g_decomposition_exact(profile):
    for n in range(1, profile.exact_limit + 1):
        assert profile.g_exact(n) == (Fraction(profile.M(n), n)
                                      + profile.gamma_exact(n))


def test_gamma_matches_piecewise_integral(profile):
    # integral_1^n M(t) t^-2 dt = sum_{k<n} M(k) (1/k - 1/(k+1)), exactly
    acc = Fraction(0)
    for k in range(1, 400):
        acc += profile.M(k) * (Fraction(1, k) - Fraction(1, k + 1))
        assert acc == profile.gamma_exact(k + 1)


def test_float_lanes_match_exact(profile):
    for n in (1, 2, 17, 500, 2000):
        assert math.isclose(profile.g(n), float(profile.g_exact(n)),
                            rel_tol=0, abs_tol=1e-14)
        assert math.isclose(profile.gamma(n), float(profile.gamma_exact(n)),
                            rel_tol=0, abs_tol=1e-14)


def test_h2_is_mertens_log_sum(profile):
    # p = 2 accumulation: H_2(n) = sum_{k<n} M(k) log((k+1)/k)
    for n in (2, 10, 100, 1000):
        oracle = math.fsum(profile.M(k) * math.log((k + 1) / k)
                           for k in range(1, n))
        assert math.isclose(profile.hp(n), oracle, rel_tol=1e-13, abs_tol=1e-13)


def test_hp_general_p_against_quadrature():
    import scipy.integrate as si
    p = 1.5
    prof = build_profile(sieve_mobius(60), p=p)
    n = 50
    oracle = sum(si.quad(lambda t: prof.M(math.floor(t)) * t ** (-2.0 / p),
                         k, k + 1)[0] for k in range(1, n))
    assert math.isclose(prof.hp(n), oracle, rel_tol=1e-9)


def test_hp_trivial_start(profile):
    assert profile.hp(1) == 0.0
    assert profile.gamma(1) == 0.0
    assert profile.g_exact(1) == 1


def test_floor_sum_check(profile):
    assert floor_sum_check(profile, 2000)


def test_floor_sum_oracle_small(profile):
    # direct evaluation of sum mu(k) floor(j/k) for tiny j
    for j in range(1, 60):
        assert sum(profile.mu(k) * (j // k) for k in range(1, j + 1)) == 1


def _sign_changes_reference(arr, lo):
    out = []
    last_sign, last_pos = 0, None
    for i, v in enumerate(arr):
        s = int(v > 0) - int(v < 0)
        if s == 0:
            continue
        if last_sign != 0 and s != last_sign:
            out.append(lo + last_pos)
        last_sign, last_pos = s, i
    return out


def test_sign_changes_vs_reference(profile):
    for series in ("M", "g", "gamma"):
        arr = {"M": profile.mertens, "g": profile.g_float,
               "gamma": profile.gamma_float}[series][:1500]
        assert sign_changes(profile, series, 1, 1500) == \
            _sign_changes_reference(arr, 1)


@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=1,
                max_size=60))
@settings(max_examples=60, deadline=None)
def test_sign_changes_property(values):
    # embed arbitrary small integers as a fake Mertens series
    class Fake:
        limit = len(values)
        mertens = np.array(values, dtype=np.int64)
        g_float = gamma_float = hp_float = mertens.astype(np.float64)
    got = sign_changes(Fake, "M", 1, len(values))
    assert got == _sign_changes_reference(values, 1)


def test_mertens_zero_runs_handled(profile):
    # M(n) = 0 exactly at the reported crossing boundaries' successors
    changes = sign_changes(profile, "M", 1, 2000)
    for n in changes:
        after = profile.M(n)
        assert after != 0


def test_range_validation(profile):
    with pytest.raises(ValueError):
        profile.M(0)
    with pytest.raises(ValueError):
        profile.g_exact(profile.exact_limit + 1)
    with pytest.raises(ValueError):
        sign_changes(profile, "bogus")
    with pytest.raises(ValueError):
        sign_changes(profile, "M", 0, 10)
    assert sign_changes(profile, "M", 10, 5) == []


def test_build_profile_rejects_bad_p(table):
    with pytest.raises(ValueError):
        build_profile(table, p=1.0)
