"""Series expansions of the two closed forms and the self-similarity residual."""

import pytest

from polypow import (
    FpPoly,
    InconclusiveError,
    a_1px,
    a_from_recursion,
    functional_residual,
    line_complexity_range,
    recursion_1xx2_mod2,
    series_1px,
    series_1xx2,
    series_to_csv,
)

R_CUBE = [1, -3, 3, -1]  # (1-z)^3
R_MIXED = [1, -2, 0, 2, -1]  # (1-z^2)(1-z)^2


def test_series_1px_mod2_is_quadratic():
    ser = series_1px(2, 300)
    assert ser[0] == 1
    for n in range(1, 301):
        assert ser[n] == n * n - n + 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_series_1px_matches_recursion_values(p):
    ser = series_1px(p, 400)
    assert ser == [a_1px(p, n) for n in range(401)]
    assert ser[0] == 1 and ser[1] == p


@pytest.mark.parametrize("p", [3, 5])
def test_series_1px_matches_exact_counts(p):
    f = FpPoly.make(p, [1, 1])
    assert series_1px(p, 12) == line_complexity_range(f, 12)


def test_series_1xx2_prefix():
    assert series_1xx2(12) == [1, 2, 4, 8, 14, 25, 36, 53, 70, 92, 114, 142, 170]


def test_series_1xx2_matches_recursion_far_out():
    rec = recursion_1xx2_mod2()
    assert series_1xx2(600) == [a_from_recursion(rec, n) for n in range(601)]


def test_series_input_validation():
    with pytest.raises(ValueError):
        series_1px(4, 10)
    with pytest.raises(ValueError):
        series_1px(3, -1)
    with pytest.raises(ValueError):
        series_1xx2(-2)


# ------------------------------------------------------------- residuals ----


def test_residual_exact_for_mod2():
    rep = functional_residual(series_1px(2, 256), R_CUBE, 2)
    # -z + 2z^2 + z^3 - z^4 - z^6
    assert rep.residual == (0, -1, 2, 1, -1, 0, -1)
    assert rep.degree_bound == 6
    assert rep.checked_to == 256


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_residual_certified_on_tail_series(p):
    # a(n)/n^2 has a quadratic head; the self-similar part is the tail
    # h(z) = sum a(n+2) z^n, and (1-z)^3 h(z) - (1-z^p)^3 h(z^p) closes
    # with degree exactly 2p (top coefficient -p).
    rep = functional_residual(series_1px(p, 1024)[2:], R_CUBE, p)
    assert rep.degree_bound == 2 * p
    assert rep.residual[-1] == -p


@pytest.mark.parametrize("p", [3, 5, 7])
def test_residual_open_on_full_series(p):
    # with the quadratic head left in, the residual keeps a lacunary tail
    # (support near powers of p), so no finite bound can be certified
    rep = functional_residual(series_1px(p, 1024), R_CUBE, p)
    assert rep.degree_bound is None


def test_residual_certified_for_1xx2():
    # same head/tail split as 1+x: the numerator's lacunary sum carries a z^3
    # prefactor, so the equation closes on h(z) = sum a(n+3) z^n
    rep = functional_residual(series_1xx2(1024)[3:], R_MIXED, 2)
    assert rep.degree_bound == 6
    assert rep.residual == (0, -2, -1, 2, 4, 0, -3)


def test_residual_not_certified_for_wrong_multiplier():
    # (1-z) alone does not close the equation; the tail never vanishes
    rep = functional_residual(series_1px(2, 512), [1, -1], 2)
    assert rep.degree_bound is None


def test_residual_zero_series():
    rep = functional_residual([0] * 100, R_CUBE, 2)
    assert rep.residual == (0,)
    assert rep.degree_bound == 0


def test_residual_rejects_short_prefix_and_bad_r():
    with pytest.raises(InconclusiveError):
        functional_residual(series_1px(3, 10), R_CUBE, 3)
    with pytest.raises(ValueError):
        functional_residual(series_1px(2, 100), [1, 0], 2)
    with pytest.raises(ValueError):
        functional_residual(series_1px(2, 100), [], 2)


def test_series_to_csv_layout():
    assert series_to_csv([1, 2, 4]) == "n,a_n\n0,1\n1,2\n2,4\n"
