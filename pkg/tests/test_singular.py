import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from randcover.errors import (
    InvalidInputError,
    NotContractiveError,
    NotInjectiveError,
    UnsupportedError,
)
from randcover.singular import (
    ShapeSequence,
    f_hat,
    geometric_indices,
    jacobi_singular_values,
    log_phi_s,
    phi_s,
    s0_analytic,
    s0_numeric,
    scalar_exponent,
    singular_values,
)


@given(arrays(float, (3, 3), elements=st.floats(-2, 2)))
def test_jacobi_agrees_with_lapack(m):
    ref = np.linalg.svd(m, compute_uv=False)
    assert np.allclose(jacobi_singular_values(m), ref, atol=1e-10)


def test_jacobi_batched_and_sorted():
    rng = np.random.default_rng(1)
    ms = rng.normal(size=(50, 4, 4))
    sv = jacobi_singular_values(ms)
    assert np.allclose(sv, np.linalg.svd(ms, compute_uv=False), atol=1e-10)
    assert np.all(np.diff(sv, axis=-1) <= 0)


def test_singular_values_validation():
    assert singular_values(np.diag([0.1, 0.5])).alphas == pytest.approx((0.5, 0.1))
    with pytest.raises(NotInjectiveError):
        singular_values([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(NotContractiveError):
        singular_values(np.diag([1.0, 0.5]))


def test_phi_s_values():
    a = np.array([0.5, 0.2, 0.1])
    assert phi_s(a, 1.0) == pytest.approx(0.5)
    assert phi_s(a, 1.5) == pytest.approx(0.5 * 0.2**0.5)
    assert phi_s(a, 3.0) == pytest.approx(0.01)
    assert phi_s(a, 2.25) == pytest.approx(0.1 * 0.1**0.25)
    with pytest.raises(InvalidInputError):
        phi_s(a, 3.5)
    with pytest.raises(InvalidInputError):
        phi_s(a, 0.0)


@given(arrays(float, 3, elements=st.floats(0.01, 0.99)), st.floats(0.05, 2.9), st.floats(0.01, 0.1))
def test_phi_s_is_decreasing_in_s(a, s, ds):
    a = np.sort(a)[::-1]
    assert log_phi_s(a, s + ds) <= log_phi_s(a, s) + 1e-12


@pytest.mark.parametrize(
    "exps, expected",
    [([2.0], 0.5), ([0.5, 1.0], 1.5), ([0.4, 0.5], 2.0), ([0.3, 0.3, 4.0], 2.1), ([4.0, 4.0, 4.0], 0.25), ([0.6, 0.9], 1 + 0.4 / 0.9)],
)
def test_s0_power_law_oracles(exps, expected):
    seq = ShapeSequence.power_law(exps)
    assert s0_analytic(seq).s0 == pytest.approx(expected)
    assert s0_numeric(seq).s0 == pytest.approx(expected, abs=2e-3)


def test_exponent_order_is_irrelevant():
    a = s0_analytic(ShapeSequence.power_law([0.9, 0.6], [2.0, 0.5])).s0
    assert a == pytest.approx(s0_analytic(ShapeSequence.power_law([0.6, 0.9])).s0)


def test_noisy_list_matches_power_law():
    rng = np.random.default_rng(2)
    n = np.arange(1, 200_001, dtype=float)
    noisy = n**-2.0 * rng.uniform(0.8, 1.25, n.size)
    vals = np.minimum.accumulate(noisy)  # keep the list non-increasing
    assert s0_numeric(ShapeSequence.from_values(vals[:, None])).s0 == pytest.approx(0.5, abs=0.02)


def test_list_requirements():
    with pytest.raises(InvalidInputError):
        s0_numeric(ShapeSequence.from_values(np.full((100, 1), 0.1)))
    rising = np.linspace(0.01, 0.02, 20_000)[:, None]
    with pytest.raises(InvalidInputError):
        ShapeSequence.from_values(rising)
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        ShapeSequence.from_values(rising, force=True)


def test_matrix_sequence_edges_are_singular_values():
    n = np.arange(1, 20_001)
    mats = np.zeros((n.size, 2, 2))
    mats[:, 0, 1] = 1.0 / n
    mats[:, 1, 0] = 0.5 / n**2
    seq = ShapeSequence.from_matrices(mats)
    assert np.allclose(seq.alphas(5), [0.2, 0.02])
    assert s0_numeric(seq).s0 == pytest.approx(1.0, abs=0.05)


def test_f_hat_analytic_and_windowed_agree():
    seq = ShapeSequence.power_law([0.6, 0.9], [0.5, 2.0])
    for s in (0.5, 1.0, 1.3):
        assert f_hat(seq, s, analytic=False) == pytest.approx(f_hat(seq, s), rel=0.05)
    with pytest.raises(UnsupportedError):
        f_hat(ShapeSequence.from_values(np.full((20_000, 1), 0.5)), 0.5, analytic=True)


def test_constant_lengths_give_full_dimension():
    # lengths bounded below: every sum diverges, so s0 is clamped to d
    seq = ShapeSequence.from_values(np.full((20_000, 1), 0.5))
    assert s0_numeric(seq).s0 == 1.0


def test_scalar_exponent_and_geometric_indices():
    assert scalar_exponent(ShapeSequence.power_law([0.5])) == 2.0
    n = np.arange(1, 50_001, dtype=float)
    assert scalar_exponent(ShapeSequence.from_values((1 / n)[:, None])) == pytest.approx(1.0, abs=0.01)
    g = geometric_indices(10, 10_000)
    assert g[0] == 10 and g[-1] == 10_000 and np.all(np.diff(g) > 0)


def test_shape_sequence_serialises():
    d = ShapeSequence.power_law([1.0, 2.0], [1.0, 3.0]).to_dict()
    assert d["kind"] == "power" and list(d["exponents"]) == [1.0, 2.0]
