"""Stochastic-matrix realizations of schemes: verification and deformed duals."""

import numpy as np
import pytest

from hypergroups.errors import (
    ClosureResidual,
    DetailedBalanceViolation,
    NonSquare,
    NotACharacter,
    NotAHypergroup,
    NotStochastic,
    SchemeError,
    SupportMismatch,
)
from hypergroups.families.cosh import CoshFamily, cosh_window_scheme
from hypergroups.generalized import (
    build_generalized,
    classical_embedding,
    deformed_valencies,
    dual_product_generalized,
    hypergroup_from_generalized,
    kernel_F_f,
    pi_positive_definite,
    positive_connection_check,
    s_tilde_f,
)
from hypergroups.harmonic import character_table, dual_convolution
from hypergroups.hypergroup import hypergroup_from_scheme, verify_hypergroup
from hypergroups.schemes import build_scheme


def symmetrized_z8():
    n = 8
    classes = sorted({frozenset({d, (-d) % n}) for d in range(n)}, key=min)
    index = {d: ci for ci, pair in enumerate(classes) for d in pair}
    return build_scheme(list(range(n)), list(range(len(classes))),
                        lambda x, y: index[(y - x) % n])


def test_classical_embedding_reproduces_convolution(commutative_schemes):
    for name, s in commutative_schemes.items():
        g = classical_embedding(s)
        h = hypergroup_from_scheme(s)
        assert not g.windowed, name
        np.testing.assert_allclose(g.p_tilde, h.conv_float, rtol=0, atol=1e-12,
                                   err_msg=name)
        assert g.pair_checked.all(), name
        np.testing.assert_allclose(deformed_valencies(g), h.haar_float,
                                   rtol=0, atol=1e-9, err_msg=name)


def test_embedding_report_contents(pentagon):
    g = classical_embedding(pentagon)
    rep = g.report
    assert rep["stochastic_rows_checked"] == 3 * 5
    assert rep["detailed_balance_residual"] <= 1e-12
    assert rep["closure_residual"] <= 1e-12
    assert rep["deformed_row_sum_residual"] <= 1e-12
    assert rep["deformed_support_matches"]
    assert rep["pairs_checked"] == rep["pairs_total"] == 9
    assert rep["interior_fraction"] == 1.0
    assert max(rep["operator_norms"]) <= 1.0 + 1e-10


def test_embedding_yields_verified_hypergroup(commutative_schemes):
    for name, s in commutative_schemes.items():
        h = hypergroup_from_generalized(classical_embedding(s))
        assert verify_hypergroup(h, tol=1e-9)["all_hold"], name


def test_uniform_weight_is_reversible(pentagon):
    g = classical_embedding(pentagon)
    np.testing.assert_array_equal(g.vertex_weight, np.ones(5))
    assert g.base_point == 0


def test_rejects_non_stochastic_rows(pentagon):
    g = classical_embedding(pentagon)
    stoch = g.stoch.copy()
    stoch[1] *= 1.5
    with pytest.raises(NotStochastic):
        build_generalized(pentagon, stoch)


def test_rejects_support_mismatch(pentagon):
    g = classical_embedding(pentagon)
    stoch = g.stoch.copy()
    # move the mass of (0 -> 1) onto (0 -> 2): rows stay stochastic but
    # the matrix for class 1 now touches a class-2 pair
    assert pentagon.relation[0, 1] == 1 and pentagon.relation[0, 2] == 2
    stoch[1, 0, 2] += stoch[1, 0, 1]
    stoch[1, 0, 1] = 0.0
    with pytest.raises(SupportMismatch):
        build_generalized(pentagon, stoch)


def test_rejects_detailed_balance_violation(pentagon):
    stoch = np.zeros((3, 5, 5))
    stoch[0] = np.eye(5)
    for x in range(5):
        stoch[1, x, (x + 1) % 5] = 0.6   # drift breaks reversibility at weight 1
        stoch[1, x, (x - 1) % 5] = 0.4
        stoch[2, x, (x + 2) % 5] = 0.5
        stoch[2, x, (x - 2) % 5] = 0.5
    with pytest.raises(DetailedBalanceViolation):
        build_generalized(pentagon, stoch)


def test_rejects_closure_failure():
    """Alternating nearest-neighbour weights on the 8-cycle stay stochastic,
    supported, and reversible, but their products leave the class algebra."""
    s = symmetrized_z8()
    g = classical_embedding(s)
    stoch = g.stoch.copy()
    t = 0.7
    cls1 = 1  # class of the +-1 differences
    stoch[cls1] = 0.0
    for x in range(8):
        a, b = (t, 1 - t) if x % 2 == 0 else (1 - t, t)
        stoch[cls1, x, (x + 1) % 8] = a
        stoch[cls1, x, (x - 1) % 8] = b
    with pytest.raises(ClosureResidual):
        build_generalized(s, stoch)


def test_windowed_object_refuses_global_structure():
    g = cosh_window_scheme(CoshFamily(1.0), 3)
    assert g.windowed
    assert not g.pair_checked.all()
    with pytest.raises(NotAHypergroup):
        hypergroup_from_generalized(g)
    with pytest.raises(SchemeError):
        deformed_valencies(g)


def test_windowed_valencies_need_checked_pairs():
    g = cosh_window_scheme(CoshFamily(0.5), 4)
    # class 1 with itself lands inside the window, so mixtures touching
    # only low classes are fine
    f = np.zeros(g.n_classes)
    f[1] = 1.0
    out = s_tilde_f(g, f)
    assert out.shape == (g.n_points, g.n_points)
    f[g.n_classes - 1] = 1.0  # top class valency is not determined
    with pytest.raises(SchemeError):
        s_tilde_f(g, f)


def test_mixture_operator_matches_kernel(commutative_schemes, rng):
    """For embedded schemes the weighted mixture of transition matrices is
    exactly the class-function kernel."""
    for name, s in commutative_schemes.items():
        g = classical_embedding(s)
        f = rng.standard_normal(s.n_classes)
        np.testing.assert_allclose(s_tilde_f(g, f).real, kernel_F_f(g, f),
                                   rtol=0, atol=1e-12, err_msg=name)
        assert np.abs(s_tilde_f(g, f).imag).max() <= 1e-15


def test_pi_positive_definite_routes(pentagon):
    g = classical_embedding(pentagon)
    h = hypergroup_from_scheme(pentagon)
    tbl = character_table(h)
    good = kernel_F_f(g, tbl.chars[1].real)
    ok, cert = pi_positive_definite(g, good)
    assert ok, cert
    bad = kernel_F_f(g, np.array([1.0, -1.0, 1.0]))
    ok, cert = pi_positive_definite(g, bad)
    assert not ok
    assert cert["min_eigenvalue"] < -1e-3
    with pytest.raises(NonSquare):
        pi_positive_definite(g, np.ones((2, 3)))


def test_positive_connection_certificate(pentagon):
    g = classical_embedding(pentagon)
    tbl = character_table(hypergroup_from_scheme(pentagon))
    ok, cert = positive_connection_check(g, tbl.chars[1])
    assert ok, cert
    assert not cert["truncated"]
    with pytest.raises(NotACharacter):
        positive_connection_check(g, np.array([1.0, 0.3, 0.7]))


def test_dual_product_matches_dual_convolution(commutative_schemes):
    for name, s in commutative_schemes.items():
        g = classical_embedding(s)
        h = hypergroup_from_generalized(g)
        tbl = character_table(h)
        m = h.n_classes
        for a in range(m):
            for b in range(m):
                dm, info = dual_product_generalized(g, tbl, a, b)
                ref = dual_convolution(h, tbl, a, b)
                np.testing.assert_allclose(dm.raw, ref.raw, rtol=0, atol=1e-12,
                                           err_msg=(name, a, b))
                np.testing.assert_allclose(dm.weights, ref.weights, rtol=0,
                                           atol=1e-12, err_msg=(name, a, b))
                assert "precondition_certified" in info


def test_dual_product_precondition_flag(pentagon):
    g = classical_embedding(pentagon)
    h = hypergroup_from_generalized(g)
    tbl = character_table(h)
    dm, info = dual_product_generalized(g, tbl, 1, 1, check_precondition=False)
    assert "precondition_certified" not in info
    assert dm.positive
