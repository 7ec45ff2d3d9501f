import math

import numpy as np
import pytest
from scipy.linalg import expm

from bathent import covariance, gaussian, units
from bathent.errors import DomainError
from bathent.gaussian import (Bipartition, classify_tripartite, fidelity_thermal,
                              is_fully_separable, log_negativity, partial_transpose,
                              ppt_separable, symplectic_eigenvalues, symplectic_form)


def two_mode_squeezed(r):
    """Covariance of a two-mode squeezed vacuum, ordering (x1, x2, p1, p2)."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    g = np.zeros((4, 4))
    g[:2, :2] = 0.5 * np.array([[c, s], [s, c]])
    g[2:, 2:] = 0.5 * np.array([[c, -s], [-s, c]])
    return g


def thermal_product(nus):
    n = len(nus)
    return np.diag(list(nus) + list(nus)).astype(float)


def random_symplectic(n, rng):
    m = rng.normal(size=(2 * n, 2 * n))
    m = 0.5 * (m + m.T)
    return expm(symplectic_form(n) @ m * 0.3)


def test_vacuum_spectrum():
    for n in (1, 2, 3):
        nu = symplectic_eigenvalues(0.5 * np.eye(2 * n))
        assert np.allclose(nu, 0.5, atol=1e-14)


def test_thermal_single_mode():
    nu = symplectic_eigenvalues(np.diag([2.3, 2.3]))
    assert nu[0] == pytest.approx(2.3, rel=1e-12)


def test_two_mode_squeezed_spectra():
    r = 0.6
    g = two_mode_squeezed(r)
    nu = symplectic_eigenvalues(g)
    assert np.allclose(nu, 0.5, atol=1e-10)
    pt = partial_transpose(g, Bipartition((0,), 2))
    nu_pt = symplectic_eigenvalues(pt)
    assert nu_pt[0] == pytest.approx(0.5 * math.exp(-2 * r), rel=1e-10)
    assert nu_pt[-1] == pytest.approx(0.5 * math.exp(2 * r), rel=1e-10)
    assert nu_pt[0] == pytest.approx(0.15060, rel=1e-4)


def test_partial_transpose_involution():
    rng = np.random.default_rng(3)
    g = thermal_product([0.7, 1.1, 0.9]) + 0.05 * np.eye(6)
    bp = Bipartition((0, 2), 3)
    assert np.array_equal(partial_transpose(partial_transpose(g, bp), bp), g)


def test_product_state_pt_spectrum_unchanged():
    g = thermal_product([0.8, 1.4])
    bp = Bipartition((0,), 2)
    assert np.allclose(symplectic_eigenvalues(partial_transpose(g, bp)),
                       symplectic_eigenvalues(g))
    assert ppt_separable(g, bp)


def test_log_negativity_values():
    assert log_negativity(0.5 * np.eye(4), 0, 1) == 0.0
    for r in (0.1, 0.6, 1.2):
        assert log_negativity(two_mode_squeezed(r), 0, 1) == pytest.approx(2 * r, abs=1e-10)
    assert log_negativity(thermal_product([0.9, 1.7]), 0, 1) == 0.0


def test_ppt_verdicts():
    vac = 0.5 * np.eye(6)
    for bp in gaussian.tripartite_bipartitions():
        assert ppt_separable(vac, bp)
    assert not ppt_separable(two_mode_squeezed(0.6), Bipartition((0,), 2))
    thermal3 = thermal_product([0.6, 0.8, 1.0])
    for bp in gaussian.tripartite_bipartitions():
        assert ppt_separable(thermal3, bp)


def test_flip_side_equivalence():
    # flipping the A side instead of the B side gives the same spectrum
    g = two_mode_squeezed(0.4)
    nu_b = symplectic_eigenvalues(partial_transpose(g, Bipartition((0,), 2)))
    nu_a = symplectic_eigenvalues(partial_transpose(g, Bipartition((1,), 2)))
    assert np.allclose(nu_a, nu_b, rtol=1e-12)


def embed_pair(g4, i, j, n, fill):
    """Place a 4x4 two-mode covariance at modes (i, j) of an n-mode product."""
    g = np.diag([fill] * 2 * n).astype(float)
    idx = [i, j, n + i, n + j]
    g[np.ix_(idx, idx)] = g4
    return g


def test_classify_examples():
    thermal3 = thermal_product([0.7, 0.9, 1.2])
    assert classify_tripartite(thermal3) == "C5"
    assert classify_tripartite(0.5 * np.eye(6)) == "C5"
    mixed = embed_pair(two_mode_squeezed(0.6), 0, 1, 3, 0.8)
    assert classify_tripartite(mixed) == "C2"


def test_classification_permutation_covariant():
    rng = np.random.default_rng(9)
    g = embed_pair(two_mode_squeezed(0.5), 0, 1, 3, 0.75)
    base = [ppt_separable(g, bp) for bp in gaussian.tripartite_bipartitions()]
    for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
        p = np.zeros((3, 3))
        for new, old in enumerate(perm):
            p[new, old] = 1.0
        rot = np.block([[p, np.zeros((3, 3))], [np.zeros((3, 3)), p]])
        g_p = rot @ g @ rot.T
        assert classify_tripartite(g_p) == classify_tripartite(g)
        assert sum(ppt_separable(g_p, bp) for bp in gaussian.tripartite_bipartitions()) \
            == sum(base)


def test_fully_separable_product_first_try():
    g = thermal_product([0.8, 1.1, 0.55])
    assert is_fully_separable(g, max_iter=1) == "yes"
    assert is_fully_separable(0.5 * np.eye(6), max_iter=1) == "yes"


def test_fully_separable_mixture_of_products():
    # explicit mixture: average of two product covariances plus the spread of
    # the displacements, which adds classical cross correlations
    rng = np.random.default_rng(21)
    p1 = thermal_product([0.8, 0.9, 1.1])
    p2 = thermal_product([1.5, 0.7, 0.8])
    d = rng.normal(size=6)
    g = 0.5 * (p1 + p2) + 0.25 * np.outer(d, d)
    assert is_fully_separable(g) == "yes"


def test_undecided_is_a_value():
    # a state close to the PPT boundary from the separable side whose witness
    # search may or may not converge: outcome must be a recognized token
    g = embed_pair(two_mode_squeezed(0.2), 0, 1, 3, 0.6)
    g = 0.55 * g + 0.45 * thermal_product([0.9, 0.9, 0.9])
    out = is_fully_separable(g, max_iter=30)
    assert out in ("yes", "no", "undecided")


def test_fidelity_identities():
    cfg = units.DimensionlessConfig(np.array([1.0, 2.0]), 1.0, 10.0, 0.2,
                                    np.array([[0.0, 0.1], [0.1, 0.0]]), 1)
    nus = gaussian.thermal_symplectic_spectrum(cfg)
    g_thermal = np.diag(np.concatenate([nus / cfg.frequencies, nus * cfg.frequencies]))
    assert fidelity_thermal(g_thermal, cfg) == pytest.approx(1.0, abs=1e-10)

    # vacuum against the theta -> 0 thermal state
    cold = units.DimensionlessConfig(np.array([1.0]), 1.0, 10.0, 0.0,
                                     np.zeros((1, 1)), 1)
    assert fidelity_thermal(0.5 * np.eye(2), cold) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_single_mode_value():
    # nu = 1/2 against nu_c = 3/2 gives exactly 1/2
    x = math.atanh(1.0 / 3.0)       # coth(x) = 3
    theta_wc = 1.0 / (2 * x)
    cfg = units.DimensionlessConfig(np.array([1.0]), 1.0, 1.0, theta_wc,
                                    np.zeros((1, 1)), 1)
    assert gaussian.thermal_symplectic_spectrum(cfg)[0] == pytest.approx(1.5, rel=1e-12)
    assert fidelity_thermal(0.5 * np.eye(2), cfg) == pytest.approx(0.5, abs=1e-12)


def test_symplectic_spectrum_invariance():
    rng = np.random.default_rng(17)
    g = thermal_product([0.7, 1.0, 1.6]) + 0.1 * np.eye(6)
    nu0 = symplectic_eigenvalues(g)
    for _ in range(5):
        s = random_symplectic(3, rng)
        nu = symplectic_eigenvalues(s.T @ g @ s)
        assert np.allclose(nu, nu0, rtol=1e-8, atol=1e-10)


def test_log_negativity_monotone_toward_thermal():
    g0 = two_mode_squeezed(0.8)
    g1 = thermal_product([1.5, 1.5])
    previous = np.inf
    for t in np.linspace(0.0, 1.0, 21):
        en = log_negativity((1 - t) * g0 + t * g1, 0, 1)
        assert en <= previous + 1e-12
        previous = en


def test_reduction_first_equals_transpose_first():
    cfg = units.DimensionlessConfig(
        np.array([7.2, 10.1, 13.2]), 5.0, 100.0, 0.005,
        np.array([[0.0, 0.4665, 0.933], [0.4665, 0.0, 0.4665], [0.933, 0.4665, 0.0]]), 1)
    g = covariance.covariance_blocks(cfg).matrix
    n = 3
    for i in range(3):
        for j in range(i + 1, 3):
            reduce_first = gaussian.pt_symplectic_minimum(g, i, j)
            pt_full = partial_transpose(g, Bipartition(tuple(k for k in range(3) if k != j), 3))
            idx = [i, j, n + i, n + j]
            nu = symplectic_eigenvalues(pt_full[np.ix_(idx, idx)])
            assert reduce_first == pytest.approx(nu[0], abs=1e-10)


def test_pt_minimum_against_invariant_formula():
    # independent route: for two modes the PT symplectic minimum follows from
    # the symplectic invariants, nu^2 = (D - sqrt(D^2 - 4 det G))/2 with
    # D = det A + det B - 2 det C in the (x1,p1)x(x2,p2) block split
    cfg = units.DimensionlessConfig(
        np.array([1.0, 1.6]), 0.4, 6.0, 0.15,
        np.array([[0.0, 0.7], [0.7, 0.0]]), 1)
    g = covariance.covariance_blocks(cfg).matrix
    for (i, j) in ((0, 1), (1, 0)):
        sub = gaussian.reduced_pair(g, i, j)       # (x_i, x_j, p_i, p_j)
        a = sub[np.ix_([0, 2], [0, 2])]
        b = sub[np.ix_([1, 3], [1, 3])]
        c = sub[np.ix_([0, 2], [1, 3])]
        d_inv = np.linalg.det(a) + np.linalg.det(b) - 2 * np.linalg.det(c)
        det_g = np.linalg.det(sub)
        nu_ref = math.sqrt((d_inv - math.sqrt(d_inv**2 - 4 * det_g)) / 2)
        assert gaussian.pt_symplectic_minimum(g, i, j) == pytest.approx(nu_ref, rel=1e-10)


def test_non_positive_definite_rejected():
    with pytest.raises(DomainError):
        symplectic_eigenvalues(np.diag([1.0, -0.5]))


def test_bipartition_validation():
    with pytest.raises(DomainError):
        Bipartition((), 3)
    with pytest.raises(DomainError):
        Bipartition((0, 1, 2), 3)


def test_report_text_keys():
    cfg = units.DimensionlessConfig(
        np.array([7.2, 10.1, 13.2]), 5.0, 100.0, 0.05,
        np.array([[0.0, 0.4665, 0.933], [0.4665, 0.0, 0.4665], [0.933, 0.4665, 0.0]]), 1)
    g = covariance.covariance_blocks(cfg).matrix
    rep = gaussian.build_report(g, cfg)
    text = gaussian.report_text(rep)
    for key in ("E_N.AB", "E_N.AC", "E_N.BC", "nu_minus.AB", "ppt.A|BC",
                "ppt.AB|C", "ppt.AC|B", "class", "fidelity"):
        assert f"{key} = " in text
    # values are plain parseable literals
    for line in text.strip().splitlines():
        _, _, value = line.partition(" = ")
        assert "(" not in value
        if line.startswith(("E_N", "nu_minus", "fidelity")):
            float(value)
