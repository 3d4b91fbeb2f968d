import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hirota_ist as h
from hirota_ist.errors import BadContour, ZeroArgument
from hirota_ist.spectral import Background, Region, classify_region, contour_samples, theta, uniformize

EYE = np.eye(2, dtype=complex)


def bg_for(sigma, k0=1.0, alpha=1.0, beta=0.1):
    Q = k0 * EYE
    return Background(sigma=sigma, k0=k0, alpha=alpha, beta=beta, Qplus=Q, Qminus=Q)


FOC = bg_for(-1)
DEF = bg_for(1)


def test_uniformize_branch_point_defocusing():
    sp = uniformize(1.0, DEF)
    assert sp.k == 1.0 and sp.lam == 0.0
    assert sp.region is Region.BRANCH_POINT


def test_uniformize_hand_value():
    sp = uniformize(2j, FOC)
    assert abs(sp.k - 1.25j) < 1e-15
    assert abs(sp.lam - 0.75j) < 1e-15
    assert abs(sp.gamma - 0.75) < 1e-15


def test_uniformize_gamma_to_one_at_infinity():
    sp = uniformize(1e8, FOC)
    assert abs(sp.gamma - 1.0) < 1e-15


def test_uniformize_zero_raises():
    with pytest.raises(ZeroArgument):
        uniformize(0.0, FOC)


def test_classify_examples():
    assert classify_region(2j, FOC) is Region.D_PLUS
    assert classify_region(0.5j, FOC) is Region.D_MINUS
    assert classify_region(1j, FOC) is Region.BRANCH_POINT
    assert classify_region(0.37, FOC) is Region.SIGMA
    assert classify_region(1.0 * np.exp(0.3j), FOC) is Region.SIGMA


def test_theta_zero_arguments():
    for z in (2j, 0.3 + 0.1j, -1.7):
        assert theta(0.0, 0.0, z, FOC) == 0


def test_theta_t0_reduction():
    z = 1.3 + 0.4j
    sp = uniformize(z, FOC)
    assert abs(theta(2.2, 0.0, z, FOC) - (-sp.lam * 2.2)) < 1e-14


def test_theta_hand_value():
    # k = 1.25i, lam = 0.75i at z = 2i; w = 0.1*(4k^2 - 2) + 2k
    val = theta(1.0, 1.0, 2j, FOC)
    expected = 0.75j * (-1.0 - (0.1 * (-8.25) + 2.5j))
    assert abs(val - expected) < 1e-14
    assert abs(expected - (1.875 - 0.13125j)) < 1e-15


annulus = st.builds(
    complex,
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
).filter(lambda z: 0.1 <= abs(z) <= 10.0)


@given(annulus, st.sampled_from([-1, 1]))
def test_uniformize_roundtrip(z, sigma):
    bg = FOC if sigma == -1 else DEF
    sp = uniformize(z, bg)
    assert abs(sp.k + sp.lam - z) <= 2e-15 * max(1.0, abs(z))
    resid = sp.lam**2 - sp.k**2 + sigma * bg.k0**2
    assert abs(resid) <= 1e-12 * max(1.0, abs(z) ** 2)
    # two gamma representations agree away from branch points
    if abs(sp.gamma) > 1e-3:
        alt = 2.0 * sp.lam / (sp.lam + sp.k)
        assert abs(sp.gamma - alt) <= 1e-12 * max(1.0, abs(alt))


@given(annulus, st.floats(min_value=-3, max_value=3), st.floats(min_value=-3, max_value=3))
@settings(max_examples=80)
def test_theta_conjugation_symmetry(z, x, t):
    assert abs(theta(x, t, np.conj(z), FOC) - np.conj(theta(x, t, z, FOC))) <= 1e-12 * max(
        1.0, abs(theta(x, t, z, FOC))
    )


def test_im_lambda_positive_in_dplus():
    rng = np.random.default_rng(11)
    count = 0
    while count < 1000:
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(z) < 0.05:
            continue
        if classify_region(z, FOC) is Region.D_PLUS:
            assert uniformize(z, FOC).lam.imag > 0
            count += 1


def test_region_parity_defocusing():
    rng = np.random.default_rng(5)
    for _ in range(300):
        z = complex(rng.uniform(-4, 4), rng.uniform(0.05, 4))
        if classify_region(z, DEF) is Region.D_PLUS:
            assert classify_region(np.conj(z), DEF) is Region.D_MINUS


def test_contour_defocusing_has_no_circle():
    nodes = contour_samples(DEF, 64, 16, 5.0)
    assert all(n.part == "real" for n in nodes)


def test_contour_focusing_nodes_avoid_branch_points():
    nodes = contour_samples(FOC, 16, 4, 5.0)
    circle = [n for n in nodes if n.part == "circle"]
    assert len(circle) == 4
    for n in circle:
        assert min(abs(n.z - 1j), abs(n.z + 1j)) >= 0.9 * FOC.delta_reg
        assert abs(abs(n.z) - 1.0) < 1e-12


def test_contour_circle_weights_cancel():
    nodes = contour_samples(FOC, 32, 512, 5.0)
    total = sum(n.weight for n in nodes if n.part == "circle")
    assert abs(total) < 1e-8


def test_contour_bad_truncation():
    with pytest.raises(BadContour):
        contour_samples(FOC, 16, 8, 0.5)


def test_contour_quadrature_integrates_moments():
    # integral of z over [-L, L] with the focusing orientation:
    # outer parts (+) give 0 by symmetry; inner parts reversed give
    # -(k0^2/2 - 0) - (0 - k0^2/2)... net zero as well; use z^2 instead.
    nodes = contour_samples(FOC, 400, 8, 3.0)
    real = [n for n in nodes if n.part == "real"]
    val = sum(n.weight * n.z**2 for n in real)
    # int z^2 over [-3,-1]+[1,3] minus int over [-1,1] = (2/3)(27-1)-(2/3) *... :
    outer = 2.0 * (27 - 1) / 3.0
    inner = 2.0 / 3.0
    assert abs(val - (outer - inner)) < 1e-8


def test_background_validation():
    with pytest.raises(ValueError):
        Background(sigma=-1, k0=0.0, alpha=1, beta=0, Qplus=EYE, Qminus=EYE)
    with pytest.raises(ValueError):
        Background(sigma=-1, k0=1.0, alpha=1, beta=0, Qplus=2 * EYE, Qminus=EYE)
    with pytest.raises(ValueError):
        Background(sigma=2, k0=1.0, alpha=1, beta=0, Qplus=EYE, Qminus=EYE)
    asym = np.array([[0, 1], [-1, 0]], dtype=complex)  # unitary but antisymmetric
    with pytest.raises(ValueError):
        Background(sigma=-1, k0=1.0, alpha=1, beta=0, Qplus=asym, Qminus=asym)
    # off-diagonal symmetric background is legitimate
    offdiag = np.array([[0, 1], [1, 0]], dtype=complex)
    Background(sigma=-1, k0=1.0, alpha=1, beta=0, Qplus=offdiag, Qminus=offdiag)
    # phase-rotated diagonal background, as produced by left-limit measurement
    ph = np.exp(1.854590436j)
    Background(sigma=-1, k0=1.0, alpha=1, beta=0, Qplus=EYE, Qminus=ph * EYE)
