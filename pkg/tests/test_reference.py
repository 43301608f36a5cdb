import math

import numpy as np
import pytest
from numpy.polynomial import legendre as npleg
from scipy import integrate, stats

from legcop.metrics import empirical_copula_grid
from legcop.reference import (
    FAMILIES,
    CopulaModel,
    cdf,
    conditional_cdf,
    density,
    elliptical_cdf_qmc,
    from_kendall_tau,
    gaussian_l2_norm_sq,
    model_coefficients,
    sample,
    tau_of_parameter,
)

DEPENDENT = ("clayton", "frank", "gaussian", "gumbel", "joe", "student")
ARCHIMEDEAN = ("clayton", "frank", "gumbel", "joe")
TAUS = (0.3, 0.55, 0.8)


def gl01(k):
    t, w = npleg.leggauss(k)
    return (t + 1) / 2, w / 2


# -- tau inversion -----------------------------------------------------------


@pytest.mark.parametrize(
    "family, tau, expected",
    [("clayton", 0.5, 2.0), ("gumbel", 0.8, 5.0), ("gaussian", 0.5, math.sin(math.pi / 4))],
)
def test_closed_form_inversions(family, tau, expected):
    assert from_kendall_tau(family, tau).parameter == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("family", DEPENDENT)
@pytest.mark.parametrize("tau", TAUS + (0.05, 0.95))
def test_inversion_round_trip(family, tau):
    model = from_kendall_tau(family, tau)
    assert abs(tau_of_parameter(family, model.parameter) - tau) <= 1e-10


def test_frank_negative_tau():
    pos = from_kendall_tau("frank", 0.3)
    neg = from_kendall_tau("frank", -0.3)
    assert neg.parameter == pytest.approx(-pos.parameter, abs=1e-12)


@pytest.mark.parametrize("family", ARCHIMEDEAN)
@pytest.mark.parametrize("tau", TAUS)
def test_tau_against_conditional_integral(family, tau):
    # tau = 1 - 4 * int int dC/du dC/dv, a bounded integrand; no tau formula involved
    model = from_kendall_tau(family, tau)
    x, w = gl01(300)
    U, V = np.meshgrid(x, x, indexing="ij")
    du = conditional_cdf(model, V, U)
    dv = conditional_cdf(model, U, V)
    assert 1 - 4 * (np.outer(w, w) * du * dv).sum() == pytest.approx(tau, abs=2e-5)


@pytest.mark.parametrize(
    "family, tau",
    [("clayton", -0.2), ("gumbel", -0.1), ("joe", -0.5), ("frank", 0.0), ("gaussian", 1.0), ("independence", 0.2)],
)
def test_unattainable_tau(family, tau):
    with pytest.raises(ValueError):
        from_kendall_tau(family, tau)


@pytest.mark.parametrize(
    "family, parameter, dimension",
    [("clayton", 0.0, 2), ("gumbel", 0.5, 2), ("joe", 0.9, 2), ("frank", 0.0, 2), ("frank", -2.0, 3),
     ("gaussian", 1.0, 2), ("gaussian", -0.6, 3), ("nope", 1.0, 2), ("clayton", 1.0, 4)],
)
def test_invalid_models(family, parameter, dimension):
    with pytest.raises(ValueError):
        CopulaModel(family, parameter, dimension)


# -- sampling ----------------------------------------------------------------


def test_sampling_deterministic():
    model = from_kendall_tau("gumbel", 0.55)
    np.testing.assert_array_equal(sample(model, 50, 3), sample(model, 50, 3))
    assert not np.array_equal(sample(model, 50, 3), sample(model, 50, 4))
    with pytest.raises(ValueError):
        sample(model, 0, 1)


def test_independence_and_clayton_tau():
    x = sample(CopulaModel("independence"), 10_000, 1)
    assert abs(stats.kendalltau(x[:, 0], x[:, 1])[0]) <= 0.02
    x = sample(CopulaModel("clayton", 2.0), 10_000, 2)
    assert 0.47 <= stats.kendalltau(x[:, 0], x[:, 1])[0] <= 0.53


@pytest.mark.parametrize("family", DEPENDENT)
@pytest.mark.parametrize("dimension", [2, 3])
def test_sample_kendall_tau(family, dimension):
    x = sample(from_kendall_tau(family, 0.55, dimension), 4000, 11)
    assert np.all((x >= 0) & (x <= 1))
    for i in range(dimension):
        for j in range(i + 1, dimension):
            # tau standard error is below 0.01 at n = 4000
            assert abs(stats.kendalltau(x[:, i], x[:, j])[0] - 0.55) <= 0.035


@pytest.mark.parametrize("family", DEPENDENT)
def test_empirical_copula_matches_cdf(family):
    nodes = np.arange(1, 10) / 10
    grid = np.column_stack([g.ravel() for g in np.meshgrid(nodes, nodes, indexing="ij")])
    for tau in TAUS:
        model = from_kendall_tau(family, tau)
        emp = empirical_copula_grid(sample(model, 100_000, 21), nodes).ravel()
        assert np.abs(emp - cdf(model, grid)).max() <= 0.01


@pytest.mark.parametrize("family", ("clayton", "gumbel", "gaussian"))
def test_trivariate_empirical_copula_matches_cdf(family):
    nodes = np.array([0.2, 0.5, 0.8])
    grid = np.column_stack([g.ravel() for g in np.meshgrid(nodes, nodes, nodes, indexing="ij")])
    model = from_kendall_tau(family, 0.55, 3)
    emp = empirical_copula_grid(sample(model, 50_000, 5), nodes).ravel()
    assert np.abs(emp - cdf(model, grid)).max() <= 0.01


# -- cdf ---------------------------------------------------------------------


def test_cdf_examples():
    assert cdf(CopulaModel("clayton", 2.0), [0.5, 0.5]) == pytest.approx(7**-0.5, abs=1e-12)
    assert cdf(CopulaModel("independence"), [0.3, 0.4]) == pytest.approx(0.12, abs=1e-15)
    with pytest.raises(ValueError):
        cdf(CopulaModel("independence"), [0.3, 1.4])


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("dimension", [2, 3])
def test_grounded_and_margins(family, dimension):
    model = from_kendall_tau(family, 0.0 if family == "independence" else 0.55, dimension)
    # trivariate elliptical CDFs are QMC estimates
    tol = 1e-4 if dimension == 3 and family in ("gaussian", "student") else 1e-10
    u = np.linspace(0.05, 0.95, 7)
    ones = np.ones((7, dimension))
    for j in range(dimension):
        pts = ones.copy()
        pts[:, j] = u
        assert np.abs(cdf(model, pts) - u).max() <= tol
        pts[:, (j + 1) % dimension] = 0.0
        assert np.all(cdf(model, pts) == 0.0)


def plackett_gaussian(rho, x, y):
    """Phi2(x, y; rho) = Phi(x)Phi(y) + int_0^rho phi2(x, y; r) dr."""
    def phi2(r):
        return math.exp(-(x * x - 2 * r * x * y + y * y) / (2 * (1 - r * r))) / (2 * math.pi * math.sqrt(1 - r * r))

    return stats.norm.cdf(x) * stats.norm.cdf(y) + integrate.quad(phi2, 0, rho, epsabs=1e-14)[0]


@pytest.mark.parametrize("tau", TAUS)
def test_gaussian_cdf_against_plackett(tau, rng):
    model = from_kendall_tau("gaussian", tau)
    for u in rng.random((10, 2)):
        x, y = stats.norm.ppf(u)
        assert cdf(model, u) == pytest.approx(plackett_gaussian(model.parameter, x, y), abs=1e-8)


def test_student_cdf_against_double_integral(rng):
    model = from_kendall_tau("student", 0.55)
    rho, nu = model.parameter, model.dof
    dist = stats.multivariate_t(loc=[0, 0], shape=[[1, rho], [rho, 1]], df=nu)
    for u in rng.random((4, 2)):
        a, b = stats.t.ppf(u, nu)
        val = integrate.dblquad(lambda y, x: dist.pdf([x, y]), -np.inf, a, -np.inf, b, epsabs=1e-10)[0]
        assert cdf(model, u) == pytest.approx(val, abs=1e-8)


@pytest.mark.parametrize("family", ("gaussian", "student"))
def test_trivariate_qmc(family, rng):
    model = from_kendall_tau(family, 0.55, 3)
    pts = 0.05 + 0.9 * rng.random((5, 3))
    est, se = elliptical_cdf_qmc(model, pts)
    assert np.all(se <= 1e-4)
    R = model.correlation
    if family == "gaussian":
        ref = [stats.multivariate_normal.cdf(stats.norm.ppf(p), np.zeros(3), R, abseps=1e-7) for p in pts]
    else:
        dist = stats.multivariate_t(np.zeros(3), R, df=model.dof)
        ref = [dist.cdf(stats.t.ppf(p, model.dof), maxpts=2_000_000, random_state=1) for p in pts]
    np.testing.assert_allclose(est, ref, atol=2e-4)
    np.testing.assert_array_equal(est, elliptical_cdf_qmc(model, pts)[0])


# -- density -----------------------------------------------------------------


def test_density_examples():
    assert density(CopulaModel("clayton", 2.0), [0.5, 0.5]) == pytest.approx(3 * 0.25**-3 * 7**-2.5, rel=1e-12)
    assert density(CopulaModel("independence", 0.0, 3), [0.2, 0.4, 0.9]) == 1.0
    with pytest.raises(ValueError):
        density(CopulaModel("clayton", 2.0), [0.0, 0.5])
    with pytest.raises(ValueError):
        density(CopulaModel("clayton", 2.0), [1.0, 0.5])


@pytest.mark.parametrize("family", DEPENDENT)
@pytest.mark.parametrize("tau", TAUS)
def test_density_matches_cdf_differences(family, tau):
    model = from_kendall_tau(family, tau)
    rng = np.random.default_rng(3)
    h = 1e-4
    for u in 0.05 + 0.9 * rng.random((20, 2)):
        fd = (cdf(model, u + [h, h]) - cdf(model, u + [h, -h]) - cdf(model, u + [-h, h]) + cdf(model, u - [h, h])) / (4 * h * h)
        # absolute floor: cancellation dominates where the density is ~1e-9
        assert fd == pytest.approx(density(model, u), rel=1e-3, abs=1e-5)


@pytest.mark.parametrize("family", ARCHIMEDEAN)
def test_trivariate_density_matches_cdf_differences(family):
    model = from_kendall_tau(family, 0.55, 3)
    rng = np.random.default_rng(4)
    h = 1e-3
    signs = np.array(list(np.ndindex(2, 2, 2))) * 2 - 1
    for u in 0.1 + 0.8 * rng.random((10, 3)):
        fd = (np.prod(signs, axis=1) * cdf(model, u + h * signs)).sum() / (8 * h**3)
        assert fd == pytest.approx(density(model, u), rel=1e-3)


@pytest.mark.parametrize("family", DEPENDENT)
@pytest.mark.parametrize("tau", TAUS)
def test_density_mass(family, tau):
    # Gauss-Legendre in logit coordinates on [eps, 1 - eps]
    eps = 1e-3
    t, w = npleg.leggauss(300)
    a = math.log(eps / (1 - eps))
    z = (t + 1) / 2 * (-2 * a) + a
    x = 1 / (1 + np.exp(-z))
    wx = w / 2 * (-2 * a) * x * (1 - x)
    U, V = np.meshgrid(x, x, indexing="ij")
    mass = (np.outer(wx, wx).ravel() * density(from_kendall_tau(family, tau), np.column_stack([U.ravel(), V.ravel()]))).sum()
    assert abs(mass - 1) <= 0.05


def test_gaussian_l2_norm():
    rho = 0.5
    # int c^2 over [eps, 1-eps]^2 in normal scores; grows towards 1 / (1 - rho^2)
    def truncated(eps):
        a = stats.norm.ppf(1 - eps)
        dist = stats.multivariate_normal([0, 0], [[1, rho], [rho, 1]])
        f = lambda y, x: dist.pdf([x, y]) ** 2 / (stats.norm.pdf(x) * stats.norm.pdf(y))
        return integrate.dblquad(f, -a, a, -a, a, epsabs=1e-10)[0]

    vals = [truncated(e) for e in (1e-2, 1e-4, 1e-8)]
    assert vals[0] < vals[1] < vals[2] <= gaussian_l2_norm_sq(rho)
    assert vals[2] == pytest.approx(4 / 3, abs=1e-4)
    assert gaussian_l2_norm_sq(rho) == pytest.approx(4 / 3, abs=1e-15)


# -- true coefficients ---------------------------------------------------------


def test_model_coefficients_gaussian_spearman():
    rho = 0.5
    co = model_coefficients(CopulaModel("gaussian", rho), (4, 4))
    assert co[1, 1] == pytest.approx(6 / math.pi * math.asin(rho / 2), abs=1e-13)
    assert co[0, 0] == pytest.approx(1, abs=1e-13)
    assert np.abs(co[1:, 0]).max() <= 1e-13
    # Parseval: the coefficients' squares add up to the squared norm
    big = model_coefficients(CopulaModel("gaussian", rho), (40, 40))
    mid = model_coefficients(CopulaModel("gaussian", rho), (20, 20))
    # partial sums increase towards the norm; the tail beyond degree 40 is ~2e-3
    assert (mid**2).sum() < (big**2).sum() < 4 / 3
    assert (big**2).sum() == pytest.approx(4 / 3, abs=4e-3)


def test_model_coefficients_frank_spearman():
    model = from_kendall_tau("frank", 0.3)
    th = model.parameter
    d1 = integrate.quad(lambda t: t / math.expm1(t), 0, th)[0] / th
    d2 = 2 * integrate.quad(lambda t: t * t / math.expm1(t), 0, th)[0] / th**2
    spearman = 1 - 12 / th * (d1 - d2)
    assert model_coefficients(model, (1, 1))[1, 1] == pytest.approx(spearman, abs=1e-10)


def test_model_coefficients_independence():
    co = model_coefficients(CopulaModel("independence", 0.0, 3), 2)
    expected = np.zeros((3, 3, 3))
    expected[0, 0, 0] = 1
    np.testing.assert_array_equal(co, expected)
