import math

import numpy as np
import pytest

import relmech as rm


@pytest.fixture(scope="session")
def mink():
    return rm.minkowski()


@pytest.fixture(scope="session")
def eucl():
    return rm.euclidean()


@pytest.fixture(scope="session")
def schw():
    return rm.schwarzschild(1.0)


@pytest.fixture(scope="session")
def mink_gf(mink):
    return rm.GTensorField.from_metric(mink)


@pytest.fixture(scope="session")
def schw_gf(schw):
    return rm.GTensorField.from_metric(schw)


@pytest.fixture(scope="session")
def uniform_b():
    return rm.uniform_field(b_field=(0.0, 0.0, 1.0))


@pytest.fixture(scope="session")
def n2_gfield():
    """A constant rank-4 velocity form: symmetrized eta x eta plus a small
    fixed perturbation.  Positive on the sampled near-timelike region."""
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    rng = np.random.default_rng(7)
    base = rm.symmetrize(np.einsum("ab,cd->abcd", eta, eta))
    pert = rm.symmetrize(rng.standard_normal((4, 4, 4, 4)))
    return rm.GTensorField.from_constant(base + 0.05 * pert)


def random_point(metric, rng):
    """A chart point inside the metric domain."""
    if metric.catalog_id == "schwarzschild":
        big_m = metric.params.get("M", 1.0)
        return np.array([
            rng.uniform(-1.0, 1.0),
            rng.uniform(3.0 * big_m, 20.0 * big_m),
            rng.uniform(0.4, math.pi - 0.4),
            rng.uniform(0.0, 2.0 * math.pi),
        ])
    return rng.uniform(-2.0, 2.0, metric.dim)


def random_velocity(gfield, x, rng, margin=0.1):
    """Rejection-sample a velocity with G(x, u) > margin."""
    for _ in range(200):
        u = 0.5 * rng.standard_normal(gfield.dim)
        u[0] = math.copysign(1.0 + abs(rng.standard_normal()), rng.standard_normal())
        if rm.g_value(gfield, x, u) > margin:
            return u
    raise RuntimeError("sampling failed")


def random_state(metric, gfield, rng, margin=0.1):
    x = random_point(metric, rng)
    # scale spatial components into the local light cone for curved metrics
    if metric.catalog_id == "schwarzschild":
        from relmech.checks import sample_velocity
        u = sample_velocity(metric, x, rng, margin)
    else:
        u = random_velocity(gfield, x, rng, margin)
    return x, u
