"""Shared fixtures: metric specs and curvature contexts reused across tests."""
from fractions import Fraction as F

import pytest

from ppcheck import EXACT, build_galaev, build_perturbed_minkowski, build_ppwave
from ppcheck.checks import PointContext
from ppcheck.geometry import CurvatureBundle, metric_at_point
from ppcheck.polynomials import parse_polynomial

NC4 = ("u", "x1", "x2", "v")
NC5 = ("u", "x1", "x2", "x3", "v")


def poly(text, coords=NC4):
    return parse_polynomial(text, coords)


def make_ctx(spec, point, mode=EXACT, order=4, field_coeffs=(1, 1)):
    m = metric_at_point(spec, point, order, mode)
    return PointContext(spec=spec, point=point, mode=mode,
                        bundle=CurvatureBundle(m), field_coeffs=field_coeffs)


@pytest.fixture(scope="session")
def flagship_spec():
    zero = parse_polynomial("0", NC5)
    return build_galaev(3, [1, 1, -2], zero, parse_polynomial("u", NC5))


@pytest.fixture(scope="session")
def flagship_ctx(flagship_spec):
    pt = (F(1), F(1, 3), F(-1, 5), F(2, 7), F(1, 2))
    return make_ctx(flagship_spec, pt)


@pytest.fixture(scope="session")
def flagship_ctx_u2(flagship_spec):
    pt = (F(2), F(1, 3), F(-1, 5), F(2, 7), F(1, 2))
    return make_ctx(flagship_spec, pt)


@pytest.fixture(scope="session")
def perturbed_spec():
    return build_perturbed_minkowski(seed=7)


@pytest.fixture(scope="session")
def perturbed_ctx(perturbed_spec):
    pt = (F(1, 3), F(-1, 5), F(2, 7), F(1, 11))
    return make_ctx(perturbed_spec, pt)


@pytest.fixture(scope="session")
def vacuum_ctx():
    spec = build_ppwave(poly("x1^2 - x2^2"), d=2)
    return make_ctx(spec, (F(1, 2), F(1, 3), F(-1, 5), F(2, 7)))


@pytest.fixture(scope="session")
def quartic_ctx():
    spec = build_ppwave(poly("x1^4"), d=2)
    return make_ctx(spec, (F(1, 2), F(1, 3), F(-1, 5), F(2, 7)))
