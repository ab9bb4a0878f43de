"""Metric-family constructors, invariants, and configuration ingestion."""
from fractions import Fraction as F

import pytest

from conftest import NC4, NC5, poly
from ppcheck import (EXACT, build_galaev, build_perturbed_minkowski,
                     build_ppwave, build_two_symmetric, build_walker,
                     conformal_rescale, parse_metric_config, sample_points)
from ppcheck.metrics import ConfigError, FamilyError, PointPlan
from ppcheck.polynomials import parse_polynomial


def p5(text):
    return parse_polynomial(text, NC5)


class TestPpwave:
    def test_component_matrix_shape(self):
        spec = build_ppwave(poly("x1^2"), d=2)
        g = spec.components
        one, zero = poly("1"), poly("0")
        assert g[0][3] == one and g[3][0] == one     # g_uv = g_vu = 1
        assert g[0][0] == poly("x1^2")               # g_uu = H
        assert g[1][1] == one and g[2][2] == one
        assert g[3][3] == zero and g[1][2] == zero

    def test_v_dependence_rejected(self):
        with pytest.raises(FamilyError):
            build_ppwave(poly("v*x1^2"), d=2)

    def test_flat_when_potential_zero(self):
        spec = build_ppwave(poly("0"), d=2)
        assert spec.expected_psi == poly("0")

    def test_radiation_psi(self):
        spec = build_ppwave(poly("x1^2 + x2^2"), d=2)
        assert spec.expected_psi == poly("-2")

    def test_vacuum_psi(self):
        spec = build_ppwave(poly("x1^2 - x2^2"), d=2)
        assert spec.expected_psi == poly("0")


class TestGalaev:
    def test_lambda_sum_enforced(self):
        with pytest.raises(FamilyError, match="lambda sum must be zero"):
            build_galaev(3, [1, 1, -1], p5("0"), p5("u"))

    def test_flagship_potential(self, flagship_spec):
        assert flagship_spec.potential == p5("u*(x1^2 + x2^2 + 4*x3^2)")

    def test_flat_when_zero_inputs(self):
        spec = build_galaev(3, [1, 1, -2], p5("0"), p5("0"))
        assert spec.potential == p5("0")

    def test_recorded_psi_comes_from_potential(self, flagship_spec):
        # -1/2 * transverse Laplacian of u*(x1^2+x2^2+4x3^2) = -6u
        assert flagship_spec.expected_psi == p5("-6*u")

    def test_d2_weyl_warning(self):
        spec = build_galaev(2, [1, -1], poly("0"), poly("u"))
        assert spec.warnings


class TestTwoSymmetric:
    def test_potential_and_psi(self):
        spec = build_two_symmetric([F(1), F(2)],
                                   [[F(0), F(0)], [F(0), F(0)]])
        assert spec.potential == poly("u*x1^2 + 2*u*x2^2")
        assert spec.expected_psi == poly("-3*u")

    def test_ordering_enforced(self):
        with pytest.raises(FamilyError):
            build_two_symmetric([F(2), F(1)], [[F(0), F(0)], [F(0), F(0)]])

    def test_negative_leading_coefficient_rejected(self):
        with pytest.raises(FamilyError):
            build_two_symmetric([F(-1), F(1)], [[F(0), F(0)], [F(0), F(0)]])


class TestWalker:
    def test_degenerate_transverse_block_rejected(self):
        one, zero = poly("1"), poly("0")
        with pytest.raises(FamilyError):
            build_walker(poly("v*x1"), [zero, zero],
                         [[zero, zero], [zero, one]], d=2)

    def test_v_dependence_allowed(self):
        one, zero = poly("1"), poly("0")
        spec = build_walker(poly("v*x1"), [zero, zero],
                            [[one, zero], [zero, one]], d=2)
        assert spec.family == "walker"


class TestPerturbedMinkowski:
    def test_seed_determinism(self):
        a = build_perturbed_minkowski(seed=7)
        b = build_perturbed_minkowski(seed=7)
        assert a.components == b.components

    def test_different_seeds_differ(self):
        a = build_perturbed_minkowski(seed=7)
        b = build_perturbed_minkowski(seed=8)
        assert a.components != b.components


class TestConformalRescale:
    def test_square_kind_multiplies_components(self):
        spec = build_ppwave(poly("x1^2"), d=2)
        s = poly("u/5")
        scaled = conformal_rescale(spec, s, kind="square")
        factor = (poly("1") + s) * (poly("1") + s)
        assert scaled.components[0][3] == factor

    def test_exp_kind_stores_sigma(self):
        spec = build_ppwave(poly("x1^2"), d=2)
        scaled = conformal_rescale(spec, poly("u/5"), kind="exp")
        assert scaled.conformal_sigma == poly("u/5")


class TestSamplePoints:
    def test_grid_count_and_determinism(self, flagship_spec):
        plan = PointPlan("grid", seed=0, count=5)
        pts = sample_points(flagship_spec, plan)
        assert len(pts) == 5
        assert pts == sample_points(flagship_spec, plan)
        assert all(len(p) == 5 for p in pts)

    def test_random_seeded(self, flagship_spec):
        a = sample_points(flagship_spec, PointPlan("random", seed=1, count=4))
        b = sample_points(flagship_spec, PointPlan("random", seed=1, count=4))
        c = sample_points(flagship_spec, PointPlan("random", seed=2, count=4))
        assert a == b and a != c


MINIMAL = """
{
  "family": "galaev",
  "d": 3,
  "params": {"lambda": [1, 1, -2], "a": "0", "F": "u"},
  "mode": "exact"
}
"""


class TestConfigParsing:
    def test_minimal_galaev_round_trip(self, flagship_spec):
        spec, config = parse_metric_config(MINIMAL)
        assert spec.components == flagship_spec.components
        assert config.mode == EXACT and config.jet_order == 4

    def test_lambda_sum_error_surfaces(self):
        bad = MINIMAL.replace("[1, 1, -2]", "[1, 1, -1]")
        with pytest.raises(ConfigError, match="lambda sum must be zero"):
            parse_metric_config(bad)

    def test_custom_components_accepted(self):
        doc = """
        {
          "family": "custom",
          "params": {
            "coords": ["x0", "x1", "x2", "x3"],
            "components": {"0,0": "-1 - x1^2", "1,1": "1", "2,2": "1",
                           "3,3": "1 + x0^2", "0,1": "x2/3"}
          },
          "mode": "exact"
        }
        """
        spec, _ = parse_metric_config(doc)
        assert spec.family == "custom" and spec.n == 4
        assert spec.components[0][1] == spec.components[1][0]

    def test_invalid_json_diagnosed(self):
        with pytest.raises(ConfigError, match="invalid JSON"):
            parse_metric_config("{not json}")

    def test_unknown_key_diagnosed(self):
        with pytest.raises(ConfigError, match="unknown configuration key"):
            parse_metric_config(MINIMAL.replace('"mode"', '"Mode"'))

    def test_unknown_family_diagnosed(self):
        with pytest.raises(ConfigError, match="family"):
            parse_metric_config(MINIMAL.replace("galaev", "galaxy"))

    def test_bad_jet_order_diagnosed(self):
        doc = MINIMAL.rstrip().rstrip("}") + ', "jet_order": 1}'
        with pytest.raises(ConfigError, match="jet_order"):
            parse_metric_config(doc)

    def test_point_count_capped(self):
        doc = MINIMAL.rstrip().rstrip("}") + \
            ', "points": {"strategy": "grid", "count": 26}}'
        with pytest.raises(ConfigError, match="count"):
            parse_metric_config(doc)
