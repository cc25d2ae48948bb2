import json
import math

import numpy as np
import pytest
from scipy.special import roots_legendre

from quadpencil.assembly import build_pencil, moments, pencil_circle_sin2
from quadpencil.errors import NoSolutionFound
from quadpencil.model import MomentOracle, QuadratureRule
from quadpencil.rules import circle_rule, gauss_rule
from quadpencil.verify import brute_force_rule, check_exactness, legendre_roots


class TestCheckExactness:
    def test_midpoint_rule(self):
        rule = QuadratureRule([0.5], [1.0], "interval", 1)
        report = check_exactness(rule, moments("unit", (0, 1)), degrees=range(3))
        assert [r.passed for r in report.rows] == [True, True, False]
        assert report.rows[2].defect == pytest.approx(1 / 12)
        assert not report.passed
        assert [r.degree for r in report.failures()] == [2]

    def test_gauss_rule_passes(self):
        rule = gauss_rule(build_pencil("interval", "unit", (-1, 1), 6, "recursion"))
        report = check_exactness(rule, moments("unit", (-1, 1)))
        assert report.passed
        assert len(report.rows) == 14

    def test_perturbed_weight_fails(self):
        rule = gauss_rule(build_pencil("interval", "unit", (-1, 1), 3, "recursion"))
        w = rule.weights.copy()
        w[1] += 1e-3
        bad = QuadratureRule(rule.nodes, w, "interval", rule.exact_degree)
        assert not check_exactness(bad, moments("unit", (-1, 1))).passed

    def test_circle_range(self):
        rule = circle_rule(pencil_circle_sin2(3))
        report = check_exactness(rule, moments("sin2"))
        assert [r.degree for r in report.rows] == list(range(-3, 5))
        assert report.passed

    def test_report_formats(self):
        rule = QuadratureRule([0.5], [1.0], "interval", 2)
        report = check_exactness(rule, moments("unit", (0, 1)))
        records = json.loads(report.to_json())
        assert records[2] == {"degree": 2, "defect": pytest.approx(1 / 12), "pass": False}
        text = report.to_text().splitlines()
        assert text[0].split() == ["degree", "defect", "bound", "pass"]
        assert len({len(line) for line in text[:-1]}) == 1
        assert "FAIL" in text[-1]

    def test_tight_tolerance_may_fail(self):
        rule = gauss_rule(build_pencil("interval", "unit", (-1, 1), 10, "monomial"))
        report = check_exactness(rule, moments("unit", (-1, 1)), tol=1e-15)
        assert len(report.rows) == 22
        assert report.max_defect > 1e-15


class TestBruteForce:
    def test_one_node(self):
        r = brute_force_rule(moments("unit", (0, 1)), 0)
        np.testing.assert_allclose(r.nodes, [0.5])
        np.testing.assert_allclose(r.weights, [1.0])

    def test_two_nodes(self):
        r = brute_force_rule(moments("unit", (-1, 1)), 1)
        np.testing.assert_allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-12)
        np.testing.assert_allclose(r.weights, [1, 1], rtol=1e-12)

    @pytest.mark.parametrize("n", range(3))
    def test_inv_one_plus_x(self, n):
        m = moments("inv_one_plus_x", (0, 1))
        r = brute_force_rule(m, n)
        res = [abs(r.apply(lambda x: x**k) - m(k)) for k in range(2 * n + 2)]
        assert max(res) < 1e-12
        g = gauss_rule(build_pencil("interval", "inv_one_plus_x", (0, 1), n, "recursion"))
        np.testing.assert_allclose(r.nodes, g.nodes, atol=1e-8)
        np.testing.assert_allclose(r.weights, g.weights, atol=1e-8)

    def test_limited_to_small_rules(self):
        with pytest.raises(ValueError):
            brute_force_rule(moments("unit", (0, 1)), 3)

    def test_no_admissible_solution(self):
        # moments of a signed measure: 1 at 0 minus 1 at 1, no positive rule exists
        oracle = MomentOracle("interval", lambda k: (1.0 if k == 0 else 0.0) - 1.0, (0, 1))
        with pytest.raises(NoSolutionFound):
            brute_force_rule(oracle, 1, restarts=5)


class TestLegendreRoots:
    def test_low_degrees(self):
        assert legendre_roots(0) == []
        assert legendre_roots(1) == [0.0]
        np.testing.assert_allclose(legendre_roots(2), [-1 / math.sqrt(3), 1 / math.sqrt(3)],
                                   rtol=1e-15)

    def test_degree_five_symmetric(self):
        x = np.array(legendre_roots(5))
        assert len(set(x)) == 5
        np.testing.assert_allclose(x, -x[::-1], atol=1e-15)

    @pytest.mark.parametrize("d", range(1, 16))
    def test_against_scipy(self, d):
        np.testing.assert_allclose(legendre_roots(d), roots_legendre(d)[0], atol=1e-14)
