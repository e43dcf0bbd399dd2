import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vqsearch.circuits import ProblemInstance, constructed_angles, prepare_psi1
from vqsearch.optimizer import RunRecord, objective
from vqsearch.reachability import (
    Definition,
    constructed_reachability,
    empirical_reachability,
    hilbert_extremal,
    reachability_from_extremal,
)


def record(f, n=2):
    return RunRecord(0, [0.0] * (n + 1), [0.0] * (n + 1), [f], 1, "MAX_ITERATIONS", (2**n) * f * f)


class TestHilbertExtremal:
    def test_eq18(self):
        assert hilbert_extremal(2, Definition.EQ18) == -0.5

    def test_eq19(self):
        assert hilbert_extremal(2, "eq19") == 0.5

    def test_n0(self):
        with pytest.raises(ValueError):
            hilbert_extremal(0)


class TestFromExtremal:
    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_constructed_value(self, n):
        N = 2**n
        assert reachability_from_extremal((1 - 1 / N) / math.sqrt(N), n) == pytest.approx(1 / N, abs=1e-15)

    def test_perfect(self):
        assert reachability_from_extremal(0.5, 2) == 0.0

    def test_none(self):
        assert reachability_from_extremal(0.0, 2) == 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            reachability_from_extremal(0.51, 2)

    @given(st.integers(1, 20), st.floats(0, 1))
    def test_sign_insensitive(self, n, frac):
        a = frac / math.sqrt(2**n)
        assert reachability_from_extremal(a, n) == reachability_from_extremal(-a, n)
        assert 0 <= reachability_from_extremal(a, n) <= 1

    @pytest.mark.parametrize("n", [2, 5, 10])
    def test_eq18_eq19_disagree_on_negative_optimum(self, n):
        N = 2**n
        a = -(1 - 1 / N) / math.sqrt(N)
        r18 = reachability_from_extremal(a, n, Definition.EQ18)
        r19 = reachability_from_extremal(a, n, Definition.EQ19)
        assert r18 == pytest.approx(1 / N)
        assert reachability_from_extremal(-a, n, Definition.EQ18) == pytest.approx(2 - 1 / N)
        assert r19 == pytest.approx(1 / N)
        assert reachability_from_extremal(-a, n, Definition.EQ18) != pytest.approx(r19)


class TestConstructed:
    def test_n6_k39(self):
        rep = constructed_reachability(ProblemInstance(6, 39))
        assert rep.reachability == pytest.approx(1 / 64, abs=1e-12)
        assert rep.hilbert_extremal_value == pytest.approx(1 / 8)
        assert not rep.is_upper_bound

    def test_n1_k1(self):
        assert constructed_reachability(ProblemInstance(1, 1)).reachability == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("k", [0, 511, 1023])
    def test_n10_small(self, k):
        assert constructed_reachability(ProblemInstance(10, k)).reachability < 1e-3


class TestEmpirical:
    def test_includes_constructed(self):
        inst = ProblemInstance(5, 12)
        f = objective(prepare_psi1(inst), constructed_angles(inst))
        rep = empirical_reachability([record(f, 5), record(0.01, 5)], 5)
        assert rep.reachability <= 1 / 32 + 1e-12
        assert rep.is_upper_bound

    def test_all_failed(self):
        rep = empirical_reachability([record(1e-6), record(-2e-6)], 2)
        assert rep.reachability == pytest.approx(1.0, abs=1e-5)

    def test_perfect_record(self):
        assert empirical_reachability([record(-0.5)], 2).reachability == 0.0

    def test_empty(self):
        with pytest.raises(ValueError):
            empirical_reachability([], 3)

    def test_csv(self):
        rep = constructed_reachability(ProblemInstance(3, 0))
        assert rep.csv_header().count(",") == rep.csv_row().count(",")
        assert rep.csv_row().startswith("3,EQ19,")
