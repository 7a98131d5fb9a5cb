import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from genzgamma import DomainError
from genzgamma.explorer import (
    BOUNDARY_XTOL,
    Axis,
    default_axes,
    problem1_value,
    problem2_value,
    problem_value,
    scan,
    thin_axes,
)


def mp_p1(p, q, t):
    q, t = mpmath.mpf(q), mpmath.mpf(t)
    psi_q = -mpmath.log(1 - q) + mpmath.log(q) * mpmath.nsum(
        lambda n: q ** (n * t) / (1 - q**n), [1, mpmath.inf])
    psi_p = mpmath.log(p) - mpmath.fsum(1 / (n + t) for n in range(p + 1))
    return mpmath.log(p) + mpmath.log(1 - q) + psi_q - psi_p


def mp_p2(p, q, k, t):
    q, k, t = mpmath.mpf(q), mpmath.mpf(k), mpmath.mpf(t)
    finite = mpmath.fsum(q ** (n * t) / (1 - q**n) for n in range(1, p + 1))
    infinite = mpmath.nsum(lambda n: q ** (n * k * t) / (1 - q ** (n * k)), [1, mpmath.inf])
    return mpmath.log(q) * (finite - infinite)


SMALL_P1 = [Axis.integers("p", 1, 4), Axis.linear("q", 0.3, 0.95, 6), Axis.log("t", 0.2, 5.0, 5)]


class TestProblemValues:
    @pytest.mark.parametrize("p,q,t,verdict", [(1, 0.5, 1.0, "certified_positive"),
                                               (10, 0.99, 1.0, "certified_nonpositive"),
                                               (3, 0.5, 100.0, "certified_positive")])
    def test_p1_examples(self, p, q, t, verdict):
        c = problem1_value(p, q, t)
        assert c.value == pytest.approx(float(mp_p1(p, q, t)), abs=1e-11)
        assert c.verdict == verdict

    def test_p1_reference_value(self):
        # mpmath: P1(1, 0.5, 1) = 0.386323785084
        assert problem1_value(1, 0.5, 1.0).value == pytest.approx(0.386323785084, abs=1e-11)

    @pytest.mark.parametrize("p,q,k,t,verdict", [(5, 0.5, 0.5, 1.0, "certified_positive"),
                                                 (5, 0.5, 2.0, 1.0, "certified_nonpositive"),
                                                 (5, 0.5, 1.0, 1.0, "certified_positive")])
    def test_p2_examples(self, p, q, k, t, verdict):
        c = problem2_value(p, q, k, t)
        assert c.value == pytest.approx(float(mp_p2(p, q, k, t)), abs=1e-11)
        assert c.verdict == verdict

    def test_p2_at_k1_is_the_missing_tail(self):
        # at k = 1 only the terms n > p survive, each with sign of ln q
        c = problem2_value(50, 0.5, 1.0, 1.0)
        ref = float(mp_p2(50, 0.5, 1.0, 1.0))
        assert 0 < ref < 1e-15
        assert abs(c.value - ref) <= c.tail_bound
        assert c.verdict == "inconclusive"

    @settings(max_examples=100)
    @given(p=st.integers(1, 30), q=st.floats(0.05, 0.95), t=st.floats(0.05, 20))
    def test_p1_against_mpmath(self, p, q, t):
        c = problem1_value(p, q, t)
        assert c.value == pytest.approx(float(mp_p1(p, q, t)), abs=1e-10)

    @settings(max_examples=100)
    @given(p=st.integers(1, 15), q=st.floats(0.05, 0.95), k=st.floats(0.2, 5), t=st.floats(0.05, 20))
    def test_p2_against_mpmath(self, p, q, k, t):
        c = problem2_value(p, q, k, t)
        assert c.value == pytest.approx(float(mp_p2(p, q, k, t)), abs=1e-10)

    def test_unknown_problem(self):
        with pytest.raises(DomainError):
            problem_value("P3", {"p": 1, "q": 0.5, "t": 1.0})


class TestAxes:
    def test_validation(self):
        with pytest.raises(DomainError):
            Axis("q", ())
        with pytest.raises(DomainError):
            Axis("q", (0.5, 0.4))
        with pytest.raises(DomainError):
            Axis("q", (0.5, 1.0))
        with pytest.raises(DomainError):
            Axis("z", (1.0,))

    def test_defaults(self):
        assert [len(a) for a in default_axes("P1")] == [20, 19, 20]
        assert [len(a) for a in default_axes("P2")] == [10, 9, 16, 10]

    def test_thinning(self):
        axes = thin_axes(default_axes("P1"), 1)
        assert [len(a) for a in axes] == [1, 1, 1]
        axes = thin_axes(default_axes("P1"), 500)
        total = 1
        for a in axes:
            total *= len(a)
        assert 1 <= total <= 500


class TestScan:
    def test_single_cell(self):
        m = scan("P1", [Axis("p", (1,)), Axis("q", (0.5,)), Axis("t", (1.0,))])
        assert m.shape == (1, 1, 1)
        assert m.verdicts == ["positive"]
        assert m.boundaries == [] and m.integer_transitions == []

    def test_oversized_grid_rejected(self):
        huge = [Axis.integers("p", 1, 1000), Axis.linear("q", 0.01, 0.99, 200), Axis.log("t", 0.1, 10, 100)]
        with pytest.raises(DomainError):
            scan("P1", huge)

    def test_wrong_axes_rejected(self):
        with pytest.raises(DomainError):
            scan("P1", [Axis("p", (1,)), Axis("q", (0.5,))])

    def test_csv_header_and_rows(self):
        m = scan("P1", SMALL_P1)
        lines = m.to_csv().splitlines()
        assert lines[0] == "p,q,t,value,tail_bound,verdict"
        assert len(lines) == 1 + 4 * 6 * 5
        assert lines[1].startswith("1,")

    def test_deterministic_and_worker_invariant(self):
        a = scan("P1", SMALL_P1)
        b = scan("P1", SMALL_P1)
        c = scan("P1", SMALL_P1, workers=2)
        assert a.to_csv() == b.to_csv() == c.to_csv()
        assert a.to_dict() == c.to_dict()

    def test_boundaries_reprobe(self):
        m = scan("P1", SMALL_P1)
        assert m.boundaries
        for b in m.boundaries:
            assert b.lo < b.location < b.hi
            below = problem_value("P1", {**b.fixed, b.axis: b.location - 1e-6}).value
            above = problem_value("P1", {**b.fixed, b.axis: b.location + 1e-6}).value
            assert below * above < 0
            assert abs(b.location - b.lo) > BOUNDARY_XTOL or abs(b.hi - b.location) > BOUNDARY_XTOL

    def test_integer_axis_not_refined(self):
        m = scan("P1", SMALL_P1)
        assert all(b.axis != "p" for b in m.boundaries)
        assert all(b.location is None and b.hi == b.lo + 1 for b in m.integer_transitions)

    def test_p2_k_axis_boundaries(self):
        axes = [Axis("p", (5,)), Axis("q", (0.5,)), Axis.linear("k", 0.25, 4.0, 16), Axis("t", (1.0,))]
        m = scan("P2", axes)
        ks = [b for b in m.boundaries if b.axis == "k"]
        assert len(ks) == 1
        # the crossing sits just above k = 1, where P2 is still slightly positive
        assert 1.0 < ks[0].location < 1.25
        assert ks[0].lower_verdict == "positive" and ks[0].upper_verdict == "nonpositive"
