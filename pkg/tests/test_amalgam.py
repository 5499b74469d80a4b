import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import brute_maximal_left, brute_twisted_convolve
from coorbitkit import (
    GridFunction,
    QuasiNormSpec,
    amalgam_norm,
    build_cyclic_phase_space,
    build_real_line,
    convolution_relation_check,
    convolve,
    delta,
    embedding_constant_check,
    indicator,
    involution,
    lpw_norm,
    maximal_left,
    maximal_right,
    symmetrize_weight,
    translate_left,
    translate_right,
    twisted_convolve,
    unit_weight,
)
from coorbitkit.errors import IncompatibleOperandsError

E = float(np.e)


@pytest.fixture(scope="module")
def cyclic8():
    return build_cyclic_phase_space(8)


def random_grid(model, seed, real=False):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=model.size) + (0 if real else 1j * rng.normal(size=model.size))
    return GridFunction(model, v + 0j)


class TestInvolution:
    def test_q_indicator_symmetric(self, cyclic8):
        f = indicator(cyclic8, cyclic8.q_indices)
        assert np.allclose(involution(f).values, f.values)

    def test_cyclic_delta(self):
        m = build_cyclic_phase_space(4)
        f = delta(m, m.index_of((1, 0)))
        assert np.allclose(involution(f).values, delta(m, m.index_of((3, 0))).values)

    def test_line_interval(self):
        m = build_real_line(6.0, 0.25)
        t = 2.0
        f = indicator(m, np.nonzero((m.coords > t) & (m.coords < t + 1))[0])
        expected = indicator(m, np.nonzero((m.coords > -t - 1) & (m.coords < -t))[0])
        assert np.allclose(involution(f).values, expected.values)


class TestLpwNorm:
    def test_zero(self, cyclic8):
        assert lpw_norm(GridFunction(cyclic8, np.zeros(64)), QuasiNormSpec(p=1.0)) == 0.0

    def test_total_mass_n2(self):
        m = build_cyclic_phase_space(2)
        val = lpw_norm(GridFunction(m, np.ones(4)), QuasiNormSpec(p=1.0))
        assert val == pytest.approx(2.0)

    def test_exponential_weight_quadrature(self):
        m = build_real_line(4.0, 0.5)
        f = indicator(m, np.nonzero((m.coords >= 0) & (m.coords <= 1))[0])
        val = lpw_norm(f, QuasiNormSpec(p=1.0, weight=np.exp(m.coords)))
        # closed-interval Riemann sum: first-order boundary error h*(f(0)+f(1))/2
        assert abs(val - (E - 1)) <= m.step * (1 + E) / 2 + m.step
        m2 = build_real_line(4.0, 0.01)
        f2 = indicator(m2, np.nonzero((m2.coords >= 0) & (m2.coords <= 1))[0])
        val2 = lpw_norm(f2, QuasiNormSpec(p=1.0, weight=np.exp(m2.coords)))
        assert abs(val2 - (E - 1)) <= 0.02 * (E - 1)

    def test_p_infinity(self, cyclic8):
        f = random_grid(cyclic8, 0)
        w = 1.0 + np.arange(64.0)
        spec = QuasiNormSpec(p=np.inf, weight=w)
        assert lpw_norm(f, spec) == pytest.approx((np.abs(f.values) * w).max())


class TestMaximalFunctions:
    def test_constant_exact(self, cyclic8):
        f = GridFunction(cyclic8, np.full(64, 3.0))
        assert np.allclose(maximal_left(f).values, 3.0)

    def test_line_window_domination(self):
        m = build_real_line(8.0, 0.25)
        t = 2.0
        f = indicator(m, np.nonzero((m.coords > t) & (m.coords < t + 1))[0])
        bound = indicator(m, np.nonzero((m.coords > t - 1) & (m.coords < t + 2))[0])
        assert np.all(maximal_left(f).values.real <= bound.values.real + 1e-12)

    def test_involution_duality(self, cyclic8):
        f = random_grid(cyclic8, 1)
        lhs = involution(maximal_left(f)).values.real
        rhs = maximal_right(involution(f)).values.real
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_matches_independent_oracle(self, cyclic8):
        f = random_grid(cyclic8, 2)
        assert np.allclose(maximal_left(f).values.real,
                           brute_maximal_left(8, f.values))

    def test_commutation_with_translation(self, cyclic8):
        f = random_grid(cyclic8, 3)
        for x in (1, 13, 63):
            lhs = maximal_left(translate_left(f, x)).values.real
            rhs = translate_left(maximal_left(f), x).values.real
            assert np.abs(lhs - rhs).max() < 1e-12
            lhs_r = maximal_right(translate_right(f, x)).values.real
            rhs_r = translate_right(maximal_right(f), x).values.real
            assert np.abs(lhs_r - rhs_r).max() < 1e-12


class TestAmalgamNorm:
    def test_zero(self, cyclic8):
        spec = QuasiNormSpec(p=1.0, flavor="left")
        assert amalgam_norm(GridFunction(cyclic8, np.zeros(64)), spec) == 0.0

    def test_delta_gives_q_mass(self):
        m = build_cyclic_phase_space(4)
        f = delta(m, m.identity)
        val = amalgam_norm(f, QuasiNormSpec(p=1.0, flavor="left"))
        assert val == pytest.approx(m.q_mass())

    def test_dominates_plain(self, cyclic8):
        f = random_grid(cyclic8, 4)
        for p in (0.5, 1.0, 2.0):
            spec_l = QuasiNormSpec(p=p, flavor="left")
            spec_p = QuasiNormSpec(p=p, flavor="plain")
            assert amalgam_norm(f, spec_l) >= lpw_norm(f, spec_p) - 1e-12

    def test_right_equals_left_of_involution(self, cyclic8):
        # nontrivial p-weight: symmetrize a submultiplicative seed on the torus
        n = cyclic8.n_side
        idx = np.arange(cyclic8.size)
        dist = np.minimum(idx // n, n - idx // n) + np.minimum(idx % n, n - idx % n)
        w = symmetrize_weight(cyclic8, np.exp(0.3 * dist), 0.5)
        f = random_grid(cyclic8, 5)
        lhs = amalgam_norm(f, QuasiNormSpec(p=0.5, weight=w, flavor="right"))
        rhs = amalgam_norm(involution(f), QuasiNormSpec(p=0.5, weight=w, flavor="left"))
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestConvolution:
    def test_normalized_delta_is_identity(self, cyclic8):
        f = random_grid(cyclic8, 6)
        d = delta(cyclic8, cyclic8.identity, normalized=True)
        assert np.abs(convolve(f, d).values - f.values).max() < 1e-12
        assert np.abs(twisted_convolve(f, d).values - f.values).max() < 1e-12

    def test_twisted_matches_brute_force(self, cyclic8):
        f = random_grid(cyclic8, 7)
        h = random_grid(cyclic8, 8)
        expected = brute_twisted_convolve(8, f.values, h.values, twisted=True)
        assert np.abs(twisted_convolve(f, h).values - expected).max() < 1e-12
        plain = brute_twisted_convolve(8, f.values, h.values, twisted=False)
        assert np.abs(convolve(f, h).values - plain).max() < 1e-12

    def test_pointwise_domination(self, cyclic8):
        f = random_grid(cyclic8, 9)
        h = random_grid(cyclic8, 10)
        lhs = np.abs(twisted_convolve(f, h).values)
        rhs = convolve(abs(f), abs(h)).values.real
        assert np.all(lhs <= rhs + 1e-12)

    def test_line_interval_convolution(self):
        m = build_real_line(8.0, 0.01)
        t = 2.0
        f = indicator(m, np.nonzero((m.coords > t) & (m.coords < t + 1))[0])
        g = indicator(m, np.nonzero((m.coords > -t - 1) & (m.coords < -t))[0])
        val = convolve(f, g).values[m.identity].real
        assert abs(val - 1.0) <= 2 * m.step

    def test_line_fast_path_matches_generic_sum(self):
        m = build_real_line(3.0, 0.25)
        rng = np.random.default_rng(17)
        v1 = rng.normal(size=m.size) + 1j * rng.normal(size=m.size)
        v2 = rng.normal(size=m.size) + 1j * rng.normal(size=m.size)
        fast = convolve(GridFunction(m, v1), GridFunction(m, v2)).values
        slow = np.zeros(m.size, complex)
        for yi in range(m.size):
            for xi in range(m.size):
                zi = m.mul(m.inv(yi), xi)
                if zi >= 0:
                    slow[xi] += v1[yi] * v2[zi] * m.step
        assert np.abs(fast - slow).max() < 1e-12

    def test_model_mismatch(self, cyclic8):
        other = build_cyclic_phase_space(8)
        with pytest.raises(IncompatibleOperandsError):
            convolve(random_grid(cyclic8, 11), random_grid(other, 12))

    def test_twisted_associativity(self, cyclic8):
        f1 = random_grid(cyclic8, 13)
        f2 = random_grid(cyclic8, 14)
        f3 = random_grid(cyclic8, 15)
        lhs = twisted_convolve(twisted_convolve(f1, f2), f3).values
        rhs = twisted_convolve(f1, twisted_convolve(f2, f3)).values
        assert np.abs(lhs - rhs).max() < 1e-12


class TestConvolutionRelation:
    def test_zero_factor(self, cyclic8):
        f = GridFunction(cyclic8, np.zeros(64))
        h = random_grid(cyclic8, 16)
        w = symmetrize_weight(cyclic8, np.ones(64), 1.0)
        rep = convolution_relation_check(f, h, QuasiNormSpec(p=1.0), w)
        assert rep.lhs == 0.0

    def test_maximal_estimates_exhaustive(self, cyclic8):
        w = symmetrize_weight(cyclic8, np.ones(64), 0.5)
        y = QuasiNormSpec(p=0.5, weight=w)
        for seed in range(50):
            f = random_grid(cyclic8, 100 + seed)
            h = random_grid(cyclic8, 200 + seed)
            rep = convolution_relation_check(f, h, y, w)
            assert rep.maximal_estimates_hold

    def test_affine_ratio_stable(self):
        m = __import__("coorbitkit").build_affine_grid(4.0, 0.1, 0.125, 8.0, 1.25)
        w = symmetrize_weight(m, np.maximum(1.0, 1.0 + m.coords[:, 1] - 1.0), 1.0)
        rng = np.random.default_rng(21)
        inner = (np.abs(m.coords[:, 0]) < 2.0) & (m.coords[:, 1] > 0.4) & (m.coords[:, 1] < 2.5)
        ratios = []
        for _ in range(5):
            v1 = np.where(inner, rng.random(m.size), 0.0)
            v2 = np.where(inner, rng.random(m.size), 0.0)
            rep = convolution_relation_check(
                GridFunction(m, v1 + 0j), GridFunction(m, v2 + 0j),
                QuasiNormSpec(p=1.0, weight=w), w)
            ratios.append(rep.empirical_constant)
        ratios = np.array(ratios)
        assert np.all(np.isfinite(ratios))
        assert ratios.max() / ratios.min() < 10.0


class TestEmbeddingConstant:
    def test_single_delta_closed_form(self):
        m = build_cyclic_phase_space(4)
        f = delta(m, m.identity)
        w = unit_weight(m)
        report = embedding_constant_check([f], 0.5, 1.0, w)
        # ||delta||_{L^1} = mu(e); ||M^L delta||_{L^{1/2}} = (sum over Q of mu)^2
        num = m.haar[m.identity]
        den = float(m.haar[m.q_indices].sum() ** 2)
        assert report.max_ratio == pytest.approx(num / den)

    def test_constant_function(self, cyclic8):
        f = GridFunction(cyclic8, np.ones(64))
        report = embedding_constant_check([f], 0.5, 1.0, unit_weight(cyclic8))
        mass = cyclic8.total_mass()
        assert report.max_ratio == pytest.approx(mass ** (1.0 - 2.0))
        assert report.max_ratio <= 1.0

    def test_same_exponent_dominated(self, cyclic8):
        fs = [random_grid(cyclic8, 30 + k) for k in range(5)]
        report = embedding_constant_check(fs, 1.0, 1.0, unit_weight(cyclic8))
        assert report.max_ratio <= 1.0 + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.sampled_from([1.0 / 3.0, 0.5, 1.0]))
def test_p_triangle_inequality(seed, p):
    model = build_cyclic_phase_space(4)
    rng = np.random.default_rng(seed)
    f = GridFunction(model, rng.normal(size=16) + 1j * rng.normal(size=16))
    h = GridFunction(model, rng.normal(size=16) + 1j * rng.normal(size=16))
    both = GridFunction(model, f.values + h.values)
    for flavor in ("plain", "left", "two_sided"):
        spec = QuasiNormSpec(p=p, flavor=flavor)
        lhs = (lpw_norm(both, QuasiNormSpec(p=p)) if flavor == "plain"
               else amalgam_norm(both, spec)) ** p
        rhs = ((lpw_norm(f, QuasiNormSpec(p=p)) if flavor == "plain"
                else amalgam_norm(f, spec)) ** p
               + (lpw_norm(h, QuasiNormSpec(p=p)) if flavor == "plain"
                  else amalgam_norm(h, spec)) ** p)
        assert lhs <= rhs * (1 + 1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 6))
def test_solid_summation(seed, count):
    model = build_cyclic_phase_space(4)
    rng = np.random.default_rng(seed)
    p = 0.5
    fs = [rng.normal(size=16) + 1j * rng.normal(size=16) for _ in range(count)]
    total = GridFunction(model, np.abs(np.array(fs)).sum(axis=0) + 0j)
    lhs = lpw_norm(total, QuasiNormSpec(p=p)) ** p
    rhs = sum(lpw_norm(GridFunction(model, v), QuasiNormSpec(p=p)) ** p for v in fs)
    assert lhs <= rhs * (1 + 1e-10)


def test_csv_serialization(tmp_path, cyclic8):
    f = random_grid(cyclic8, 40)
    path = f.to_csv(tmp_path / "f.csv")
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "k,l,re,im"
    assert len(lines) == 65
    m = build_real_line(2.0, 1.0)
    path2 = GridFunction(m, np.arange(5.0) + 0j).to_csv(tmp_path / "line.csv")
    assert path2.read_text().splitlines()[0] == "x,re,im"
