import numpy as np
import pytest

from coorbitkit import (
    CDMatrix,
    GridFunction,
    KernelSystem,
    SampleSet,
    add_with_envelope,
    build_cyclic_phase_space,
    convolve,
    gabor_representation,
    gaussian_window,
    gramian,
    identity_cd,
    matrix_holomorphic,
    minimal_envelope,
    product_with_envelope,
    schur_bounds,
    verify_envelope,
    voice_transform,
)
from coorbitkit.errors import (
    IncompatibleOperandsError,
    NoCertificateError,
    NotContractiveError,
)


@pytest.fixture(scope="module")
def model():
    return build_cyclic_phase_space(8)


@pytest.fixture(scope="module")
def full_sample(model):
    return SampleSet(model=model, points=np.arange(64))


def decaying_profile(model, rate=1.2):
    n = model.n_side
    idx = np.arange(model.size)
    k = np.minimum(idx // n, n - idx // n)
    l = np.minimum(idx % n, n - idx % n)
    return np.exp(-rate * (k + l)).astype(float)


def random_localized(model, sample, seed, scale=1.0):
    """Entries bounded by a symmetric decaying profile at relative positions."""
    rng = np.random.default_rng(seed)
    prof = decaying_profile(model)
    z = model.div_indices(sample.points[None, :], sample.points[:, None])
    mags = prof[z] * rng.random(z.shape) * scale
    phases = np.exp(2j * np.pi * rng.random(z.shape))
    cdm = CDMatrix(rows=sample, cols=sample, entries=mags * phases)
    cdm.envelope = minimal_envelope(cdm)
    return cdm


class TestVerifyEnvelope:
    def test_zero_matrix(self, model, full_sample):
        cdm = CDMatrix(rows=full_sample, cols=full_sample,
                       entries=np.zeros((64, 64), complex))
        result = verify_envelope(cdm, GridFunction(model, np.zeros(64)))
        assert result["holds"] and result["max_excess"] == 0.0

    def test_gramian_against_autocorrelation(self, model):
        rep = gabor_representation(model)
        g = gaussian_window(model)
        ks = KernelSystem.build(rep, g)
        lam = SampleSet(model=model, points=np.arange(0, 64, 2))
        cdm = gramian(ks, lam)
        vgg = np.abs(voice_transform(rep, g, g).values)
        absf = GridFunction(model, vgg)
        bound = convolve(absf, absf)
        assert verify_envelope(cdm, GridFunction(model, bound.values.real))["holds"]

    def test_identity_with_q_indicator(self, model):
        lam = SampleSet(model=model, points=np.array([0, 4, 36]))  # distinct mod Q
        cdm = identity_cd(lam)
        ind = np.zeros(64)
        ind[model.q_indices] = 1.0
        assert verify_envelope(cdm, GridFunction(model, ind))["holds"]


class TestMinimalEnvelope:
    def test_diagonal(self, model):
        lam = SampleSet(model=model, points=np.array([1, 18, 35]))
        cdm = CDMatrix(rows=lam, cols=lam, entries=np.diag([1.0, 3.0, 2.0]).astype(complex))
        env = minimal_envelope(cdm)
        assert env.values.real[model.identity] == pytest.approx(3.0)
        assert float(np.delete(env.values.real, model.identity).max()) == 0.0

    def test_random_matrix_certified(self, model, full_sample):
        for seed in range(5):
            cdm = random_localized(model, full_sample, seed)
            result = verify_envelope(cdm, cdm.envelope)
            assert result["holds"] and result["max_excess"] == 0.0

    def test_zero(self, model, full_sample):
        cdm = CDMatrix(rows=full_sample, cols=full_sample,
                       entries=np.zeros((64, 64), complex))
        assert np.all(minimal_envelope(cdm).values == 0)


class TestSchurBounds:
    def test_zero_matrix(self, model, full_sample):
        cdm = CDMatrix(rows=full_sample, cols=full_sample,
                       entries=np.zeros((64, 64), complex))
        cdm.envelope = minimal_envelope(cdm)
        result = schur_bounds(cdm)
        assert result["op_bound_l2"] == 0.0
        assert result["measured_op_norm"] == 0.0

    def test_spectral_norm_dominated_50_random(self, model, full_sample):
        for seed in range(50):
            cdm = random_localized(model, full_sample, 100 + seed)
            result = schur_bounds(cdm)
            assert result["measured_op_norm"] <= result["op_bound_l2"] + 1e-12
            assert result["measured_max_row_sum"] <= result["row_sum_bound"] + 1e-12
            assert result["measured_max_col_sum"] <= result["col_sum_bound"] + 1e-12

    def test_single_entry(self, model):
        lam = SampleSet(model=model, points=np.array([5]))
        cdm = CDMatrix(rows=lam, cols=lam, entries=np.array([[2.0 + 0j]]))
        cdm.envelope = minimal_envelope(cdm)
        result = schur_bounds(cdm)
        # identity-bin envelope: ||M^L(v delta_e)||_{L^1} = v mu(Q), so the
        # bound collapses to rel(Lambda) * v = 2
        assert result["row_sum_bound"] == pytest.approx(2.0)
        assert result["measured_op_norm"] <= result["op_bound_l2"]

    def test_missing_envelope(self, model, full_sample):
        cdm = CDMatrix(rows=full_sample, cols=full_sample,
                       entries=np.zeros((64, 64), complex))
        with pytest.raises(NoCertificateError):
            schur_bounds(cdm)


class TestProductEnvelope:
    def test_identity_factor_dominates(self, model, full_sample):
        a = random_localized(model, full_sample, 7)
        eye = identity_cd(full_sample)
        prod = product_with_envelope(a, eye)
        assert np.abs(prod.entries - a.entries).max() < 1e-12
        assert verify_envelope(prod, prod.envelope)["holds"]

    def test_zero_product(self, model, full_sample):
        z = CDMatrix(rows=full_sample, cols=full_sample,
                     entries=np.zeros((64, 64), complex))
        z.envelope = minimal_envelope(z)
        prod = product_with_envelope(z, z)
        assert np.all(prod.entries == 0)
        assert np.all(prod.envelope.values == 0)

    def test_random_pair_certified(self, model, full_sample):
        a = random_localized(model, full_sample, 8)
        b = random_localized(model, full_sample, 9)
        prod = product_with_envelope(a, b)
        result = verify_envelope(prod, prod.envelope)
        assert result["holds"] and result["max_excess"] == 0.0
        env = prod.envelope.values.real
        inv = model.inv_indices(np.arange(model.size))
        assert np.abs(env - env[inv]).max() < 1e-12

    def test_index_mismatch(self, model, full_sample):
        a = random_localized(model, full_sample, 10)
        sub = SampleSet(model=model, points=np.arange(32))
        b = random_localized(model, sub, 11)
        with pytest.raises(IncompatibleOperandsError):
            product_with_envelope(a, b)


class TestAddEnvelope:
    def test_p_triangle_envelope_valid(self, model, full_sample):
        for p in (1.0 / 3.0, 0.5, 1.0):
            a = random_localized(model, full_sample, 12)
            b = random_localized(model, full_sample, 13)
            total = add_with_envelope(a, b, p)
            result = verify_envelope(total, total.envelope)
            assert result["holds"]


class TestMatrixHolomorphic:
    def test_identity(self, model, full_sample):
        eye = identity_cd(full_sample)
        out = matrix_holomorphic(eye, "inverse")
        assert np.abs(out.entries - np.eye(64)).max() < 1e-12
        assert verify_envelope(out, out.envelope)["holds"]

    def test_inverse_matches_direct_solve(self, model):
        lam = SampleSet(model=model, points=np.arange(0, 64, 2))
        perturb = random_localized(model, lam, 14, scale=1.0)
        scale = 0.4 / np.linalg.norm(perturb.entries, 2)
        a = CDMatrix(rows=lam, cols=lam,
                     entries=np.eye(32) + scale * perturb.entries)
        a.envelope = minimal_envelope(a)
        out = matrix_holomorphic(a, "inverse", tail_tol=1e-12)
        direct = np.linalg.inv(a.entries)
        assert np.abs(out.entries - direct).max() <= 1e-9

    def test_gabor_gramian_inverse(self, model):
        rep = gabor_representation(model)
        ks = KernelSystem.build(rep, gaussian_window(model))
        lam = SampleSet(model=model, points=np.array(
            [k * 8 + l for k in range(0, 8, 4) for l in range(0, 8, 4)]))
        cdm = gramian(ks, lam)
        out = matrix_holomorphic(cdm, "inverse", tail_tol=1e-12)
        direct = np.linalg.inv(cdm.entries)
        assert np.abs(out.entries - direct).max() <= 1e-9

    def test_envelope_valid_after_inverse(self, model):
        lam = SampleSet(model=model, points=np.arange(0, 64, 2))
        perturb = random_localized(model, lam, 15)
        scale = 0.35 / np.linalg.norm(perturb.entries, 2)
        a = CDMatrix(rows=lam, cols=lam, entries=np.eye(32) + scale * perturb.entries)
        a.envelope = minimal_envelope(a)
        tail_tol = 1e-10
        out = matrix_holomorphic(a, "inverse", tail_tol=tail_tol)
        result = verify_envelope(out, out.envelope)
        assert result["max_excess"] <= tail_tol
        resid = np.linalg.norm(out.entries @ a.entries - np.eye(32), 2)
        assert resid <= 10 * tail_tol

    def test_not_contractive(self, model, full_sample):
        a = identity_cd(full_sample)
        a.entries = 3.0 * a.entries
        with pytest.raises(NotContractiveError):
            matrix_holomorphic(a, "inverse")


def test_cd_matrix_json_object(model):
    import json

    lam = SampleSet(model=model, points=np.array([0, 9]))
    cdm = identity_cd(lam, p=0.5)
    obj = json.loads(json.dumps(cdm.to_json_obj()))
    assert obj["rows"] == [0, 9]
    assert obj["entries_re"] == [[1.0, 0.0], [0.0, 1.0]]
    assert len(obj["envelope"]) == model.size
    assert obj["context"]["p"] == 0.5
