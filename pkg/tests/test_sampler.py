"""Toy sampler tests against closed-form and quadrature oracles."""

import math

import numpy as np
import pytest
from oracles import composed_affine
from scipy.integrate import quad

from chromanoise import (
    MaskSpec,
    MixtureModel,
    NumericalFailureError,
    SamplerConfig,
    ValidationError,
    blend,
    ddim_sample,
    gaussian_mask,
    gaussian_oracle_denoiser,
    mixture_oracle_denoiser,
    run_chroma_experiment,
    sample_standard_noise,
)
from chromanoise.tensor import NoiseTensor, derived

TRIG = SamplerConfig(schedule="trig")
LINEAR = SamplerConfig(schedule="linear")


def quadrature_eps(x: float, t: int, cfg: SamplerConfig, mixture: MixtureModel) -> float:
    """Posterior-mean noise via numerical integration over the data prior."""
    ab = float(cfg.alpha_bars()[t])
    sq = math.sqrt(ab)
    nv = 1.0 - ab

    def prior(x0):
        return sum(
            w * math.exp(-((x0 - m) ** 2) / (2 * v)) / math.sqrt(2 * math.pi * v)
            for w, m, v in mixture.components
        )

    def kern(x0):
        return math.exp(-((x - sq * x0) ** 2) / (2 * nv)) * prior(x0)

    lo = min(m - 12 * math.sqrt(v) for _, m, v in mixture.components) - 12
    hi = max(m + 12 * math.sqrt(v) for _, m, v in mixture.components) + 12
    num, _ = quad(lambda x0: x0 * kern(x0), lo, hi, limit=200)
    den, _ = quad(kern, lo, hi, limit=200)
    x0_mean = num / den
    return (x - sq * x0_mean) / math.sqrt(nv)


class TestSamplerConfig:
    def test_schedule_invariants(self):
        for cfg in (TRIG, LINEAR):
            ab = cfg.alpha_bars()
            assert ab[0] > 0.99
            assert (np.diff(ab) < 0).all()
            assert ab[-1] > 0

    def test_uniform_timesteps(self):
        assert SamplerConfig(sample_steps=50).timesteps() == list(range(0, 1000, 20))
        assert SamplerConfig(sample_steps=1).timesteps() == [0]

    def test_validation(self):
        with pytest.raises(ValidationError):
            SamplerConfig(sample_steps=0)
        with pytest.raises(ValidationError):
            SamplerConfig(sample_steps=2000)
        with pytest.raises(ValidationError):
            SamplerConfig(schedule="cosine")
        with pytest.raises(ValidationError):
            SamplerConfig(eta=0.5)
        with pytest.raises(ValidationError):
            SamplerConfig(beta_start=0.0)


class TestGaussianOracle:
    def test_standard_normal_reduction(self):
        den = gaussian_oracle_denoiser(0.0, 1.0, LINEAR)
        ab = LINEAR.alpha_bars()
        x = np.linspace(-3, 3, 7)
        for t in (0, 250, 999):
            np.testing.assert_allclose(den(x, t), np.sqrt(1 - ab[t]) * x, rtol=1e-12)

    def test_noiseless_limit_at_mean(self):
        den = gaussian_oracle_denoiser(2.5, 1.3, LINEAR)
        x = np.array([2.5])
        assert abs(den(x, 0)[0]) < 1e-2  # alpha_bar ~ 1: eps ~ 0 at the mean

    def test_matches_quadrature(self):
        mix = MixtureModel(components=((1.0, 1.5, 0.8),))
        den = gaussian_oracle_denoiser(1.5, math.sqrt(0.8), LINEAR)
        for x in (-2.0, 0.3, 4.0):
            for t in (100, 500, 900):
                expected = quadrature_eps(x, t, LINEAR, mix)
                assert den(np.array([x]), t)[0] == pytest.approx(expected, abs=1e-8)

    def test_std_must_be_positive(self):
        with pytest.raises(ValidationError):
            gaussian_oracle_denoiser(0.0, 0.0)


class TestMixtureOracle:
    def test_single_component_degenerates(self):
        mix = MixtureModel(components=((1.0, 0.7, 2.0),))
        dm = mixture_oracle_denoiser(mix, LINEAR)
        dg = gaussian_oracle_denoiser(0.7, math.sqrt(2.0), LINEAR)
        x = np.linspace(-4, 4, 17)
        for t in (0, 300, 999):
            np.testing.assert_allclose(dm(x, t), dg(x, t), atol=1e-12)

    def test_symmetric_mixture_zero_at_origin(self):
        mix = MixtureModel(components=((0.5, -3.0, 1.0), (0.5, 3.0, 1.0)))
        den = mixture_oracle_denoiser(mix, LINEAR)
        for t in (50, 500, 950):
            assert den(np.array([0.0]), t)[0] == pytest.approx(0.0, abs=1e-12)

    def test_matches_quadrature(self):
        mix = MixtureModel(components=((0.3, -2.0, 0.5), (0.7, 1.0, 2.0)))
        den = mixture_oracle_denoiser(mix, LINEAR)
        for x in (-3.0, 0.0, 2.5):
            for t in (100, 500, 900):
                expected = quadrature_eps(x, t, LINEAR, mix)
                assert den(np.array([x]), t)[0] == pytest.approx(expected, abs=1e-7)

    def test_weights_normalized_variances_positive(self):
        mix = MixtureModel(components=((2.0, 0.0, 1.0), (6.0, 1.0, 1.0)))
        assert mix.weights.tolist() == [0.25, 0.75]
        with pytest.raises(ValidationError):
            MixtureModel(components=((1.0, 0.0, 0.0),))
        with pytest.raises(ValidationError):
            MixtureModel(components=())


class TestDdimSample:
    @pytest.mark.parametrize("cfg", [TRIG, LINEAR], ids=["trig", "linear"])
    @pytest.mark.parametrize("steps", [10, 50, 200])
    def test_affine_oracle_identity_case(self, cfg, steps):
        cfg = SamplerConfig(sample_steps=steps, schedule=cfg.schedule)
        z = sample_standard_noise(31, 16, 16, 2)
        out = ddim_sample(gaussian_oracle_denoiser(0.0, 1.0, cfg), z, cfg)
        a, b = composed_affine(0.0, 1.0, cfg)
        assert abs(b) < 1e-12
        expected = a * z.values.astype(np.float64)
        np.testing.assert_allclose(out.values, expected, rtol=1e-4)

    @pytest.mark.parametrize("cfg", [TRIG, LINEAR], ids=["trig", "linear"])
    def test_affine_oracle_general_case(self, cfg):
        cfg = SamplerConfig(sample_steps=50, schedule=cfg.schedule)
        z = sample_standard_noise(77, 8, 8, 1)
        out = ddim_sample(gaussian_oracle_denoiser(2.0, 0.7, cfg), z, cfg)
        a, b = composed_affine(2.0, 0.7, cfg)
        expected = a * z.values.astype(np.float64) + b
        np.testing.assert_allclose(out.values, expected, rtol=1e-4, atol=1e-6)

    def test_trig_identity_contraction_matches_cos_product(self):
        cfg = SamplerConfig(sample_steps=50, schedule="trig")
        a, _ = composed_affine(0.0, 1.0, cfg)
        ab = cfg.alpha_bars()
        theta = np.arccos(np.sqrt(ab))
        taus = cfg.timesteps()[::-1]
        kappa = np.prod([np.cos(theta[s] - theta[t]) for s, t in zip(taus, taus[1:])])
        kappa *= np.cos(theta[taus[-1]])
        assert a == pytest.approx(kappa, rel=1e-12)
        assert a == pytest.approx(0.9756, abs=1e-3)

    def test_zero_field_lands_at_intercept(self):
        z = derived(np.zeros((4, 4, 1)))
        for steps in (50, 500):
            cfg = SamplerConfig(sample_steps=steps, schedule="trig")
            out = ddim_sample(gaussian_oracle_denoiser(5.0, 1.0, cfg), z, cfg)
            _, b = composed_affine(5.0, 1.0, cfg)
            np.testing.assert_allclose(out.values, b, rtol=1e-5)
        # the intercept approaches the data mean as steps grow
        _, b50 = composed_affine(5.0, 1.0, SamplerConfig(sample_steps=50, schedule="trig"))
        _, b500 = composed_affine(5.0, 1.0, SamplerConfig(sample_steps=500, schedule="trig"))
        assert abs(b500 - 5.0) < abs(b50 - 5.0)
        assert b500 == pytest.approx(5.0, abs=0.05)

    def test_identity_slope_monotone_in_steps(self):
        slopes = [
            composed_affine(0.0, 1.0, SamplerConfig(sample_steps=s, schedule="trig"))[0]
            for s in (5, 10, 25, 50, 100, 250, 500)
        ]
        assert all(b > a for a, b in zip(slopes, slopes[1:]))
        assert slopes[-1] < 1.0

    def test_affine_shift_propagation(self):
        cfg = SamplerConfig(sample_steps=50)
        den = gaussian_oracle_denoiser(0.0, 1.0, cfg)
        a, _ = composed_affine(0.0, 1.0, cfg)
        z = sample_standard_noise(5, 8, 8, 1)
        base = ddim_sample(den, z, cfg).values.astype(np.float64)
        for delta in (-1.0, -0.2, 0.3, 0.9, 2.0):
            shifted = derived(z.values.astype(np.float64) + delta)
            out = ddim_sample(den, shifted, cfg).values.astype(np.float64)
            np.testing.assert_allclose(out - base, a * delta, atol=1e-5)

    def test_spatial_linearity_blend_commutes(self):
        cfg = SamplerConfig(sample_steps=50)
        den = gaussian_oracle_denoiser(0.0, 1.0, cfg)
        z = sample_standard_noise(41, 16, 16, 1)
        z_star = derived(z.values.astype(np.float64) + 1.5)
        mask = gaussian_mask(MaskSpec(8.0, 8.0, 0.5), 16, 16)
        sampled_blend = ddim_sample(den, blend(z, z_star, mask), cfg)
        blended_samples = blend(
            ddim_sample(den, z, cfg), ddim_sample(den, z_star, cfg), mask
        )
        np.testing.assert_allclose(
            sampled_blend.values, blended_samples.values, atol=1e-5
        )

    def test_deterministic(self):
        cfg = SamplerConfig(sample_steps=20)
        mix = MixtureModel(components=((0.5, -3.0, 1.0), (0.5, 3.0, 1.0)))
        den = mixture_oracle_denoiser(mix, cfg)
        z = sample_standard_noise(9, 8, 8, 1)
        a = ddim_sample(den, z, cfg)
        b = ddim_sample(den, z, cfg)
        assert a.values.tobytes() == b.values.tobytes()

    def test_nonfinite_intermediate_reports_step(self):
        cfg = SamplerConfig(sample_steps=10)
        calls = []

        def bad_denoiser(x, t):
            calls.append(t)
            if len(calls) == 3:
                return np.full_like(x, np.inf)
            return np.zeros_like(x)

        z = sample_standard_noise(1, 4, 4, 1)
        with pytest.raises(NumericalFailureError) as err:
            ddim_sample(bad_denoiser, z, cfg)
        assert err.value.step == 2
        assert err.value.timestep == calls[2]


class TestChromaExperiment:
    MIX = MixtureModel(components=((0.5, -3.0, 1.0), (0.5, 3.0, 1.0)))

    def test_unshifted_symmetric_is_balanced(self):
        cfg = SamplerConfig(sample_steps=50)
        res = run_chroma_experiment(0.0, [MaskSpec(32, 32, 0.5)], self.MIX, 12, cfg)
        assert res.fractions["all"][res.key_component] == pytest.approx(0.5, abs=0.05)

    def test_flat_mask_matches_unshifted_bitwise(self):
        cfg = SamplerConfig(sample_steps=20)
        flat = [MaskSpec(32, 32, 1e12)]  # A == 1 everywhere
        res_shifted = run_chroma_experiment(2.0, flat, self.MIX, 12, cfg)
        res_zero = run_chroma_experiment(0.0, flat, self.MIX, 12, cfg)
        assert res_shifted.x0.values.tobytes() == res_zero.x0.values.tobytes()
        assert "background" not in res_shifted.fractions  # empty region omitted

    def test_mode_capture_monotone_in_delta(self):
        cfg = SamplerConfig(sample_steps=50)
        fractions = []
        for delta in np.linspace(0.0, 3.0, 6):
            res = run_chroma_experiment(
                float(delta), [MaskSpec(32, 32, 0.5)], self.MIX, 12, cfg
            )
            fractions.append(res.fractions["border"][res.key_component])
        assert all(b >= a for a, b in zip(fractions, fractions[1:]))

    def test_key_component_follows_shift_sign(self):
        cfg = SamplerConfig(sample_steps=20)
        res_pos = run_chroma_experiment(1.0, [MaskSpec(32, 32, 0.5)], self.MIX, 3, cfg)
        res_neg = run_chroma_experiment(-1.0, [MaskSpec(32, 32, 0.5)], self.MIX, 3, cfg)
        assert res_pos.key_component == 1
        assert res_neg.key_component == 0

    def test_requires_two_components(self):
        with pytest.raises(ValidationError):
            run_chroma_experiment(
                1.0,
                [MaskSpec(32, 32, 0.5)],
                MixtureModel(components=((1.0, 0.0, 1.0),)),
                3,
            )
