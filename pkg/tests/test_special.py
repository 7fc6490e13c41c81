import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from brf import BrfParams, beta_complex, charfn_z, density_z, lavalette_density_z, log_gamma_complex, z_stats
from brf.special import PoleError


def _quad_charfn(params, t):
    # adaptive quadrature over 40 tail scale-lengths on each side
    lo = params.log_A - 40 * max(params.b, 0.1)
    hi = params.log_A + 40 * max(params.a, 0.1)
    f = lambda z: density_z(params, z)
    re = quad(f, lo, hi, weight="cos", wvar=t, limit=400)[0]
    im = quad(f, lo, hi, weight="sin", wvar=t, limit=400)[0]
    return complex(re, im)


class TestLogGamma:
    def test_one(self):
        assert log_gamma_complex(1) == pytest.approx(0, abs=1e-15)

    def test_half(self):
        assert log_gamma_complex(0.5).real == pytest.approx(0.5723649429247001, rel=1e-14)

    def test_one_plus_i(self):
        v = log_gamma_complex(1 + 1j)
        assert v.real == pytest.approx(-0.6509231993018563, rel=1e-13)
        assert v.imag == pytest.approx(-0.3016403204675331, rel=1e-13)

    def test_matches_mpmath_on_disc(self):
        rng = np.random.default_rng(11)
        r = 50 * np.sqrt(rng.random(400))
        th = rng.uniform(-np.pi, np.pi, 400)
        s = r * np.exp(1j * th)
        # keep clear of the poles on the negative real axis
        s = s[np.abs(s.imag) > 1e-3]
        got = log_gamma_complex(s)
        want = np.array([complex(mp.loggamma(mp.mpc(v.real, v.imag))) for v in s])
        err = np.abs(got - want) / np.maximum(1.0, np.abs(want))
        assert err.max() < 1e-12

    def test_principal_branch_near_negative_axis(self):
        for s in (-3.5 + 1e-6j, -3.5 - 1e-6j, -10.2 + 0.5j, -0.3 - 2j):
            assert complex(log_gamma_complex(s)) == pytest.approx(complex(mp.loggamma(s)), rel=1e-12)

    def test_conjugate_symmetry(self):
        s = np.array([0.3 + 2j, -4.2 + 0.7j, 12 - 30j])
        np.testing.assert_allclose(log_gamma_complex(s.conj()), np.conj(log_gamma_complex(s)), rtol=1e-14)

    def test_recurrence(self):
        s = np.array([0.7 + 3j, -2.5 + 0.1j, 20 + 20j])
        np.testing.assert_allclose(
            np.exp(log_gamma_complex(s + 1) - log_gamma_complex(s)), s, rtol=1e-12
        )

    @pytest.mark.parametrize("s", [0, -1, -7, 0.0 + 0j])
    def test_poles(self, s):
        with pytest.raises(PoleError):
            log_gamma_complex(s)

    def test_array_shape(self):
        out = log_gamma_complex(np.ones((2, 3)))
        assert out.shape == (2, 3)


class TestBeta:
    def test_unit(self):
        assert beta_complex(1, 1) == pytest.approx(1, abs=1e-15)

    def test_factorials(self):
        assert beta_complex(2, 3) == pytest.approx(1 / 12, rel=1e-14)

    def test_against_integral(self):
        p, q = 1 - 0.5j, 1 + 0.5j
        g = lambda t: t ** (p - 1) * (1 - t) ** (q - 1)
        re = quad(lambda t: g(t).real, 0, 1, limit=200)[0]
        im = quad(lambda t: g(t).imag, 0, 1, limit=200)[0]
        got = beta_complex(p, q)
        assert got == pytest.approx(complex(re, im), abs=1e-10)
        assert abs(got) < 1

    def test_pole(self):
        with pytest.raises(PoleError):
            beta_complex(-1, 2.5)


class TestCharfn:
    def test_zero(self):
        assert charfn_z(BrfParams(3.0, 0.7, 0.2), 0.0) == 1 + 0j

    def test_degenerate(self):
        for t in (0.3, 1.0, 17.0):
            assert charfn_z(BrfParams(1, 0, 0), t) == pytest.approx(1 + 0j, abs=1e-14)

    @pytest.mark.parametrize("params", [BrfParams(1, 1, 1), BrfParams(1, 0.99, 0.3)], ids=str)
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_against_quadrature(self, params, t):
        assert charfn_z(params, t) == pytest.approx(_quad_charfn(params, t), abs=1e-6)

    def test_lavalette_closed_form_density(self):
        # a = b: quadrature of the exact catenary density
        p = BrfParams(1, 1, 1)
        f = lambda z: lavalette_density_z(p, z)
        re = quad(f, -40, 40, weight="cos", wvar=1.0, limit=400)[0]
        assert charfn_z(p, 1.0) == pytest.approx(complex(re, 0.0), abs=1e-9)

    def test_hermitian(self):
        p = BrfParams(2.0, 0.8, 0.35)
        t = np.linspace(0.1, 15, 40)
        np.testing.assert_allclose(charfn_z(p, -t), np.conj(charfn_z(p, t)), rtol=1e-13)

    def test_bounded(self):
        for p in (BrfParams(1, 1, 1), BrfParams(1, 0.99, 0.3), BrfParams(5, 3.0, 0.01)):
            t = np.linspace(-20, 20, 801)
            assert np.all(np.abs(charfn_z(p, t)) <= 1 + 1e-12)

    def test_mean_from_derivative(self):
        p = BrfParams(2.0, 0.99, 0.3)
        eps = 1e-4
        assert charfn_z(p, eps).imag / eps == pytest.approx(z_stats(p).mean, abs=1e-4)

    def test_scale_phase(self):
        t = 1.7
        ratio = charfn_z(BrfParams(4.0, 0.5, 0.5), t) / charfn_z(BrfParams(1.0, 0.5, 0.5), t)
        assert ratio == pytest.approx(np.exp(1j * t * math.log(4.0)), rel=1e-13)
