import math

import numpy as np
import pytest
from scipy import integrate

import hypolab


def test_symbolic():
    assert hypolab.commutator("dx", "x*dy") == "dy"
    assert hypolab.hormander_rank(["dx", "x*dy"], (0.0, 0.0)) == (2, 2)
    assert hypolab.hormander_rank(["dx", "x*dy"], (1.0, 0.0)) == (2, 1)
    g = hypolab.principal_symbol("dx^2 + x^2*dy^2", 2)
    assert hypolab.det_symbol("[[dx, x*dy], [-x*dy, dx]]") == g
    with pytest.raises(hypolab.ParseError):
        hypolab.commutator("dx +", "dy")


def test_u1_spectrum_matches_numpy_fft():
    lx, ly, n = 16.0, 16 * math.pi, 256
    u = hypolab.realize_u1(1.0, 4.0, 0.0, lx, ly, n, n)
    x = -lx / 2 + np.arange(n) * lx / n
    eta = 2 * np.pi * np.fft.fftfreq(n, d=ly / n)
    # Samples start at y = -ly/2, so the transform picks up (-1)^m.
    sign = (-1.0) ** np.fft.fftfreq(n, d=1.0 / n)
    spec = np.fft.fft(u, axis=1) * sign / (n * 2 * np.pi / ly)

    def chi(e):
        t = (2 * e - 5.0) / 3.0
        out = np.zeros_like(e)
        inside = np.abs(t) < 1
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
        return out

    i = 150
    expected = chi(eta) * np.exp(-x[i] ** 2 * eta / 2)
    assert np.max(np.abs(spec[i] - expected)) < 1e-6
    with pytest.raises(hypolab.DomainError):
        hypolab.realize_u1(1.0, 400.0)


def test_l2_growth_closed_form():
    rows = hypolab.l2_growth([1.0, 4.0, 16.0])
    for lam, reduced, quad in rows:
        assert reduced == pytest.approx(2 * math.pi * math.sqrt(math.pi) * 2 * math.sqrt(lam), rel=1e-14)
        assert quad == pytest.approx(reduced, rel=1e-7)
    # Independent check of one value with scipy.
    val, _ = integrate.dblquad(lambda x, e: math.exp(-x * x * e), 0, 4, 0, lambda e: 50 / math.sqrt(e) if e > 0 else 50)
    assert rows[1][2] == pytest.approx(2 * math.pi * 2 * val, rel=1e-6)


def test_kernel_support_and_translation():
    assert hypolab.eval_kernel(32, 16, 0.25, 0.6, 0.0, 0.4, 0.0) == 0
    assert hypolab.eval_kernel(16, 16, 0.25, 0.3, 0.0, 0.6, 0.0) == 0
    a = hypolab.eval_kernel(32, 16, 0.25, 0.3, 0.5, 0.6, 0.2)
    b = hypolab.eval_kernel(32, 16, 0.25, 0.3, 1.5, 0.6, 1.2)
    assert abs(a) > 0
    assert abs(a - b) < 1e-12 * abs(a)
    with pytest.raises(hypolab.DomainError):
        hypolab.eval_kernel(8, 16, 0.25, 0.3, 0.0, 0.6, 0.0)


def test_experiment_round_trip():
    names = {e["name"] for e in hypolab.list_experiments()}
    assert "bracket-check" in names and len(names) == 9
    report = hypolab.run_experiment("hyp-set", eta_samples=11, y_samples=[-1, 1])
    assert report["pass"]
    assert report["config"]["eta_samples"] == 11
    consistent, ok, _ = hypolab.verify_report(report)
    assert consistent and ok
    report["checks"][0]["pass"] = not report["checks"][0]["pass"]
    assert not hypolab.verify_report(report)[0]
    with pytest.raises(hypolab.ConfigError):
        hypolab.run_experiment("polarized", bogus=1)
