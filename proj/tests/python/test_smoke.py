import math

import numpy as np
import pytest

import cavitysim as cs


def test_version():
    assert cs.__version__ == "0.1.0"


def test_figures_of_merit():
    f = cs.figures_of_merit(100.0, 65.0, 6.0, 100.0)
    assert f.cooperativity == pytest.approx(102.564, rel=1e-4)
    assert f.finesse == pytest.approx(1.49896229e6 / 65.0, rel=1e-6)


def test_readout_statistics():
    assert cs.optimal_threshold(0.09, 16.600) == 3
    p_fp, p_fn = cs.readout_error_probs(0.0913, 16.6, 3)
    assert p_fp == pytest.approx(2.7e-6, rel=0.05)
    assert p_fn == pytest.approx(57e-6, rel=0.05)
    lo, hi = cs.clopper_pearson(5, 10)
    assert lo == pytest.approx(0.18709, abs=1e-4)
    assert hi == pytest.approx(0.81291, abs=1e-4)


def test_tavis_cummings_eigenstructure():
    p = cs.CavityParams()
    p.kappa = 0.0
    p.gamma = 0.0
    sys = cs.build_tavis_cummings(p, 2, 2)
    evals = np.linalg.eigvalsh(sys.hamiltonian)
    assert evals.min() == pytest.approx(-100.0 * math.sqrt(2.0))
    assert evals.max() == pytest.approx(100.0 * math.sqrt(2.0))


def test_steady_state_spectrum_peaks():
    p = cs.CavityParams()
    p.omega_probe = 1.0
    p.g_B = 0.0
    s = cs.probe_transmission_analytic(p, list(np.linspace(-250, 250, 501)))
    peaks = cs.find_peaks(s)
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(-100.0, abs=1.0)
    assert peaks[1] == pytest.approx(100.0, abs=1.0)


def test_carving_and_gate():
    o = cs.carving_outcome_simplified(1.0, 1.0, 101.0, 6.0)
    assert o.fidelity == pytest.approx(0.94986, abs=1e-4)
    assert o.success_probability == pytest.approx(0.49606, abs=1e-4)

    p = cs.Rb87Params()
    assert cs.carving_ceiling_rb87(p) == pytest.approx(0.963, abs=0.01)

    m = cs.cz_gate_metrics_simplified_coop(6.0, 65.0, 101.0)
    assert m.omega_opt == pytest.approx(math.sqrt(50.5) * 6.0)
    assert m.f_uncorr == pytest.approx(0.8115, abs=1e-3)

    best = cs.cz_gate_optimal_rb87(p)
    assert 0.75 < best.f_corr < 0.81


def test_bell_fidelity_closure():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    phim = np.array([1.0, 0.0, 0.0, -1.0]) / math.sqrt(2.0)
    direct = float(np.real(phim.conj() @ rho @ phim))
    est = cs.bell_fidelity_from_density(rho, cs.BellTarget.PhiMinus)
    assert est.fidelity == pytest.approx(direct, abs=1e-9)
