"""Independent numerical oracles shared by the test modules."""

import math

import numpy as np

from covlind import JCParams, qubit_ops
from covlind.jaynes_cummings import jc_eigenoperators, jc_semiclassical_propagator

Q = qubit_ops()


def decompose_sigma_x_amplitudes(p: JCParams, n_samples=3001, t_max=250.0):
    """Squared amplitudes of U^dag sigma_x U in the eigenoperator basis.

    Least-squares fit over a long time window at the six analytic
    frequencies (carrier and Mollow side-bands); ordered as
    [+wc, -wc, wc-Om, -(wc+Om), wc+Om, -(wc-Om)] carrying
    [F0, F0, F+, F+, F-, F-].
    """
    om, wc = p.rabi, p.omega_c
    f_plus, f_minus, w_norm = jc_eigenoperators(p)
    f0 = w_norm(0.0).data
    fp, fm = f_plus(0.0).data, f_minus(0.0).data
    freqs = [wc, -wc, wc - om, -(wc + om), wc + om, -(wc - om)]
    ops = [f0, f0, fp, fp, fm, fm]
    basis = [Q["sm"], Q["sp"], Q["sz"] / math.sqrt(2), np.eye(2) / math.sqrt(2)]
    ts = np.linspace(0.0, t_max, n_samples)
    y = np.empty((n_samples, 4), dtype=complex)
    for i, t in enumerate(ts):
        u = jc_semiclassical_propagator(t, p)
        sxt = u.conj().T @ Q["sx"] @ u
        y[i] = [np.trace(b.conj().T @ sxt) for b in basis]
    comp = np.array([[np.trace(b.conj().T @ o) for b in basis] for o in ops])
    mat = np.zeros((n_samples * 4, 6), dtype=complex)
    for k in range(6):
        mat[:, k] = (np.exp(-1j * ts * freqs[k])[:, None] * comp[k][None, :]).reshape(-1)
    amps, *_ = np.linalg.lstsq(mat, y.reshape(-1), rcond=None)
    return np.abs(amps) ** 2


def random_hermitian(d, rng):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)
