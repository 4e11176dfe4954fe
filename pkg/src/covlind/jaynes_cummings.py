"""Jaynes-Cummings analytics: autonomous block dynamics, exact Kraus
reduction of the qubit, the semi-classical (Rabi) propagator, analytic
driven eigenoperators, dressed states, the collapse envelope and Touchard
asymptotics.

Basis conventions: qubit basis (|g>, |e>) with sigma_z = diag(-1, +1);
the coupled space is ordered |qubit> (x) |n>.  The n'th excitation block
spans {|g, n>, |e, n-1>}.  hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ContractError, TruncationError
from .operators import DensityMatrix, Operator, destroy, qubit_ops

_Q = qubit_ops()


@dataclass(frozen=True)
class JCParams:
    """Jaynes-Cummings configuration.

    omega_c: mode frequency; omega_eg: qubit splitting; g: coupling;
    alpha: coherent amplitude of the control mode.  Derived quantities:
    delta = omega_eg - omega_c, nbar = |alpha|^2, and the generalized Rabi
    frequency rabi = sqrt(delta^2 + 4 g^2 nbar).
    """

    omega_c: float
    omega_eg: float
    g: float
    alpha: complex = 0.0

    def __post_init__(self):
        if self.omega_c <= 0 or self.omega_eg <= 0:
            raise ContractError("frequencies must be positive")
        if self.g < 0:
            raise ContractError("coupling must be nonnegative")

    @property
    def delta(self) -> float:
        return self.omega_eg - self.omega_c

    @property
    def nbar(self) -> float:
        return abs(self.alpha) ** 2

    def omega_n(self, n) -> np.ndarray:
        return np.sqrt(self.delta ** 2 + 4.0 * self.g ** 2 * np.asarray(n, dtype=float))

    @property
    def rabi(self) -> float:
        return float(self.omega_n(self.nbar))

    @classmethod
    def with_rabi(cls, omega_c: float, delta: float, rabi: float, alpha: complex) -> "JCParams":
        """Fix g so the generalized Rabi frequency takes the given value."""
        if abs(alpha) == 0:
            raise ContractError("with_rabi needs a nonzero coherent amplitude")
        if rabi ** 2 < delta ** 2:
            raise ContractError("rabi must be at least |delta|")
        g = math.sqrt(rabi ** 2 - delta ** 2) / (2.0 * abs(alpha))
        return cls(omega_c, omega_c + delta, g, alpha)


def default_kraus_window(p: JCParams) -> tuple[int, int]:
    """Fock window [nbar - 10|alpha|, nbar + 10|alpha| + 20] (10-sigma)."""
    a = abs(p.alpha)
    lo = max(0, math.floor(p.nbar - 10.0 * a))
    hi = math.ceil(p.nbar + 10.0 * a) + 20
    return lo, hi


def jc_hamiltonian(p: JCParams, n_max: int) -> Operator:
    """H = omega_c (a^dag a + 1/2) + (omega_eg/2) sigma_z + g (sm a^dag + sp a)."""
    if n_max < 1:
        raise ContractError("n_max must be at least 1")
    a = destroy(n_max + 1)
    num = a.conj().T @ a
    eye_m = np.eye(n_max + 1, dtype=complex)
    h = (p.omega_c * (np.kron(np.eye(2), num + 0.5 * eye_m))
         + 0.5 * p.omega_eg * np.kron(_Q["sz"], eye_m)
         + p.g * (np.kron(_Q["sm"], a.conj().T) + np.kron(_Q["sp"], a)))
    return Operator(h, (2, n_max + 1))


def _half_sinc(omega_n, t: float):
    """(t/2) * sin(Omega_n t / 2) / (Omega_n t / 2), stable at Omega_n = 0."""
    return (t / 2.0) * np.sinc(omega_n * t / (2.0 * math.pi))


def jc_block_propagator(n: int, t: float, p: JCParams) -> np.ndarray:
    """Closed-form propagator of the n'th block in basis {|g,n>, |e,n-1>}.

    Includes the global phase exp(-i n omega_c t).
    """
    if n < 1:
        raise ContractError("blocks are defined for n >= 1")
    om = float(p.omega_n(n))
    c = math.cos(om * t / 2.0)
    hs = float(_half_sinc(om, t))
    off = -2j * p.g * math.sqrt(n) * hs
    u = np.array([[c + 1j * p.delta * hs, off],
                  [off, c - 1j * p.delta * hs]], dtype=complex)
    return np.exp(-1j * n * p.omega_c * t) * u


def _kraus_stack(p: JCParams, ts: np.ndarray, window=None) -> np.ndarray:
    """Kraus operators chi_m(t) = <m| U_D |alpha> on the Poisson window.

    Returns an array of shape (len(ts), n_window, 2, 2); summing
    chi rho chi^dag over the window gives the exact reduced qubit state up
    to the truncated Poisson tail.
    """
    lo, hi = window if window is not None else default_kraus_window(p)
    ms = np.arange(lo, hi + 1)
    a = abs(p.alpha)
    theta = np.angle(p.alpha) if a else 0.0
    # coherent amplitudes for indices m-1 .. m+1 (log-space Poisson weights)
    ext = np.arange(max(0, lo - 1), hi + 2)
    if a == 0.0:
        log_mod = np.where(ext == 0, 0.0, -np.inf)
    else:
        log_mod = -0.5 * a * a + ext * math.log(a) - 0.5 * gammaln(ext + 1.0)
    camp_ext = np.exp(log_mod) * np.exp(1j * ext * theta)

    def camp(idx):
        out = np.zeros(idx.shape, dtype=complex)
        ok = idx >= 0
        out[ok] = camp_ext[idx[ok] - ext[0]]
        return out

    c_m = camp(ms)
    c_mm1 = camp(ms - 1)
    c_mp1 = camp(ms + 1)

    ts = np.asarray(ts, dtype=float)
    om_m = p.omega_n(ms)[None, :]
    om_mp1 = p.omega_n(ms + 1)[None, :]
    tcol = ts[:, None]
    cos_m = np.cos(om_m * tcol / 2.0)
    cos_mp1 = np.cos(om_mp1 * tcol / 2.0)
    hs_m = (tcol / 2.0) * np.sinc(om_m * tcol / (2.0 * math.pi))
    hs_mp1 = (tcol / 2.0) * np.sinc(om_mp1 * tcol / (2.0 * math.pi))
    a_m = cos_m + 1j * p.delta * hs_m
    a_mp1_conj = cos_mp1 - 1j * p.delta * hs_mp1
    b_m = -2j * p.g * np.sqrt(ms)[None, :] * hs_m
    b_mp1 = -2j * p.g * np.sqrt(ms + 1)[None, :] * hs_mp1

    phase_m = np.exp(-1j * ms[None, :] * p.omega_c * tcol)
    phase_c = np.exp(-1j * p.omega_c * tcol)

    chi = np.empty((len(ts), len(ms), 2, 2), dtype=complex)
    chi[:, :, 0, 0] = c_m[None, :] * phase_m * a_m
    chi[:, :, 0, 1] = c_mm1[None, :] * phase_m * b_m
    chi[:, :, 1, 0] = c_mp1[None, :] * phase_m * phase_c * b_mp1
    chi[:, :, 1, 1] = c_m[None, :] * phase_m * phase_c * a_mp1_conj
    return chi


def jc_kraus_completeness(p: JCParams, t: float, window=None) -> float:
    chi = _kraus_stack(p, np.array([t]), window)[0]
    comp = np.einsum("mij,mik->jk", chi.conj(), chi)
    return float(np.max(np.abs(comp - np.eye(2))))


def jc_kraus_reduce(rho_s0: DensityMatrix, p: JCParams, t: float,
                    window=None) -> DensityMatrix:
    """Exact autonomous reduced qubit state at time t via the Kraus sum.

    The control starts in the coherent state |alpha>; the sum runs over the
    10-sigma Poisson window.  A completeness deficit above 1e-6 raises
    TruncationError.
    """
    return jc_autonomous_trajectory(rho_s0, p, np.array([t]), window)[0]


def jc_autonomous_trajectory(rho_s0: DensityMatrix, p: JCParams, ts,
                             window=None, chunk: int = 256) -> list:
    """Reduced qubit states at each time in ``ts`` (vectorized Kraus sums)."""
    if rho_s0.data.shape[0] != 2:
        raise ContractError("the autonomous reduction acts on a qubit state")
    ts = np.asarray(ts, dtype=float)
    rho0 = rho_s0.data
    states = []
    for k0 in range(0, len(ts), chunk):
        tchunk = ts[k0:k0 + chunk]
        chi = _kraus_stack(p, tchunk, window)
        comp = np.einsum("tmij,tmik->tjk", chi.conj(), chi)
        deficit = float(np.max(np.abs(comp - np.eye(2)[None])))
        if deficit > 1e-6:
            raise TruncationError(
                f"Kraus completeness deficit {deficit:.2e} exceeds 1e-6; "
                "widen the Fock window", deficit=deficit)
        rhos = np.einsum("tmij,jk,tmlk->til", chi, rho0, chi.conj())
        for rho, t in zip(rhos, tchunk):
            rho = rho / np.trace(rho).real
            states.append(DensityMatrix.from_matrix(rho, (2,), trace_tol=1e-6,
                                                    herm_tol=1e-9, eig_tol=1e-7))
    return states


def jc_semiclassical_hamiltonian(t: float, p: JCParams) -> np.ndarray:
    """Rabi Hamiltonian (omega_eg/2) sz + g (sm alpha* e^{i wc t} + h.c.)."""
    drive = p.g * (np.conj(p.alpha) * np.exp(1j * p.omega_c * t) * _Q["sm"]
                   + p.alpha * np.exp(-1j * p.omega_c * t) * _Q["sp"])
    return 0.5 * p.omega_eg * _Q["sz"] + drive


def jc_semiclassical_propagator(t: float, p: JCParams) -> np.ndarray:
    """Closed-form Rabi propagator in the (|g>, |e>) basis.

    Built by the rotating-frame construction: a z-rotation by -arg(alpha)
    makes the coupling real, the frame rotating at omega_c makes the
    Hamiltonian static, and the remaining 2x2 exponential is elementary.
    Solves i dU/dt = H_sc(t) U with U(0) = I.
    """
    om = p.rabi
    c = math.cos(om * t / 2.0)
    hs = float(_half_sinc(om, t))
    g_abs = 2.0 * p.g * abs(p.alpha)
    u_eff = np.array([[c + 1j * p.delta * hs, -1j * g_abs * hs],
                      [-1j * g_abs * hs, c - 1j * p.delta * hs]], dtype=complex)
    phi = -np.angle(p.alpha) if p.alpha else 0.0
    r = np.diag([np.exp(1j * phi / 2.0), np.exp(-1j * phi / 2.0)])
    v = np.diag([np.exp(1j * p.omega_c * t / 2.0), np.exp(-1j * p.omega_c * t / 2.0)])
    return v @ r @ u_eff @ r.conj().T


def jc_eigenoperators(p: JCParams):
    """Analytic driven eigenoperators (F_plus, F_minus, W) as callables of t.

    F_pm satisfy the Heisenberg eigenvalue relation with frequencies
    +-rabi; W is the invariant (a time-dependent constant of motion),
    returned with unit Hilbert-Schmidt norm.  The unnormalized invariant
    g(alpha* sm e^{i wc t} + alpha sp e^{-i wc t}) + (delta/2) sz is the
    returned W times rabi/sqrt(2).
    """
    if abs(p.alpha) == 0:
        raise ContractError("eigenoperators degenerate at alpha = 0; use the "
                            "static transition operators instead")
    om, dl, g, alpha = p.rabi, p.delta, p.g, p.alpha
    norm = math.sqrt(2.0) * g * abs(alpha) / om

    def f_sign(sign: float):
        u1 = math.sqrt(2.0) * g * np.conj(alpha) / (dl + sign * om)
        u2 = math.sqrt(2.0) * g * alpha / (dl - sign * om)

        def f_of_t(t: float) -> Operator:
            mat = norm * (u1 * np.exp(1j * p.omega_c * t) * _Q["sm"]
                          + u2 * np.exp(-1j * p.omega_c * t) * _Q["sp"]
                          + _Q["sz"] / math.sqrt(2.0))
            return Operator(mat, (2,))

        return f_of_t

    def w_of_t(t: float) -> Operator:
        mat = (g * (np.conj(alpha) * np.exp(1j * p.omega_c * t) * _Q["sm"]
                    + alpha * np.exp(-1j * p.omega_c * t) * _Q["sp"])
               + 0.5 * dl * _Q["sz"])
        return Operator(mat * math.sqrt(2.0) / om, (2,))

    return f_sign(+1.0), f_sign(-1.0), w_of_t


def jc_dressed_states(n: int, p: JCParams):
    """Dressed kets and energies of the n'th block.

    Returns (psi_plus, psi_minus, e_plus, e_minus) with the kets as
    2-vectors in the {|g,n>, |e,n-1>} coordinates:
    psi_plus = sin(theta/2)|g,n> + cos(theta/2)|e,n-1> with the mixing
    angle theta = atan2(2 g sqrt(n), delta), and energies
    n omega_c +- Omega_n / 2.
    """
    if n < 1:
        raise ContractError("dressed states are defined for n >= 1")
    om = float(p.omega_n(n))
    theta = math.atan2(2.0 * p.g * math.sqrt(n), p.delta)
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    psi_plus = np.array([s, c], dtype=complex)
    psi_minus = np.array([-c, s], dtype=complex)
    return psi_plus, psi_minus, n * p.omega_c + om / 2.0, n * p.omega_c - om / 2.0


def collapse_envelope(t: float, p: JCParams) -> float:
    """Gaussian collapse envelope exp(-phi(t)) of the short-time Rabi
    oscillations, phi = (2 nbar g^2 / (delta^2 + 4 nbar g^2)) (g t)^2."""
    denom = p.delta ** 2 + 4.0 * p.nbar * p.g ** 2
    if denom == 0.0:
        return 1.0
    phi = (2.0 * p.nbar * p.g ** 2 / denom) * (p.g * t) ** 2
    return math.exp(-phi)


def touchard(j: int, x: float) -> float:
    """Touchard polynomial T_j(x) = e^-x sum_k k^j x^k / k!.

    Numerically stable truncated summation with log-space terms; the sum
    stops once terms past the Poisson mode drop below 1e-18 of the partial
    sum.  Guarded to j <= 12 to avoid overflow of k^j.
    """
    if j < 0 or j > 12:
        raise ContractError("touchard implemented for 0 <= j <= 12")
    if x <= 0:
        raise ContractError("touchard requires x > 0")
    if j == 0:
        return 1.0
    total = 0.0
    k = 1
    log_x = math.log(x)
    while True:
        log_term = -x + k * log_x - math.lgamma(k + 1) + j * math.log(k)
        term = math.exp(log_term) if log_term > -745 else 0.0
        total += term
        if k > x + j and term < 1e-18 * max(total, 1e-300):
            break
        k += 1
    return total


def touchard_asymptotic(j: int, x: float) -> float:
    """Large-x form x^j (1 + j(j-1)/(2x))."""
    return x ** j * (1.0 + j * (j - 1) / (2.0 * x))


def fit_gaussian_envelope(times, signal) -> float:
    """Decay coefficient b of a Gaussian envelope |signal| ~ A exp(-b t^2).

    Fits ln(peak) against t^2 on the local maxima of |signal|; used for
    the collapse-rate scaling checks.
    """
    t = np.asarray(times, dtype=float)
    y = np.abs(np.asarray(signal, dtype=float))
    idx = [i for i in range(1, len(y) - 1)
           if y[i] >= y[i - 1] and y[i] >= y[i + 1] and y[i] > 1e-6]
    if len(idx) < 3:
        raise ContractError("too few oscillation peaks to fit an envelope")
    tp = t[idx]
    lp = np.log(y[idx])
    coeffs = np.polyfit(tp ** 2, lp, 1)
    return float(-coeffs[0])
