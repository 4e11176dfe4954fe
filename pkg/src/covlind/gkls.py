"""Thermodynamically consistent GKLS dissipators, fixed points and
instantaneous attractors.

Jump operators are transition-type eigenoperators of the free dynamics.
Direction convention: a channel with jump operator G = |psi_n><psi_m| and
forward rate gamma induces the transition |psi_m> -> |psi_n>; the reverse
rate belongs to G^dag.  With eta = ln(gamma/gamma_rev) the channel pins the
population ratio p_source/p_target = exp(-eta) of its stationary state.

hbar = 1 throughout; all frequencies in rad/time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError
from .operators import (
    DensityMatrix,
    Operator,
    Superoperator,
    _as_matrix,
    commutator_super,
    liouville_unitary,
    matrix_exp,
    sandwich_super,
    vec,
)

# ln(Gamma/Gamma_rev) replacement for a vanishing reverse rate; exp(-DELTA_CAP)
# underflows to exactly 0.0, realizing the zero-temperature projector limit.
DELTA_CAP = 1500.0


class ZeroTemperatureWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Channel:
    """One dissipation channel: jump operator, forward and reverse rates."""

    op: object
    rate: float
    rate_rev: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rate) and math.isfinite(self.rate_rev)):
            raise ContractError("channel rates must be finite")
        if self.rate < 0 or self.rate_rev < 0:
            raise ContractError(
                f"negative rate ({self.rate}, {self.rate_rev}): non-Markovian "
                "inputs are rejected at this layer")


@dataclass
class DissipatorSpec:
    """Channels plus a dephasing block.

    ``dephasing_hermitian`` lists (V_j, lambda_j) double-commutator terms
    -lambda [V, [V, .]] with Hermitian V built from energy projectors
    (autonomous form).  ``dephasing_invariant`` is (W_list, chi) with
    Hermitian invariant operators and a positive semi-definite coefficient
    matrix (driven form).  ``lamb_shift`` is carried along for the unitary
    part and does not enter the dissipator.
    """

    channels: list = field(default_factory=list)
    dephasing_hermitian: list = field(default_factory=list)
    dephasing_invariant: tuple | None = None
    lamb_shift: object = None

    def __post_init__(self):
        for v, lam in self.dephasing_hermitian:
            if lam < 0:
                raise ContractError(f"dephasing weight {lam} < 0")
            vm = _as_matrix(v)
            if np.max(np.abs(vm - vm.conj().T)) > 1e-10:
                raise ContractError("dephasing operators must be Hermitian")
        if self.dephasing_invariant is not None:
            ws, chi = self.dephasing_invariant
            chi = np.asarray(chi, dtype=complex)
            if chi.shape != (len(ws), len(ws)):
                raise DimensionError("chi must be square over the invariant list")
            if np.max(np.abs(chi - chi.conj().T)) > 1e-10:
                raise ContractError("chi must be Hermitian")
            if float(np.linalg.eigvalsh(chi)[0]) < -1e-10:
                raise ContractError("chi must be positive semi-definite")

    @property
    def dim(self) -> int:
        if self.channels:
            return _as_matrix(self.channels[0].op).shape[0]
        if self.dephasing_hermitian:
            return _as_matrix(self.dephasing_hermitian[0][0]).shape[0]
        if self.dephasing_invariant is not None and self.dephasing_invariant[0]:
            return _as_matrix(self.dephasing_invariant[0][0]).shape[0]
        raise DimensionError("empty DissipatorSpec has no dimension")


def lindblad_term(f, rate: float = 1.0) -> Superoperator:
    """GKLS channel rate * (F . F^dag - 1/2 {F^dag F, .})."""
    fm = _as_matrix(f)
    d = fm.shape[0]
    eye = np.eye(d)
    fdf = fm.conj().T @ fm
    term = (sandwich_super(fm, fm.conj().T)
            - 0.5 * (sandwich_super(fdf, eye) + sandwich_super(eye, fdf)))
    return rate * term


def build_dissipator(spec: DissipatorSpec, d: int | None = None) -> Superoperator:
    """Assemble the dissipator superoperator from a DissipatorSpec.

    The result annihilates the trace: vec(I)^dag D = 0 within 1e-10.
    An empty spec with an explicit dimension gives the zero superoperator.
    """
    if d is None:
        d = spec.dim
    total = Superoperator.zero(d)
    for ch in spec.channels:
        fm = _as_matrix(ch.op)
        if fm.shape[0] != d:
            raise DimensionError("channel dimension mismatch")
        if ch.rate:
            total = total + lindblad_term(fm, ch.rate)
        if ch.rate_rev:
            total = total + lindblad_term(fm.conj().T, ch.rate_rev)
    for v, lam in spec.dephasing_hermitian:
        cv = commutator_super(v)
        total = total - lam * Superoperator(cv.data @ cv.data, d)
    if spec.dephasing_invariant is not None:
        ws, chi = spec.dephasing_invariant
        chi = np.asarray(chi, dtype=complex)
        eye = np.eye(d)
        for i, wi in enumerate(ws):
            for j, wj in enumerate(ws):
                if chi[i, j] == 0:
                    continue
                wim, wjm = _as_matrix(wi), _as_matrix(wj)
                wji = wjm @ wim
                term = (sandwich_super(wim, wjm)
                        - 0.5 * (sandwich_super(wji, eye) + sandwich_super(eye, wji)))
                total = total + chi[i, j] * term
    left = vec(np.eye(d)).conj() @ total.data
    scale = max(1.0, float(np.max(np.abs(total.data))))
    if np.max(np.abs(left)) > 1e-10 * scale:
        raise ContractError("assembled dissipator does not annihilate the trace")
    return total


def liouvillian(h_eff, d_super: Superoperator) -> Superoperator:
    """L = -i [H_eff, .] + D; trace-annihilating by construction."""
    hm = _as_matrix(h_eff)
    if np.max(np.abs(hm - hm.conj().T)) > 1e-10:
        raise ContractError("effective Hamiltonian must be Hermitian")
    l_super = Superoperator(-1j * commutator_super(hm).data + d_super.data,
                            d_super.source_dim)
    left = vec(np.eye(l_super.source_dim)).conj() @ l_super.data
    scale = max(1.0, float(np.max(np.abs(l_super.data))))
    if np.max(np.abs(left)) > 1e-10 * scale:
        raise ContractError("Liouvillian does not annihilate the trace")
    return l_super


def total_liouvillian(h_free, spec: DissipatorSpec) -> Superoperator:
    """Full generator: free Hamiltonian plus the spec's Lamb shift in the
    unitary part, dissipator from the spec."""
    hm = _as_matrix(h_free)
    if spec.lamb_shift is not None:
        shift = _as_matrix(spec.lamb_shift)
        if np.max(np.abs(shift - shift.conj().T)) > 1e-10:
            raise ContractError("Lamb shift must be Hermitian")
        hm = hm + shift
    return liouvillian(hm, build_dissipator(spec, d=hm.shape[0]))


def detailed_balance_rates(freqs, beta: float, base) -> list[tuple[float, float]]:
    """Pair each base rate with its detailed-balance reverse rate.

    For a channel labeled by Bohr frequency omega the reverse rate is
    gamma_rev = gamma * exp(-beta * omega), so the downward channel
    (omega > 0) dominates at positive beta.  beta = inf is the
    zero-temperature limit (upward rate zero); at that limit channels must
    be labeled by positive frequency.
    """
    if beta < 0:
        raise ContractError("inverse temperature must be nonnegative")
    out = []
    for om, g in zip(np.atleast_1d(freqs), np.atleast_1d(base)):
        if g < 0:
            raise ContractError("base rates must be nonnegative")
        if math.isinf(beta):
            if om > 0:
                out.append((float(g), 0.0))
            elif om == 0:
                out.append((float(g), float(g)))
            else:
                raise ContractError(
                    "at zero temperature label channels by positive frequency")
        else:
            x = beta * om
            if x < -700:
                raise ContractError("beta*omega overflows; label the channel by "
                                    "its positive (downward) frequency")
            out.append((float(g), float(g) * math.exp(-x)))
    return out


@dataclass
class AttractorResult:
    """Stationary state of a channel set with its generating Hamiltonian.

    ``residual`` is ||D[state]||_max for the assembled dissipator, reported
    honestly (<= 1e-9 for consistent inputs).
    """

    state: DensityMatrix
    effective_hamiltonian: Operator
    deltas: np.ndarray
    residual: float
    zero_temperature: bool = False


def _hermitian_basis(d: int):
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = e[j, i] = 1.0 / math.sqrt(2)
            basis.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = -1j / math.sqrt(2)
            e[j, i] = 1j / math.sqrt(2)
            basis.append(e)
    return basis


def _solve_effective_hamiltonian(jumps, deltas):
    """Least-squares Hermitian H with [H, F_k] = -delta_k F_k for all k.

    Solved over a real parametrization of Hermitian matrices; the
    minimum-norm solution reduces to sum_k (delta_k/2)(F^dag F - F F^dag)
    when the channels do not share levels, and otherwise picks the unique
    potential consistent with every channel at once.
    """
    d = jumps[0].shape[0]
    basis = _hermitian_basis(d)
    cols = []
    rhs = []
    for fm, dl in zip(jumps, deltas):
        a_k = np.kron(fm.T, np.eye(d)) - np.kron(np.eye(d), fm)  # vec([X, F])
        cols.append(np.column_stack([a_k @ vec(b) for b in basis]))
        rhs.append(-dl * vec(fm))
    a_mat = np.vstack(cols)
    b_vec = np.concatenate(rhs)
    a_real = np.vstack([a_mat.real, a_mat.imag])
    b_real = np.concatenate([b_vec.real, b_vec.imag])
    x, *_ = np.linalg.lstsq(a_real, b_real, rcond=None)
    h_bar = sum(c * b for c, b in zip(x, basis))
    resid = max(np.max(np.abs(h_bar @ fm - fm @ h_bar + dl * fm))
                for fm, dl in zip(jumps, deltas))
    return h_bar, float(resid)


def _gibbs_of(h_bar: np.ndarray, dims=()) -> DensityMatrix:
    w, v = np.linalg.eigh(h_bar)
    # subtract the minimum before exponentiating so huge (capped) deltas
    # underflow to exact zeros instead of overflowing
    p = np.exp(-(w - w.min()))
    p /= p.sum()
    rho = (v * p) @ v.conj().T
    return DensityMatrix.from_matrix(rho, dims)


def _deltas_from_rates(rates, rates_rev):
    deltas = []
    zero_t = False
    for g, grev in zip(rates, rates_rev):
        if g <= 0:
            raise ContractError("forward rates must be positive for a fixed point")
        if grev <= 0:
            zero_t = True
            deltas.append(DELTA_CAP)
        else:
            deltas.append(math.log(g / grev))
    if zero_t:
        warnings.warn("zero reverse rate: returning the zero-temperature "
                      "projector limit", ZeroTemperatureWarning)
    return np.array(deltas), zero_t


def fixed_point(spec: DissipatorSpec, eigenset=None) -> AttractorResult:
    """Fixed point exp(-H_bar)/Z of an eigenoperator-built dissipator.

    Channel ratios determine eta = ln(gamma/gamma_rev) and thereby the
    effective Hamiltonian; the dephasing block never moves populations, so
    the same state annihilates the full dissipator.  When ``eigenset`` is
    given, each jump operator must coincide (up to phase) with one of its
    non-invariant eigenoperators.
    """
    if not spec.channels:
        raise ContractError("fixed_point needs at least one channel")
    jumps = [_as_matrix(ch.op) for ch in spec.channels]
    if eigenset is not None:
        pool = [vec(op) / np.linalg.norm(vec(op)) for op in eigenset.non_invariant()]
        for fm in jumps:
            fv = vec(fm) / np.linalg.norm(vec(fm))
            best = max(abs(fv.conj() @ p) for p in pool)
            if best < 1.0 - 1e-8:
                raise ContractError("channel jump operator is not an "
                                    "eigenoperator of the provided set")
    deltas, zero_t = _deltas_from_rates([ch.rate for ch in spec.channels],
                                        [ch.rate_rev for ch in spec.channels])
    h_bar, comm_resid = _solve_effective_hamiltonian(jumps, deltas)
    if not zero_t and comm_resid > 1e-8 * max(1.0, float(np.max(np.abs(deltas)))):
        raise ContractError(
            f"channel ratios admit no common Gibbs-like fixed point "
            f"(commutation residual {comm_resid:.2e})")
    state = _gibbs_of(h_bar)
    d_super = build_dissipator(spec)
    resid = float(np.max(np.abs(d_super.apply(state.data).data)))
    return AttractorResult(state, Operator(h_bar), deltas, resid, zero_t)


def instantaneous_attractor(channels) -> AttractorResult:
    """Instantaneous attractor exp(-H_bar)/Z of paired transition channels.

    ``channels`` holds (F_k, Gamma_k, Gamma_minus_k) with orthonormal,
    nilpotent F_k.  H_bar = sum_k (delta_k/2)(F^dag F - F F^dag) with
    delta_k = ln(Gamma_k / Gamma_minus_k) satisfies
    [H_bar, F_k] = -delta_k F_k, which makes each channel annihilate the
    state.
    """
    if not channels:
        raise ContractError("instantaneous_attractor needs at least one channel")
    jumps, fwd, rev = [], [], []
    for f, g, grev in channels:
        fm = _as_matrix(f)
        if np.max(np.abs(fm @ fm)) > 1e-10:
            raise ContractError("jump operator violates F^2 = 0")
        jumps.append(fm)
        fwd.append(g)
        rev.append(grev)
    for i in range(len(jumps)):
        for j in range(len(jumps)):
            ip = np.trace(jumps[i].conj().T @ jumps[j])
            if abs(ip - (1.0 if i == j else 0.0)) > 1e-8:
                raise ContractError("jump operators must be orthonormal")
    deltas, zero_t = _deltas_from_rates(fwd, rev)
    h_bar, comm_resid = _solve_effective_hamiltonian(jumps, deltas)
    if not zero_t and comm_resid > 1e-10 * max(1.0, float(np.max(np.abs(deltas)))):
        raise ContractError(f"[H_bar, F_k] = -delta_k F_k violated "
                            f"(residual {comm_resid:.2e})")
    state = _gibbs_of(h_bar)
    spec = DissipatorSpec(channels=[Channel(f, g, grev)
                                    for f, g, grev in zip(jumps, fwd, rev)])
    resid = float(np.max(np.abs(build_dissipator(spec).apply(state.data).data)))
    return AttractorResult(state, Operator(h_bar), deltas, resid, zero_t)


def check_time_translation(l_super: Superoperator, h_d, t: float, s: float) -> float:
    """Commutation residual || e^{Lt} U_D(s) - U_D(s) e^{Lt} ||_max.

    U_D(s) is the Liouville unitary of the free Hamiltonian.  Dissipators
    built from eigenoperators of H_D (with dephasing diagonal in the energy
    projectors) commute with the free map to numerical precision.
    """
    prop = matrix_exp(l_super.data * t)
    free = liouville_unitary(h_d, s).data
    return float(np.max(np.abs(prop @ free - free @ prop)))


def choi_matrix(s_super: Superoperator) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) E(|i><j|) of a superoperator.

    Positive semi-definite iff the map is completely positive; the trace
    equals d for a trace-preserving map.
    """
    d = s_super.source_dim
    t = s_super.data.reshape(d, d, d, d)  # axes (b, a, j, i) of S[b*d+a, j*d+i]
    return t.transpose(3, 1, 2, 0).reshape(d * d, d * d)
