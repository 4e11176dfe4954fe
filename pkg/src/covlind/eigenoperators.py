"""Eigenoperators of the free dynamics.

Static case: the transition operators |psi_n><psi_m| of a Hermitian
Hamiltonian, labeled by Bohr frequencies omega_nm = eps_m - eps_n, plus the
energy projectors as invariants.  The Schroedinger-picture map
rho -> U rho U^dag multiplies |psi_n><psi_m| by exp(+i omega_nm t); the
Heisenberg picture by exp(-i omega_nm t).

Driven case: eigenoperators of the one-period Heisenberg propagator
(monodromy), with frequencies in the Heisenberg convention of
d/dt P^H = i lambda P^H (a raising-type operator carries positive lambda).
Monodromy phases are principal values, so reported frequencies live in
(-pi/T, pi/T]; drives whose eigenfrequencies exceed half the drive
frequency fold back and are flagged as degenerate when they collide.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, IntegrationError
from .operators import (
    Operator,
    Superoperator,
    commutator_super,
    hermitian_eig,
    unvec,
    vec,
    _as_matrix,
)


class DegeneracyWarning(UserWarning):
    """Monodromy eigenvalues collided; the affected subspace is arbitrary."""


@dataclass
class EigenoperatorSet:
    """Eigenoperators with frequencies and invariant flags.

    ``pairs`` records, for static sets, which (n, m) eigenstate pair each
    non-invariant transition operator connects.
    """

    ops: list
    freqs: np.ndarray
    invariant_flags: np.ndarray
    projectors: list = field(default_factory=list)
    pairs: list = field(default_factory=list)

    def non_invariant(self):
        return [op for op, inv in zip(self.ops, self.invariant_flags) if not inv]

    def invariant(self):
        return [op for op, inv in zip(self.ops, self.invariant_flags) if inv]

    def gram(self) -> np.ndarray:
        vs = np.array([vec(op) for op in self.ops])
        return vs.conj() @ vs.T

    def completeness_rank(self, tol: float = 1e-8) -> int:
        vs = np.array([vec(op) for op in self.ops])
        return int(np.linalg.matrix_rank(vs, tol=tol))


@dataclass
class DrivenGenerator:
    """Time-dependent Hermitian Hamiltonian t -> H(t), optionally periodic."""

    h_of_t: Callable[[float], object]
    period: float | None = None

    def matrix(self, t: float) -> np.ndarray:
        h = _as_matrix(self.h_of_t(t))
        if np.max(np.abs(h - h.conj().T)) > 1e-10:
            raise ContractError(f"H(t={t}) is not Hermitian")
        return h

    @property
    def dim(self) -> int:
        return self.matrix(0.0).shape[0]


def static_eigenoperators(h_d, tol: float = 1e-10) -> EigenoperatorSet:
    """Transition operators and projectors of a static Hamiltonian.

    Verifies the dynamical-map eigenrelation U G U^dag = exp(i omega t) G at
    one sample time before returning.
    """
    hm = _as_matrix(h_d)
    w, v = hermitian_eig(hm, tol=max(tol, 1e-10))
    d = hm.shape[0]
    scale0 = max(1.0, float(np.max(np.abs(w))) if d else 1.0)
    ops, freqs, flags, pairs = [], [], [], []
    for n in range(d):
        for m in range(d):
            if n == m:
                continue
            g = np.outer(v[:, n], v[:, m].conj())
            ops.append(Operator(g))
            freqs.append(w[m] - w[n])
            # a vanishing Bohr frequency (degenerate levels) commutes with H
            flags.append(bool(abs(w[m] - w[n]) < 1e-9 * scale0))
            pairs.append((n, m))
    projectors = [Operator(np.outer(v[:, j], v[:, j].conj())) for j in range(d)]
    for p in projectors:
        ops.append(p)
        freqs.append(0.0)
        flags.append(True)
        pairs.append(None)

    scale = max(1.0, float(np.max(np.abs(w))) if d else 1.0)
    t_check = 0.7 / scale
    u = hermitian_unitary(hm, t_check)
    for g, om in zip(ops[: d * (d - 1)], freqs[: d * (d - 1)]):
        resid = np.max(np.abs(u @ g.data @ u.conj().T - np.exp(1j * om * t_check) * g.data))
        if resid > 1e-8:
            raise ContractError(f"transition operator failed the eigenrelation ({resid:.2e})")
    return EigenoperatorSet(ops, np.array(freqs), np.array(flags), projectors, pairs)


def hermitian_unitary(h, t: float) -> np.ndarray:
    """exp(-i H t) through the eigendecomposition (H Hermitian)."""
    w, v = np.linalg.eigh(_as_matrix(h))
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def bohr_nondegenerate(h_d, rel_tol: float = 1e-9):
    """Check that all Bohr frequencies of a Hamiltonian are distinct.

    Returns (ok, offending) where offending lists colliding ordered pairs
    ((n, m), (k, l)).  A vanishing Bohr frequency (degenerate levels) counts
    as a collision with the invariant sector.
    """
    hm = _as_matrix(h_d)
    w, _ = hermitian_eig(hm)
    d = hm.shape[0]
    entries = []
    for n in range(d):
        for m in range(d):
            if n != m:
                entries.append(((n, m), w[m] - w[n]))
    scale = max(1.0, float(np.max(np.abs(w))) if d else 1.0)
    tol = rel_tol * scale
    offending = []
    for i in range(len(entries)):
        if abs(entries[i][1]) < tol:
            offending.append((entries[i][0], None))
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if abs(entries[i][1] - entries[j][1]) < tol:
                offending.append((entries[i][0], entries[j][0]))
    return len(offending) == 0, offending


def heisenberg_generator(gen: DrivenGenerator, t: float) -> Superoperator:
    """Liouville matrix of X -> i [H(t), X] (Schroedinger-frame kernel)."""
    return 1j * commutator_super(gen.matrix(t))


def integrate_unitary(gen: DrivenGenerator, t0: float, t1: float, steps: int,
                      renorm_every: int = 100) -> np.ndarray:
    """RK4 integration of dU/dt = -i H(t) U with periodic re-unitarization."""
    d = gen.dim
    u = np.eye(d, dtype=complex)
    dt = (t1 - t0) / steps

    def rhs(t, m):
        return -1j * gen.matrix(t) @ m

    for k in range(steps):
        t = t0 + k * dt
        k1 = rhs(t, u)
        k2 = rhs(t + dt / 2, u + dt / 2 * k1)
        k3 = rhs(t + dt / 2, u + dt / 2 * k2)
        k4 = rhs(t + dt, u + dt * k3)
        u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if (k + 1) % renorm_every == 0:
            # polar projection keeps the propagator on the unitary group
            a, _, b = np.linalg.svd(u)
            u = a @ b
    return u


def _phase_fix(vecs: np.ndarray) -> np.ndarray:
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col)))
        phase = col[idx] / abs(col[idx])
        out[:, k] = col / phase
    return out


def monodromy_eigenoperators(gen: DrivenGenerator, steps: int = 4096,
                             unitary_tol: float = 1e-8,
                             invariant_tol: float = 1e-8) -> EigenoperatorSet:
    """Eigenoperators of the one-period Heisenberg propagator.

    Builds U(T) by time-ordered integration, forms the Heisenberg Liouville
    map X -> U^dag X U, and diagonalizes it.  Eigenvalues exp(i theta_k)
    give average eigenfrequencies lambda_k = theta_k / T with theta the
    principal phase; frequencies beyond half the drive frequency are not
    identifiable from a single period.  Colliding eigenvalues are reported
    as a DegeneracyWarning and their subspace re-orthonormalized.
    """
    if gen.period is None:
        raise ContractError("monodromy requires gen.period")
    d = gen.dim
    if d > 32:
        raise ContractError("dense monodromy limited to dimension <= 32")
    T = float(gen.period)
    u = integrate_unitary(gen, 0.0, T, steps)
    unit_resid = np.max(np.abs(u.conj().T @ u - np.eye(d)))
    if unit_resid > unitary_tol:
        raise IntegrationError(f"monodromy is not unitary within {unitary_tol} "
                               f"(residual {unit_resid:.2e}); increase steps")
    k_map = np.kron(u.T, u.conj().T)
    evals, evecs = np.linalg.eig(k_map)
    thetas = np.angle(evals)

    # cluster colliding eigenvalues on the unit circle (wrap-aware) and
    # orthonormalize inside each cluster
    order = np.argsort(thetas)
    thetas = thetas[order]
    evecs = evecs[:, order]
    clusters: list[list[int]] = []
    for i in range(len(thetas)):
        if clusters and abs(np.exp(1j * thetas[i]) - np.exp(1j * thetas[clusters[-1][0]])) < 1e-7:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    if len(clusters) > 1 and abs(np.exp(1j * thetas[clusters[0][0]])
                                 - np.exp(1j * thetas[clusters[-1][-1]])) < 1e-7:
        clusters[0] = clusters.pop() + clusters[0]
    for cl in clusters:
        if len(cl) > 1:
            block = evecs[:, cl]
            q, _ = np.linalg.qr(block)
            evecs[:, cl] = q

    id_vec = vec(np.eye(d)) / np.sqrt(d)
    ops, freqs, flags = [], [], []
    for cl in clusters:
        block = evecs[:, cl]
        id_weight = float(np.linalg.norm(id_vec.conj() @ block))
        holds_identity = id_weight > 0.99
        invariant_cluster = (holds_identity
                             or abs(np.exp(1j * thetas[cl[0]]) - 1.0) < invariant_tol)
        if invariant_cluster:
            if len(cl) > d:
                warnings.warn(
                    f"invariant cluster has {len(cl)} members (> dim {d}); "
                    "eigenfrequencies commensurate with the drive may have "
                    "folded onto the invariants", DegeneracyWarning)
            # the identity direction is trivial; list it first, then the rest
            coeffs = id_vec.conj() @ block
            residual_block = block - np.outer(id_vec, coeffs)
            q, r = np.linalg.qr(residual_block)
            keep = [j for j in range(q.shape[1]) if abs(r[j, j]) > 1e-7]
            members = ([id_vec] if holds_identity else []) + [q[:, j] for j in keep]
            for mvec in members:
                ops.append(Operator(unvec(_phase_fix(mvec[:, None])[:, 0], d)))
                freqs.append(0.0)
                flags.append(True)
        else:
            if len(cl) > 1:
                warnings.warn(
                    f"monodromy eigenvalue exp(i{thetas[cl[0]]:.6f}) is "
                    f"{len(cl)}-fold degenerate; subspace indices {cl} are arbitrary",
                    DegeneracyWarning)
            for i in cl:
                ops.append(Operator(unvec(_phase_fix(evecs[:, i:i + 1])[:, 0], d)))
                freqs.append(thetas[i] / T)
                flags.append(False)
    # normalize to unit Hilbert-Schmidt norm (eigenvectors already near-unit)
    ops = [Operator(op.data / op.hs_norm()) for op in ops]
    return EigenoperatorSet(ops, np.array(freqs), np.array(flags))


def frequency_eigenoperators(h_s, omega: float):
    """Eigenpairs of the single-harmonic frequency-domain kernel.

    Diagonalizes kron(I, H) - kron(H.T, I) - omega * I, which is Hermitian
    for Hermitian H; returns (values, operators) where the values are the
    kernel eigenvalues (the negatives of the drive eigenfrequencies) in
    ascending order and the operators are the unvec'd eigenvectors.
    """
    hm = _as_matrix(h_s)
    d = hm.shape[0]
    kernel = commutator_super(hm).data - omega * np.eye(d * d)
    vals, vecs = hermitian_eig(kernel)
    ops = [Operator(unvec(vecs[:, k], d)) for k in range(d * d)]
    return vals, ops


def deviation_up_to_phase(a, b) -> float:
    """max-entry deviation between operators after optimal global phase."""
    am, bm = _as_matrix(a), _as_matrix(b)
    ip = np.trace(am.conj().T @ bm)
    phase = ip / abs(ip) if abs(ip) > 1e-300 else 1.0
    return float(np.max(np.abs(am * phase - bm)))


def verify_eigenoperator(p, lam: float, gen: DrivenGenerator, grid,
                         substeps: int = 40) -> float:
    """Residual of the Heisenberg eigenvalue relation along a time grid.

    ``p`` is either a fixed Operator or a callable t -> Operator giving the
    Schroedinger-picture eigenoperator family; the residual is
    max_t || U^dag(t) P(t) U(t) - exp(i lam (t - t0)) P(t0) ||_max.
    """
    p_of_t = p if callable(p) else (lambda _t: p)
    p0 = _as_matrix(p_of_t(grid.t0))
    d = p0.shape[0]
    u = np.eye(d, dtype=complex)
    resid = 0.0
    times = grid.times()
    for i in range(1, len(times)):
        cks = integrate_unitary(DrivenGenerator(gen.h_of_t), times[i - 1], times[i],
                                substeps)
        u = cks @ u
        pt = _as_matrix(p_of_t(times[i]))
        lhs = u.conj().T @ pt @ u
        rhs = np.exp(1j * lam * (times[i] - grid.t0)) * p0
        resid = max(resid, float(np.max(np.abs(lhs - rhs))))
    return resid
