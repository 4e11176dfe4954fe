"""Spectral densities, thermal occupation, and the driven-qubit kinetic
coefficients.

Units: hbar = k_B = 1, temperatures in energy units, frequencies in
rad/time.  The spectral density is only ever evaluated at |omega|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContractError
from .jaynes_cummings import JCParams

_MODELS = ("ohmic", "cubic", "flat", "band")


@dataclass(frozen=True)
class BathSpec:
    """Bath temperature plus a named spectral-density model.

    Models (omega >= 0):
      ohmic:  J = eta * omega * exp(-omega/omega_cut)
      cubic:  J = eta * omega**3 * exp(-omega/omega_cut)  (3d field)
      flat:   J = eta on [0, omega_cut]
      band:   J = eta on [omega_lo, omega_hi]  (gapped; for suppressing
              individual Mollow side-bands)
    """

    temperature: float
    model: str = "ohmic"
    eta: float = 1.0
    omega_cut: float = 10.0
    omega_lo: float = 0.0
    omega_hi: float = math.inf

    def __post_init__(self):
        if self.temperature < 0:
            raise ContractError("temperature must be nonnegative")
        if self.model not in _MODELS:
            raise ContractError(f"unknown spectral-density model {self.model!r}; "
                                f"choose from {_MODELS}")
        if self.eta < 0:
            raise ContractError("eta must be nonnegative")

    def spectral_density(self, omega: float) -> float:
        """J(omega) for omega >= 0."""
        w = float(omega)
        if w < 0:
            raise ContractError("spectral density is defined for omega >= 0; "
                                "pass |omega|")
        if self.model == "ohmic":
            return self.eta * w * math.exp(-w / self.omega_cut)
        if self.model == "cubic":
            return self.eta * w ** 3 * math.exp(-w / self.omega_cut)
        if self.model == "flat":
            return self.eta if w <= self.omega_cut else 0.0
        return self.eta if self.omega_lo <= w <= self.omega_hi else 0.0


def bose_einstein(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1 / (exp(omega/T) - 1) for omega > 0."""
    if omega <= 0:
        raise ContractError("bose_einstein requires omega > 0; pass |omega|")
    if temperature < 0:
        raise ContractError("temperature must be nonnegative")
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(omega / temperature)


def gamma_one_sided(nu: float, bath: BathSpec) -> complex:
    """Real part of the one-sided environment response at frequency nu.

    Emission side (nu > 0): J(nu) (N(nu) + 1); absorption side (nu < 0):
    J(|nu|) N(|nu|), the detailed-balance-consistent continuation.  The
    principal-value (imaginary) part is set to zero; the Lamb shift is out
    of scope.  At nu = 0 the limit is finite for ohmic (eta*T) and cubic
    (zero) models with T > 0 and diverges for flat/band supports containing
    zero.
    """
    if nu > 0:
        return complex(bath.spectral_density(nu) * (bose_einstein(nu, bath.temperature) + 1.0))
    if nu < 0:
        if bath.temperature == 0.0:
            return 0.0 + 0.0j
        return complex(bath.spectral_density(-nu) * bose_einstein(-nu, bath.temperature))
    # nu == 0 limits
    if bath.model == "ohmic":
        return complex(bath.eta * bath.temperature)
    if bath.model == "cubic":
        return 0.0 + 0.0j
    if bath.temperature == 0.0 or bath.spectral_density(0.0) == 0.0:
        return 0.0 + 0.0j
    raise ContractError("one-sided response diverges at nu = 0 for a flat "
                        "spectral density with T > 0")


def jc_sideband_weights(params: JCParams) -> tuple[float, float]:
    """(s_plus, s_minus): squared eigenoperator amplitudes at the side-bands.

    s_pm = (Omega pm Delta)^2 / (4 Omega^2) weighs every term of the
    kinetic coefficients evaluated at frequency omega_c pm Omega.
    Equivalently (Delta(Delta pm Omega) + 2 g^2 |alpha|^2) / (2 Omega^2).
    """
    om, dl = params.rabi, params.delta
    return (om + dl) ** 2 / (4 * om ** 2), (om - dl) ** 2 / (4 * om ** 2)


def jc_kinetic_coefficients(params: JCParams, bath: BathSpec) -> tuple[float, float, float]:
    """Kinetic coefficients (gamma_0, gamma_minus, gamma_plus) of the
    driven-qubit master equation with a sigma_x coupling to a thermal bath.

    gamma_0 multiplies the invariant (dephasing) channel and draws on the
    carrier frequency omega_c; gamma_minus / gamma_plus are the decay and
    excitation rates of the F_-/F_+ channels and draw on the Mollow
    side-bands omega_c +- Omega:

        gamma_0     = k0 * (Gamma(omega_c) + Gamma(-omega_c))
        gamma_minus = s_plus  * Gamma(omega_c + Omega) + s_minus * Gamma(Omega - omega_c)
        gamma_plus  = s_minus * Gamma(omega_c - Omega) + s_plus  * Gamma(-omega_c - Omega)

    with k0 = 2 g^2 |alpha|^2 / Omega^2, Gamma the one-sided response, and
    the side-band weights of :func:`jc_sideband_weights`.  All outputs are
    nonnegative.
    """
    om = params.rabi
    if om <= 0:
        raise ContractError("degenerate drive: Omega must be positive")
    wc = params.omega_c
    k0 = 2.0 * params.g ** 2 * abs(params.alpha) ** 2 / om ** 2
    s_plus, s_minus = jc_sideband_weights(params)
    gamma0 = k0 * (gamma_one_sided(wc, bath) + gamma_one_sided(-wc, bath)).real
    gamma_minus = (s_plus * gamma_one_sided(wc + om, bath)
                   + s_minus * gamma_one_sided(om - wc, bath)).real
    gamma_plus = (s_minus * gamma_one_sided(wc - om, bath)
                  + s_plus * gamma_one_sided(-wc - om, bath)).real
    out = (gamma0, gamma_minus, gamma_plus)
    if min(out) < 0:
        raise ContractError(f"negative kinetic coefficient {out}")
    return out
