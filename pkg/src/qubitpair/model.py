"""Physical model: parameters, Hamiltonian eigensystem, bath kernel, Gibbs state.

Two identical qubits with level splitting ``epsilon`` interact through an
exchange term with strength ``K`` and dissipate into two independent bosonic
baths.  Each bath couples through a Lorentzian density of modes of half-width
``gamma`` centred on the qubit frequency, which after the weak-coupling
elimination leaves a single time-dependent decay rate

    R(t) = (gamma0 / 2) * (1 - exp(-gamma * t))

and its running integral D(t).  Units: hbar = k_B = 1, so ``beta = 1/T``.

Basis convention (shared by every module): computational product basis in the
fixed order {|00>, |10>, |01>, |11>}, indices 1..4.  The first digit is qubit
one, the second digit is qubit two; sigma_z|0> = +|0>, so |11> is the ground
state of the free part.  In Kronecker products qubit one is the fast (right)
factor: index = q1 + 2*q2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import InvalidStateError

__all__ = [
    "BASIS_LABELS",
    "ModelParams",
    "XState",
    "hamiltonian",
    "hamiltonian_eigensystem",
    "spectral_density",
    "memory_kernel",
    "decoherence_integral",
    "log_partition_function",
    "partition_function",
    "gibbs_weights",
    "thermal_state",
    "validate_density_matrix",
    "is_x_type",
    "kbt_to_beta",
]

BASIS_LABELS = ("00", "10", "01", "11")

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |0><1|, raises sigma_z
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|


def op_qubit1(op: np.ndarray) -> np.ndarray:
    """Embed a single-qubit operator on qubit one (fast index)."""
    return np.kron(I2, op)


def op_qubit2(op: np.ndarray) -> np.ndarray:
    """Embed a single-qubit operator on qubit two (slow index)."""
    return np.kron(op, I2)


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of one scenario.

    Attributes
    ----------
    coupling_k : exchange constant K between the qubits (may be 0 or negative).
    epsilon    : qubit level splitting.
    gamma      : Lorentzian half-width of the bath coupling density (> 0).
    gamma0     : dissipation scale; the long-time decay rate is gamma0/2.
    """

    coupling_k: float
    epsilon: float = 0.001
    gamma: float = 10.0
    gamma0: float = 0.1

    def __post_init__(self):
        for name in ("coupling_k", "epsilon", "gamma", "gamma0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma!r}")
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be >= 0, got {self.gamma0!r}")


@dataclass(frozen=True)
class XState:
    """Compact form of the X-type states this model produces (rho_14 = 0).

    ``p00`` .. ``p11`` are the populations of |00>, |10>, |01>, |11>
    (the diagonal entries rho_11, rho_22, rho_33, rho_44) and ``coh`` is the
    single inner coherence rho_23 = <10|rho|01>; rho_32 is its conjugate.
    """

    p00: float
    p10: float
    p01: float
    p11: float
    coh: complex

    def to_matrix(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.p00
        rho[1, 1] = self.p10
        rho[2, 2] = self.p01
        rho[3, 3] = self.p11
        rho[1, 2] = self.coh
        rho[2, 1] = np.conj(self.coh)
        return rho

    @classmethod
    def from_matrix(cls, rho: np.ndarray, atol: float = 1e-12) -> "XState":
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if not is_x_type(rho, atol=atol):
            raise InvalidStateError(
                "matrix has entries outside the diagonal + rho_23 block "
                f"larger than {atol}"
            )
        return cls(
            p00=rho[0, 0].real,
            p10=rho[1, 1].real,
            p01=rho[2, 2].real,
            p11=rho[3, 3].real,
            coh=complex(rho[1, 2]),
        )

    def populations(self) -> np.ndarray:
        return np.array([self.p00, self.p10, self.p01, self.p11])

    def check(self, atol: float = 1e-10) -> None:
        """Raise InvalidStateError if the state violates its invariants."""
        pops = self.populations()
        if abs(pops.sum() - 1.0) > 1e-12:
            raise InvalidStateError(f"populations sum to {pops.sum()!r}, not 1")
        if pops.min() < -atol:
            raise InvalidStateError(f"negative population {pops.min()!r}")
        if abs(self.coh) ** 2 > self.p10 * self.p01 + atol:
            raise InvalidStateError(
                f"|coh|^2 = {abs(self.coh)**2!r} exceeds p10*p01 = {self.p10*self.p01!r}"
            )


def kbt_to_beta(kbt: float) -> float:
    if kbt <= 0:
        raise ValueError(f"kbT must be > 0, got {kbt!r}")
    return 1.0 / kbt


def hamiltonian(params: ModelParams) -> np.ndarray:
    """Assemble the 4x4 system Hamiltonian from Pauli operators."""
    h = 0.5 * params.epsilon * (op_qubit1(SIGMA_Z) + op_qubit2(SIGMA_Z))
    h = h + params.coupling_k * (
        np.kron(SIGMA_MINUS, SIGMA_PLUS) + np.kron(SIGMA_PLUS, SIGMA_MINUS)
    )
    return h


def hamiltonian_eigensystem(params: ModelParams):
    """Eigenpairs of the system Hamiltonian in a fixed, documented order.

    Returns the four (eigenvalue, eigenvector) pairs
    (-K, singlet), (+K, triplet), (-epsilon, |11>), (+epsilon, |00>),
    with the singlet/triplet (|10> -+ |01>)/sqrt(2).
    """
    k, eps = params.coupling_k, params.epsilon
    s = 1.0 / math.sqrt(2.0)
    singlet = np.array([0, s, -s, 0], dtype=complex)
    triplet = np.array([0, s, s, 0], dtype=complex)
    ket11 = np.array([0, 0, 0, 1], dtype=complex)
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    return [(-k, singlet), (k, triplet), (-eps, ket11), (eps, ket00)]


def spectral_density(omega, params: ModelParams):
    """Lorentzian coupling density, normalised to unit area over the real line.

    Peaks at omega = epsilon with value 1/(pi*gamma); half-maximum at
    omega = epsilon +- gamma.
    """
    g = params.gamma
    d = np.asarray(omega, dtype=float) - params.epsilon
    out = (1.0 / (math.pi * g)) * (g * g / (d * d + g * g))
    return float(out) if np.isscalar(omega) else out


def _check_nonnegative_time(t) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError(f"time must be >= 0, got {t!r}")
    return arr


def memory_kernel(t, params: ModelParams):
    """Time-dependent decay rate R(t) = (gamma0/2)(1 - exp(-gamma t)).

    Monotone nondecreasing, bounded by gamma0/2 (the long-time plateau).
    """
    arr = _check_nonnegative_time(t)
    out = -0.5 * params.gamma0 * np.expm1(-params.gamma * arr)
    return float(out) if np.isscalar(t) else out


def decoherence_integral(t, params: ModelParams):
    """Running integral D(t) of the decay rate; controls every decay envelope.

    D(t) = (gamma0/2) t + (gamma0 / (2 gamma)) (exp(-gamma t) - 1), D(0) = 0,
    dD/dt = R(t).
    """
    arr = _check_nonnegative_time(t)
    g0, g = params.gamma0, params.gamma
    out = 0.5 * g0 * arr + (0.5 * g0 / g) * np.expm1(-g * arr)
    return float(out) if np.isscalar(t) else out


def _check_beta(beta: float) -> float:
    if beta < 0 or not math.isfinite(beta):
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    return float(beta)


def _gibbs_exponents(beta: float, params: ModelParams) -> np.ndarray:
    # exponents of e^{-beta*lambda} over (singlet, triplet, |11>, |00>)
    k, eps = params.coupling_k, params.epsilon
    return np.array([beta * k, -beta * k, beta * eps, -beta * eps])


def log_partition_function(beta: float, params: ModelParams) -> float:
    """log Z for the four-level spectrum, overflow-safe for any beta >= 0."""
    beta = _check_beta(beta)
    return float(logsumexp(_gibbs_exponents(beta, params)))


def partition_function(beta: float, params: ModelParams) -> float:
    """Z = 2 cosh(beta K) + 2 cosh(beta epsilon).

    May overflow to inf for extreme beta*K; use :func:`log_partition_function`
    in that regime.
    """
    with np.errstate(over="ignore"):
        return float(np.exp(log_partition_function(beta, params)))


def gibbs_weights(beta: float, params: ModelParams) -> np.ndarray:
    """Normalised Boltzmann weights of (singlet, triplet, |11>, |00>).

    Computed in the log domain and normalised, so beta up to ~1e3 (and beyond)
    never overflows.
    """
    beta = _check_beta(beta)
    x = _gibbs_exponents(beta, params)
    w = np.exp(x - logsumexp(x))
    return w / w.sum()


def thermal_state(beta: float, params: ModelParams) -> XState:
    """Gibbs state exp(-beta H)/Z expressed in the computational basis.

    beta = 0 is the maximally mixed state I/4; beta -> inf selects the ground
    state (the singlet when K is the largest gap).
    """
    w_singlet, w_triplet, w11, w00 = gibbs_weights(beta, params)
    p = 0.5 * (w_singlet + w_triplet)          # cosh(beta K)/Z
    coh = 0.5 * (w_triplet - w_singlet)        # -sinh(beta K)/Z
    return XState(p00=w00, p10=p, p01=p, p11=w11, coh=complex(coh))


def validate_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    psd_tol: float = 1e-10,
) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the input array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected 4x4, got shape {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise InvalidStateError(f"not Hermitian: max |rho - rho^dag| = {herm!r}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace = {tr!r}, not 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if lam.min() < -psd_tol:
        raise InvalidStateError(f"negative eigenvalue {lam.min()!r}")
    return rho


def is_x_type(rho: np.ndarray, atol: float = 1e-12) -> bool:
    """True when all entries off the diagonal+rho_23 X pattern are below atol."""
    rho = np.asarray(rho, dtype=complex)
    mask = np.zeros((4, 4), dtype=bool)
    mask[np.diag_indices(4)] = True
    mask[1, 2] = mask[2, 1] = True
    return bool(np.abs(rho[~mask]).max() <= atol)
