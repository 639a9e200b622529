"""Entropies, concurrence, entanglement of formation and quantum discord.

All entropies are in bits (log base 2).  Subsystem conventions follow the
basis order {|00>, |10>, |01>, |11>}: subsystem A is the qubit whose marginal
populations are (rho_11 + rho_22, rho_33 + rho_44) and subsystem B (the
measured side) the one with (rho_11 + rho_33, rho_22 + rho_44).

Two routes compute the measured conditional entropy:

* the brute-force route builds the projectors (I x Pi) explicitly and is the
  authority everywhere;
* the X-state route evaluates the same quantity through the closed-form
  spectrum of the post-measurement states.  It is an accelerator, validated
  against the brute-force route, never the reverse.  Its optional
  ``include_linear_term`` variant adds a -16 m rho_23 term that appears in
  some derivations of the closed form; that variant is inconsistent with the
  projective computation and exists only so the validation suite can report
  the deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import FormulaInconsistencyError, InvalidStateError, NumericalFailureError
from .model import SIGMA_X, SIGMA_Y, SIGMA_Z, I2, XState

__all__ = [
    "MeasurementParams",
    "DiscordBreakdown",
    "binary_entropy",
    "von_neumann_entropy",
    "reduced_state",
    "concurrence_general",
    "concurrence_xstate",
    "entanglement_of_formation",
    "mutual_information",
    "conditional_entropy_measured",
    "classical_correlation",
    "xstate_conditional_entropy",
    "classical_correlation_xstate",
    "quantum_discord",
    "discord_xstate",
]

# hemisphere grid scanned before refinement; antipodal directions relabel the
# outcomes, so theta in [0, pi/2] with full phi covers every projective pair
_N_THETA = 65
_N_PHI = 129
_PROB_FLOOR = 1e-14


@dataclass(frozen=True)
class MeasurementParams:
    """SU(2) parametrisation of a rank-1 projective measurement on qubit B.

    V = w*I + i*(y1 sx + y2 sy + y3 sz) with w^2 + |y|^2 = 1 rotates the
    computational basis into the measured basis.  The derived quantities
    k = w^2 + y3^2, l = y1^2 + y2^2 (k + l = 1) and m = (w y1 + y2 y3)^2
    are what the closed-form conditional entropy consumes.
    """

    w: float
    y1: float
    y2: float
    y3: float

    def __post_init__(self):
        norm = self.w**2 + self.y1**2 + self.y2**2 + self.y3**2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"w^2 + |y|^2 = {norm!r}, expected 1")

    @property
    def k(self) -> float:
        return self.w**2 + self.y3**2

    @property
    def l(self) -> float:
        return self.y1**2 + self.y2**2

    @property
    def m(self) -> float:
        return (self.w * self.y1 + self.y2 * self.y3) ** 2

    @classmethod
    def from_bloch_angles(cls, theta: float, phi: float = 0.0) -> "MeasurementParams":
        """Measurement along the Bloch direction (theta, phi)."""
        half = 0.5 * theta
        return cls(
            w=math.cos(half),
            y1=math.sin(half) * math.sin(phi),
            y2=-math.sin(half) * math.cos(phi),
            y3=0.0,
        )

    @classmethod
    def from_direction(cls, n) -> "MeasurementParams":
        n = np.asarray(n, dtype=float)
        theta = math.acos(min(1.0, max(-1.0, n[2] / np.linalg.norm(n))))
        phi = math.atan2(n[1], n[0])
        return cls.from_bloch_angles(theta, phi)

    @property
    def bloch_direction(self) -> np.ndarray:
        """Unit vector n with Pi_0 = (I + n.sigma)/2."""
        w, y1, y2, y3 = self.w, self.y1, self.y2, self.y3
        return np.array(
            [2.0 * (y1 * y3 - w * y2), 2.0 * (w * y1 + y2 * y3), self.k - self.l]
        )

    def unitary(self) -> np.ndarray:
        return self.w * I2 + 1j * (self.y1 * SIGMA_X + self.y2 * SIGMA_Y + self.y3 * SIGMA_Z)


@dataclass(frozen=True)
class DiscordBreakdown:
    """Total, classical and quantum correlations plus the optimal measurement."""

    total_correlation: float
    classical_correlation: float
    discord: float
    argmax_measurement: MeasurementParams


def binary_entropy(p) -> float | np.ndarray:
    """-p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    arr = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    out = np.zeros_like(arr)
    for q in (arr, 1.0 - arr):
        mask = q > 0.0
        out = out - np.where(mask, q * np.log2(np.where(mask, q, 1.0)), 0.0)
    return float(out) if np.isscalar(p) or arr.ndim == 0 else out


def _entropy_of_eigenvalues(lam: np.ndarray) -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.min() < -1e-8:
        raise InvalidStateError(f"eigenvalue {lam.min()!r} below -1e-8")
    lam = np.clip(lam, 0.0, None)
    nz = lam[lam > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits of a Hermitian PSD trace-1 matrix (any dimension)."""
    rho = np.asarray(rho, dtype=complex)
    return _entropy_of_eigenvalues(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))


def reduced_state(rho: np.ndarray, which: str) -> np.ndarray:
    """Partial trace onto subsystem 'A' or 'B' of a two-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    r = rho.reshape(2, 2, 2, 2)  # axes (a, b, a', b'), index = b + 2a
    if which == "A":
        return np.einsum("abcb->ac", r)
    if which == "B":
        return np.einsum("abad->bd", r)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def concurrence_general(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    max(0, l1 - l2 - l3 - l4) over the descending square roots of the
    eigenvalues of rho * (sy x sy) rho^* (sy x sy).  Those roots are computed
    as the singular values of sqrt(rho) (sy x sy) conj(sqrt(rho)), which is
    similar to the textbook product but keeps full absolute precision when a
    root sits near zero (the rank-deficient boundary defeats a direct
    eigensolve of the non-normal product).
    """
    rho = np.asarray(rho, dtype=complex)
    herm_residue = np.abs(rho - rho.conj().T).max()
    if herm_residue > 1e-8:
        raise NumericalFailureError(
            f"spin-flip spectrum would carry imaginary residue: input is "
            f"non-Hermitian by {herm_residue!r}"
        )
    lam_rho, u = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if lam_rho.min() < -1e-8:
        raise NumericalFailureError(
            f"input has negative eigenvalue {lam_rho.min()!r}"
        )
    sqrt_rho = (u * np.sqrt(np.clip(lam_rho, 0.0, None))) @ u.conj().T
    syy = np.kron(SIGMA_Y, SIGMA_Y)
    lam = np.linalg.svd(sqrt_rho @ syy @ sqrt_rho.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_xstate(x: XState) -> float:
    """Concurrence specialised to X-type states with rho_14 = 0."""
    return float(max(0.0, 2.0 * (abs(x.coh) - math.sqrt(max(0.0, x.p00 * x.p11)))))


def entanglement_of_formation(c: float) -> float:
    """EOF in bits from the concurrence: h((1 + sqrt(1 - c^2))/2)."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c!r}")
    c = min(1.0, max(0.0, c))
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def mutual_information(rho: np.ndarray) -> float:
    """S(A) + S(B) - S(AB), the total correlation in bits."""
    return (
        von_neumann_entropy(reduced_state(rho, "A"))
        + von_neumann_entropy(reduced_state(rho, "B"))
        - von_neumann_entropy(rho)
    )


def _projector(direction: np.ndarray, sign: float) -> np.ndarray:
    n = direction
    return 0.5 * (I2 + sign * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z))


def conditional_entropy_measured(rho: np.ndarray, direction) -> float:
    """sum_j p_j S(rho_j) after projecting qubit B along a Bloch direction.

    Built from the literal sandwich (I x Pi_j) rho (I x Pi_j); outcomes with
    probability below 1e-14 contribute zero.
    """
    rho = np.asarray(rho, dtype=complex)
    n = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError(f"direction must be unit length, got |n| = {np.linalg.norm(n)!r}")
    total = 0.0
    for sign in (+1.0, -1.0):
        proj = np.kron(I2, _projector(n, sign))
        sandwiched = proj @ rho @ proj
        p = float(sandwiched.trace().real)
        if p < _PROB_FLOOR:
            continue
        total += p * von_neumann_entropy(sandwiched / p)
    return total


def _measured_entropy_grid(rho: np.ndarray, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Conditional entropy on a (theta, phi) grid, batched.

    Contracts the measured qubit against the projector kets; equivalent to
    the literal sandwich (pinned by tests) but evaluated for all directions
    at once.  Shape of the result: (len(thetas), len(phis)).
    """
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    th = thetas[:, None]
    ph = phis[None, :]
    c, s = np.cos(0.5 * th), np.sin(0.5 * th)
    e = np.exp(1j * ph)
    # orthonormal measured-basis kets on B for every grid direction
    v0 = np.stack([np.broadcast_to(c + 0j, (len(thetas), len(phis))), s * e], axis=-1)
    v1 = np.stack([-s / e, np.broadcast_to(c + 0j, (len(thetas), len(phis)))], axis=-1)
    total = np.zeros((len(thetas), len(phis)))
    for v in (v0, v1):
        q = np.einsum("tpb,abcd,tpd->tpac", v.conj(), r, v)
        q00 = q[..., 0, 0].real
        q11 = q[..., 1, 1].real
        p = q00 + q11
        disc = np.sqrt(np.clip((0.5 * (q00 - q11)) ** 2 + np.abs(q[..., 0, 1]) ** 2, 0.0, None))
        for lam in (0.5 * (q00 + q11) + disc, 0.5 * (q00 + q11) - disc):
            lam = np.clip(lam, 0.0, None)
            ok = (lam > 0.0) & (p > _PROB_FLOOR)
            ratio = np.where(ok, lam / np.where(p > 0, p, 1.0), 1.0)
            total -= np.where(ok, lam * np.log2(ratio), 0.0)
    return total


def classical_correlation(rho: np.ndarray) -> tuple[float, np.ndarray]:
    """sup over projective measurements on B of S(A) - S(rho|measurement).

    Coarse hemisphere scan (65 x 129 directions) followed by Nelder-Mead
    refinement from the two best separated grid cells; the grid value stands
    whenever refinement fails to improve it.  Returns (value, direction).
    """
    rho = np.asarray(rho, dtype=complex)
    s_a = von_neumann_entropy(reduced_state(rho, "A"))
    thetas = np.linspace(0.0, 0.5 * math.pi, _N_THETA)
    phis = np.linspace(0.0, 2.0 * math.pi, _N_PHI, endpoint=False)
    objective = s_a - _measured_entropy_grid(rho, thetas, phis)

    flat = objective.ravel()
    order = np.argsort(flat)[::-1]
    candidates = [order[0]]
    i0, j0 = np.unravel_index(order[0], objective.shape)
    for idx in order[1:]:
        i, j = np.unravel_index(idx, objective.shape)
        dphi = min(abs(j - j0), _N_PHI - abs(j - j0))
        if abs(i - i0) > 2 or dphi > 2:
            candidates.append(idx)
            break

    def neg_obj(ang):
        theta, phi = ang
        n = np.array(
            [
                math.sin(theta) * math.cos(phi),
                math.sin(theta) * math.sin(phi),
                math.cos(theta),
            ]
        )
        return conditional_entropy_measured(rho, n) - s_a

    best_val = float(flat[order[0]])
    i, j = np.unravel_index(order[0], objective.shape)
    best_ang = (float(thetas[i]), float(phis[j]))
    for idx in candidates:
        i, j = np.unravel_index(idx, objective.shape)
        res = minimize(
            neg_obj,
            x0=[thetas[i], phis[j]],
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-13, "maxiter": 500},
        )
        if -res.fun > best_val:
            best_val = float(-res.fun)
            best_ang = (float(res.x[0]), float(res.x[1]))
    theta, phi = best_ang
    direction = np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )
    return max(0.0, best_val), direction


def quantum_discord(rho: np.ndarray) -> DiscordBreakdown:
    """Total correlation minus the measurement-maximised classical part."""
    tc = mutual_information(rho)
    cc, direction = classical_correlation(rho)
    return DiscordBreakdown(
        total_correlation=tc,
        classical_correlation=cc,
        discord=tc - cc,
        argmax_measurement=MeasurementParams.from_direction(direction),
    )


# ---------------------------------------------------------------------------
# X-state fast path
# ---------------------------------------------------------------------------


def xstate_conditional_entropy(
    x: XState, mp: MeasurementParams, include_linear_term: bool = False
) -> float:
    """Closed-form conditional entropy of an X-state for one measurement.

    Uses the post-measurement spectrum (1 +- v_j)/2 with

        v_j = sqrt(((rho11 - rho33) xi_j + (rho22 - rho44) nu_j)^2 + e) / p_j,
        e   = 4 k l |rho_23|^2,

    where (xi_0, nu_0) = (k, l) and (xi_1, nu_1) = (l, k).  This matches the
    projective computation identically for rho_14 = 0.  With
    ``include_linear_term`` the spread gains an extra -16 m rho_23; that
    variant can push v_j outside [0, 1], in which case
    FormulaInconsistencyError is raised.
    """
    k, l, m = mp.k, mp.l, mp.m
    if include_linear_term:
        if abs(x.coh.imag) > 1e-12:
            raise ValueError("the linear-term variant is defined for real rho_23 only")
        eps_term = 4.0 * k * l * x.coh.real**2 - 16.0 * m * x.coh.real
    else:
        eps_term = 4.0 * k * l * abs(x.coh) ** 2
    d13 = x.p00 - x.p01
    d24 = x.p10 - x.p11
    s13 = x.p00 + x.p01
    s24 = x.p10 + x.p11
    total = 0.0
    for xi, nu in ((k, l), (l, k)):
        p = s13 * xi + s24 * nu
        if p < _PROB_FLOOR:
            continue
        spread_sq = (d13 * xi + d24 * nu) ** 2 + eps_term
        if spread_sq < 0.0:
            if spread_sq < -1e-9:
                raise FormulaInconsistencyError(
                    f"squared spread {spread_sq!r} is negative"
                )
            spread_sq = 0.0
        v = math.sqrt(spread_sq) / p
        if v > 1.0 + 1e-9:
            raise FormulaInconsistencyError(
                f"post-measurement spread {v!r} exceeds 1 for k={k!r}, m={m!r}"
            )
        v = min(v, 1.0)
        total += p * binary_entropy(0.5 * (1.0 + v))
    return total


def _xstate_objective(p00, p10, p01, p11, coh_sq, cos_t):
    """CC objective (S_cond only, negated later) batched over states.

    All arguments are broadcast arrays; ``cos_t`` is cos(theta) in [0, 1].
    phi drops out for X-states, so one angle suffices.
    """
    k = 0.5 * (1.0 + cos_t)
    l = 0.5 * (1.0 - cos_t)
    total = np.zeros(np.broadcast(p00, cos_t).shape)
    d13 = p00 - p01
    d24 = p10 - p11
    s13 = p00 + p01
    s24 = p10 + p11
    eps_term = 4.0 * k * l * coh_sq
    for xi, nu in ((k, l), (l, k)):
        p = s13 * xi + s24 * nu
        spread = np.sqrt(np.clip((d13 * xi + d24 * nu) ** 2 + eps_term, 0.0, None))
        ok = p > _PROB_FLOOR
        v = np.where(ok, np.minimum(spread / np.where(ok, p, 1.0), 1.0), 0.0)
        total += np.where(ok, p * binary_entropy(0.5 * (1.0 + v)), 0.0)
    return total


_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def _xstate_cc_batch(p00, p10, p01, p11, coh_sq):
    """Vectorised classical correlation for arrays of X-states.

    Scans theta on the same 65-point hemisphere grid as the brute-force
    route, then golden-section refines the two best separated basins.
    Returns (cc, cos_theta_star) arrays.
    """
    p00, p10, p01, p11, coh_sq = np.broadcast_arrays(
        np.atleast_1d(p00), p10, p01, p11, coh_sq
    )
    s_a = binary_entropy(p00 + p10)
    thetas = np.linspace(0.0, 0.5 * math.pi, _N_THETA)
    cond = _xstate_objective(
        p00[:, None], p10[:, None], p01[:, None], p11[:, None], coh_sq[:, None],
        np.cos(thetas)[None, :],
    )

    def refine(center_idx):
        step = thetas[1] - thetas[0]
        a = np.clip(thetas[center_idx] - step, 0.0, 0.5 * math.pi)
        b = np.clip(thetas[center_idx] + step, 0.0, 0.5 * math.pi)
        for _ in range(40):
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            fc = _xstate_objective(p00, p10, p01, p11, coh_sq, np.cos(c))
            fd = _xstate_objective(p00, p10, p01, p11, coh_sq, np.cos(d))
            take_c = fc <= fd  # minimising the conditional entropy
            b = np.where(take_c, d, b)
            a = np.where(take_c, a, c)
        mid = 0.5 * (a + b)
        return mid, _xstate_objective(p00, p10, p01, p11, coh_sq, np.cos(mid))

    best_idx = np.argmin(cond, axis=1)
    # second candidate: best grid point at least three cells away
    masked = cond.copy()
    cols = np.arange(_N_THETA)[None, :]
    masked[np.abs(cols - best_idx[:, None]) <= 2] = np.inf
    second_idx = np.argmin(masked, axis=1)

    t1, f1 = refine(best_idx)
    t2, f2 = refine(second_idx)
    grid_f = cond[np.arange(len(best_idx)), best_idx]
    grid_t = thetas[best_idx]
    # keep the smallest conditional entropy among grid and refined candidates
    best_f = np.minimum(grid_f, np.minimum(f1, f2))
    best_t = np.where(f1 <= np.minimum(grid_f, f2), t1, np.where(f2 <= grid_f, t2, grid_t))
    return np.maximum(s_a - best_f, 0.0), np.cos(best_t)


def classical_correlation_xstate(x: XState) -> tuple[float, MeasurementParams]:
    """Classical correlation of an X-state through the closed-form route."""
    cc, cos_t = _xstate_cc_batch(
        np.array([x.p00]), np.array([x.p10]), np.array([x.p01]), np.array([x.p11]),
        np.array([abs(x.coh) ** 2]),
    )
    theta = math.acos(min(1.0, max(-1.0, float(cos_t[0]))))
    return float(cc[0]), MeasurementParams.from_bloch_angles(theta, 0.0)


def xstate_total_correlation(x: XState) -> float:
    """Mutual information of an X-state from its closed-form spectra."""
    from .propagator import xstate_eigenvalues

    s_a = binary_entropy(x.p00 + x.p10)
    s_b = binary_entropy(x.p00 + x.p01)
    s_ab = _entropy_of_eigenvalues(xstate_eigenvalues(x))
    return s_a + s_b - s_ab


def discord_xstate(x: XState) -> DiscordBreakdown:
    """Quantum discord of an X-state through the closed-form fast path."""
    tc = xstate_total_correlation(x)
    cc, mp = classical_correlation_xstate(x)
    return DiscordBreakdown(
        total_correlation=tc,
        classical_correlation=cc,
        discord=tc - cc,
        argmax_measurement=mp,
    )


def discord_xstate_batch(p00, p10, p01, p11, coh_abs):
    """Vectorised (tc, cc, qd) for arrays of X-state entries (sweep engine)."""
    from .propagator import xstate_eigenvalues  # noqa: F401  (scalar twin)

    p00 = np.atleast_1d(np.asarray(p00, dtype=float))
    p10 = np.asarray(p10, dtype=float)
    p01 = np.asarray(p01, dtype=float)
    p11 = np.asarray(p11, dtype=float)
    coh_abs = np.asarray(coh_abs, dtype=float)
    s_a = binary_entropy(p00 + p10)
    s_b = binary_entropy(p00 + p01)
    s = p10 + p01
    r = np.hypot(p10 - p01, 2.0 * coh_abs)
    etas = np.stack([p00, p11, 0.5 * (s + r), 0.5 * (s - r)], axis=-1)
    etas = np.clip(etas, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        s_ab = -np.where(etas > 0.0, etas * np.log2(np.where(etas > 0, etas, 1.0)), 0.0).sum(axis=-1)
    tc = s_a + s_b - s_ab
    cc, _ = _xstate_cc_batch(p00, p10, p01, p11, coh_abs**2)
    return tc, cc, tc - cc
