"""Conditional states induced on the ancilla by each signal photon number.

An ancilla carrying exactly N photons, written as a weight vector over
the orthonormal labels |k>|A_(N-k)> (k photons on the active mode, the
rest in arbitrary spectator modes), turns into three conditional
states, one per signal Fock component 0/1/2, after the active
beamsplitter.  Everything downstream (projection conditions, success
probabilities) lives in this (N+1)-dimensional coefficient space; the
spectator tail is never represented explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSystemError
from .fock import BeamSplitter, FockPair, diagonal_amplitude

_NORM_TOL = 1e-12
_CROSSCHECK_TOL = 1e-10


@dataclass(frozen=True)
class AncillaSpec:
    """Total photon number N and real weights (gamma_0 ... gamma_N).

    Weights are real by convention (any phase can be absorbed into the
    spectator states) and must satisfy sum gamma_k^2 = 1.
    """

    total_photons: int
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if self.total_photons < 0:
            raise ValueError("total photon number must be non-negative")
        if len(w) != self.total_photons + 1:
            raise ValueError(
                f"need {self.total_photons + 1} weights, got {len(w)}"
            )
        s = sum(x * x for x in w)
        if abs(s - 1.0) > _NORM_TOL:
            raise ValueError(f"weights not normalised: sum of squares = {s}")

    @classmethod
    def two_weight(cls, m: int, n: int, gamma: float) -> "AncillaSpec":
        """gamma on |m> plus sqrt(1-gamma^2) on |n>, total photons m+n."""
        if m == n:
            raise ValueError("two-weight ancilla needs distinct photon numbers")
        N = m + n
        w = [0.0] * (N + 1)
        w[m] = gamma
        w[n] = math.sqrt(max(0.0, 1.0 - gamma * gamma))
        return cls(N, tuple(w))

    @classmethod
    def three_dim(cls, gamma1: float, gamma2: float) -> "AncillaSpec":
        """Weights (gamma1, gamma2, sqrt(1-gamma1^2-gamma2^2)) on k = 0,1,2."""
        rest = 1.0 - gamma1 * gamma1 - gamma2 * gamma2
        if rest < -_NORM_TOL:
            raise ValueError("gamma1^2 + gamma2^2 exceeds 1")
        return cls(2, (gamma1, gamma2, math.sqrt(max(0.0, rest))))


@dataclass(frozen=True)
class SignalState:
    """Signal superposition c0|0> + c1|1> + c2|2>, normalised."""

    c0: complex
    c1: complex
    c2: complex

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        s = abs(self.c0) ** 2 + abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(s - 1.0) > _NORM_TOL:
            raise ValueError(f"signal state not normalised: norm^2 = {s}")

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2], dtype=complex)

    def fidelity(self, other: "SignalState") -> float:
        return abs(np.vdot(self.as_array(), other.as_array())) ** 2


@dataclass(frozen=True)
class PsiSystem:
    """The three unnormalised conditional coefficient vectors and norms.

    Row l of `phi` holds the coefficients of sqrt(N_l)|psi_l> over
    k = 0..N; `norms` are (N_0, N_1, N_2).
    """

    phi: np.ndarray
    norms: tuple

    def psi(self, l: int) -> np.ndarray:
        """Normalised conditional state l; raises if its norm vanishes."""
        if self.norms[l] <= 0.0:
            raise DegenerateSystemError(f"conditional state {l} has zero norm")
        return self.phi[l] / math.sqrt(self.norms[l])

    def overlap(self, i: int, j: int) -> complex:
        """<psi_i|psi_j> between normalised conditional states."""
        return np.vdot(self.psi(i), self.psi(j))

    def raw_overlap(self, i: int, j: int) -> complex:
        """<phi_i|phi_j> between the unnormalised vectors."""
        return np.vdot(self.phi[i], self.phi[j])


def _closed_form_norms(weights, u: float) -> tuple:
    """Normalisation sums evaluated directly from |T|^2 = u.

    The textbook sums carry factors u^(k-l) that are formally singular
    for k < l; those few terms are expanded by hand so u = 0 stays
    regular.
    """
    n0 = n1 = n2 = 0.0
    for k, g in enumerate(weights):
        g2 = g * g
        n0 += g2 * u**k
        if k == 0:
            n1 += g2 * u
        else:
            n1 += g2 * u ** (k - 1) * ((k + 1) * u - k) ** 2
        if k == 0:
            n2 += g2 * u * u
        elif k == 1:
            n2 += g2 * u * (3.0 * u - 2.0) ** 2
        else:
            b = u * u - 2 * k * u * (1 - u) + 0.5 * k * (k - 1) * (1 - u) ** 2
            n2 += g2 * u ** (k - 2) * b * b
    return n0, n1, n2


def build_psi_system(anc: AncillaSpec, bs: BeamSplitter) -> PsiSystem:
    """Conditional coefficient vectors gamma_k <l,k|U|l,k> and their norms.

    The norms are cross-checked against the closed-form sums; a
    mismatch indicates a broken matrix element and raises.
    """
    N = anc.total_photons
    phi = np.empty((3, N + 1), dtype=complex)
    for l in range(3):
        for k in range(N + 1):
            phi[l, k] = anc.weights[k] * diagonal_amplitude(bs, FockPair(l, k))
    norms = tuple(float(np.vdot(phi[l], phi[l]).real) for l in range(3))
    reference = _closed_form_norms(anc.weights, abs(bs.t) ** 2)
    for got, want in zip(norms, reference):
        if abs(got - want) > _CROSSCHECK_TOL * max(1.0, want):
            raise ArithmeticError(
                f"norm cross-check failed: {got} vs closed form {want}"
            )
    return PsiSystem(phi, norms)


def apply_conditional_gate(
    sig: SignalState,
    anc: AncillaSpec,
    bs: BeamSplitter,
    detection: np.ndarray,
) -> tuple:
    """Post-selected signal map for a detection vector in k-space.

    `detection` is a normalised complex vector over the labels
    |k>|A_(N-k)>.  Returns (output SignalState, success probability).
    The component of the detection outside the span of the conditional
    states cannot contribute and only lowers the probability; it is
    allowed but flagged with a warning.
    """
    det = np.asarray(detection, dtype=complex)
    if det.shape != (anc.total_photons + 1,):
        raise ValueError("detection vector has the wrong length")
    nrm = np.linalg.norm(det)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("detection vector must be normalised")

    ps = build_psi_system(anc, bs)
    # weight outside span{psi_0, psi_1, psi_2}
    u_basis, svals, _ = np.linalg.svd(ps.phi.T, full_matrices=False)
    span = u_basis[:, svals > 1e-12 * max(svals[0], 1e-300)]
    inside = span @ (span.conj().T @ det)
    leak = np.linalg.norm(det - inside)
    if leak > 1e-10:
        warnings.warn(
            f"detection has weight {leak:.3g} outside the conditional span",
            stacklevel=2,
        )

    overlaps = np.array([np.vdot(det, ps.phi[l]) for l in range(3)])
    out = sig.as_array() * overlaps
    prob = float(np.vdot(out, out).real)
    if prob <= 1e-300:
        raise DegenerateSystemError("detection is orthogonal to every outcome")
    out = out / math.sqrt(prob)
    return SignalState(out[0], out[1], out[2]), prob
