"""Exact two-mode beamsplitter action on Fock states.

Two routes to the same physics: a brute-force operator-expansion oracle
(`apply_beamsplitter`) and closed-form photon-number-preserving matrix
elements via Jacobi polynomials (`diagonal_amplitude`).  The oracle is
the authority for off-diagonal elements; the closed form is the fast
path for the diagonal ones the conditional-gate analysis needs.

Conventions: the beamsplitter couples a signal mode and one ancilla
mode through the unitary

    ( T   R  )
    (-R*  T* )

acting on the mode operators, so the creation operators map as
a_sig+ -> T a_sig+ - R* a_anc+  and  a_anc+ -> R a_sig+ + T* a_anc+.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import PhotonCapExceeded

DEFAULT_PHOTON_CAP = 24
DEFAULT_ORDER_CAP = 64

_UNITARITY_TOL = 1e-12

# factorials up to the photon cap, exact integers
_FACT = [math.factorial(i) for i in range(2 * DEFAULT_PHOTON_CAP + 1)]


@dataclass(frozen=True)
class BeamSplitter:
    """Complex transmission/reflection pair (t, r) with |t|^2 + |r|^2 = 1."""

    t: complex
    r: complex

    def __post_init__(self):
        object.__setattr__(self, "t", complex(self.t))
        object.__setattr__(self, "r", complex(self.r))
        s = abs(self.t) ** 2 + abs(self.r) ** 2
        if abs(s - 1.0) > _UNITARITY_TOL:
            raise ValueError(f"|t|^2 + |r|^2 = {s}, not 1 within {_UNITARITY_TOL}")

    @classmethod
    def from_transmission(cls, t: complex) -> "BeamSplitter":
        """Build with real non-negative r fixed by the unitarity condition."""
        t = complex(t)
        r = math.sqrt(max(0.0, 1.0 - abs(t) ** 2))
        return cls(t, r)

    @property
    def matrix(self):
        import numpy as np

        return np.array(
            [[self.t, self.r], [-self.r.conjugate(), self.t.conjugate()]],
            dtype=complex,
        )

    def inverse(self) -> "BeamSplitter":
        """The beamsplitter undoing this one: (t, r) -> (t*, -r)."""
        return BeamSplitter(self.t.conjugate(), -self.r)


@dataclass(frozen=True)
class FockPair:
    """Photon counts (n, k) on the signal and ancilla mode."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.k < 0:
            raise ValueError("photon counts must be non-negative")


@dataclass
class TwoModeState:
    """Sparse two-mode Fock state, amplitudes keyed by (n, k).

    All support must sit in a single total-photon sector; the
    beamsplitter conserves photon number, so this never changes.
    """

    amplitudes: dict = field(default_factory=dict)
    total_photons: int = 0

    def __post_init__(self):
        for (n, k) in self.amplitudes:
            if n + k != self.total_photons:
                raise ValueError(
                    f"support ({n},{k}) outside the {self.total_photons}-photon sector"
                )

    @classmethod
    def fock(cls, n: int, k: int) -> "TwoModeState":
        return cls({(n, k): 1.0 + 0.0j}, n + k)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, n: int, k: int) -> complex:
        return self.amplitudes.get((n, k), 0.0 + 0.0j)

    def prune(self, tol: float = 0.0) -> "TwoModeState":
        keep = {p: a for p, a in self.amplitudes.items() if abs(a) > tol}
        return TwoModeState(keep, self.total_photons)


def apply_beamsplitter(
    bs: BeamSplitter, state: TwoModeState, cap: int = DEFAULT_PHOTON_CAP
) -> TwoModeState:
    """Exact beamsplitter image of `state` by binomial operator expansion.

    Photon number is conserved and the 2-norm is preserved (up to
    rounding).  Raises PhotonCapExceeded above `cap` total photons.
    """
    if state.total_photons > cap:
        raise PhotonCapExceeded(
            f"{state.total_photons} photons exceeds cap {cap}"
        )
    T, R = bs.t, bs.r
    Tc, Rc = T.conjugate(), R.conjugate()
    out: dict = {}
    for (n, k), amp in state.amplitudes.items():
        # (T a1+ - R* a2+)^n (R a1+ + T* a2+)^k, collected by output pair
        for i in range(n + 1):
            ci = math.comb(n, i) * T**i * (-Rc) ** (n - i)
            for j in range(k + 1):
                cj = math.comb(k, j) * R**j * Tc ** (k - j)
                p, q = i + j, (n - i) + (k - j)
                weight = math.sqrt(_FACT[p] * _FACT[q] / (_FACT[n] * _FACT[k]))
                key = (p, q)
                out[key] = out.get(key, 0.0 + 0.0j) + amp * ci * cj * weight
    return TwoModeState(out, state.total_photons)


def jacobi_poly(order: int, beta: int, x: float, cap: int = DEFAULT_ORDER_CAP) -> float:
    """Jacobi polynomial P_order^(0, beta)(x) by the three-term recurrence.

    Exact for orders 0 and 1.  Only beta >= 0 is supported; the
    photon-number matrix elements below arrange their arguments so that
    negative beta never occurs.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order > cap:
        raise ValueError(f"order {order} exceeds cap {cap}")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if order == 0:
        return 1.0
    pm2 = 1.0
    pm1 = 1.0 + (beta + 2) * (x - 1.0) / 2.0
    if order == 1:
        return pm1
    for m in range(2, order + 1):
        a = 2 * m * (m + beta) * (2 * m + beta - 2)
        b = (2 * m + beta - 1) * ((2 * m + beta) * (2 * m + beta - 2) * x - beta**2)
        c = 2 * (m - 1) * (m + beta - 1) * (2 * m + beta)
        pm2, pm1 = pm1, (b * pm1 - c * pm2) / a
    return pm1


def diagonal_amplitude(bs: BeamSplitter, pair: FockPair) -> complex:
    """Closed-form amplitude for |n,k> staying |n,k> under the beamsplitter.

    For k >= n this is (T*)^(k-n) P_n^(0, k-n)(2|T|^2 - 1).  The n > k
    case is the complex conjugate with the roles of the modes swapped,
    which keeps every power non-negative and makes T = 0 a regular
    point.
    """
    n, k = pair.n, pair.k
    x = 2.0 * abs(bs.t) ** 2 - 1.0
    if n <= k:
        return bs.t.conjugate() ** (k - n) * jacobi_poly(n, k - n, x)
    return bs.t ** (n - k) * jacobi_poly(k, n - k, x)
