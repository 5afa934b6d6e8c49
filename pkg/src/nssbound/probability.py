"""Success-probability formulas for the post-selected sign-shift gate.

The projection conditions demand a detection state whose overlaps with
the three conditional states are equal up to a sign flip on the third:

    sqrt(N0)<d|psi_0> = sqrt(N1)<d|psi_1> = -sqrt(N2)<d|psi_2>

Anchoring a Gram-Schmidt basis at psi_0 turns these into two linear
relations among the detection coordinates (alpha, beta, gamma) and the
probability |alpha|^2 N0 into a closed rational expression.  This
module carries that expression for full-rank (3d) and collapsed (2d)
conditional spaces, the SU(3) network formula with its unitarity
bound, and the equivalent overlap / cross-product / dual-vector
reformulations available for real transmission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ancilla import PsiSystem
from .errors import (
    ConditionsUnsatisfiableError,
    DegenerateSystemError,
    SingularNetworkError,
)

RANK_TOL = 1e-10
_DEGENERATE_DEN_TOL = 1e-12


@dataclass(frozen=True)
class GramRep:
    """Gram-Schmidt coordinates of psi_1, psi_2 in a basis anchored at psi_0.

    psi_1 -> (y1, y2, 0), psi_2 -> (z1, z2, z3) with y2, z3 real
    non-negative.  `basis` holds the orthonormal basis vectors e0, e1,
    e2 as rows in the original k-space (zero rows where the rank
    collapses), so detection states can be mapped back.
    """

    y1: complex
    y2: float
    z1: complex
    z2: complex
    z3: float
    rank: int
    basis: np.ndarray

    def reconstructed_overlap(self, i: int, j: int) -> complex:
        """<psi_i|psi_j> rebuilt from the representation scalars."""
        vecs = [
            np.array([1.0, 0.0, 0.0], dtype=complex),
            np.array([self.y1, self.y2, 0.0], dtype=complex),
            np.array([self.z1, self.z2, self.z3], dtype=complex),
        ]
        return complex(np.vdot(vecs[i], vecs[j]))


@dataclass(frozen=True)
class DetectionState:
    """Detection coordinates (alpha, beta, gamma) in the Gram basis."""

    alpha: complex
    beta: complex
    gamma_det: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma_det], dtype=complex)

    def norm_sq(self) -> float:
        return float(np.vdot(self.as_array(), self.as_array()).real)

    def to_kspace(self, g: GramRep) -> np.ndarray:
        """The detection vector over the ancilla labels |k>|A_(N-k)>."""
        return (
            self.alpha * g.basis[0]
            + self.beta * g.basis[1]
            + self.gamma_det * g.basis[2]
        )


@dataclass(frozen=True)
class OverlapSet:
    """Pairwise overlaps and norms of the unnormalised conditional states."""

    v01: complex
    v02: complex
    v12: complex
    n0: float
    n1: float
    n2: float

    @classmethod
    def from_psi_system(cls, ps: PsiSystem) -> "OverlapSet":
        return cls(
            complex(ps.raw_overlap(0, 1)),
            complex(ps.raw_overlap(0, 2)),
            complex(ps.raw_overlap(1, 2)),
            *ps.norms,
        )

    def gram_matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.n0, self.v01, self.v02],
                [np.conj(self.v01), self.n1, self.v12],
                [np.conj(self.v02), np.conj(self.v12), self.n2],
            ],
            dtype=complex,
        )

    def validate(self, tol: float = 1e-10):
        eig = np.linalg.eigvalsh(self.gram_matrix())
        if eig.min() < -tol:
            raise ValueError(f"overlap set is not positive semidefinite: {eig}")


@dataclass(frozen=True)
class UnitaryThree:
    """3x3 complex unitary describing a three-mode network."""

    lam: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.lam, dtype=complex)
        object.__setattr__(self, "lam", m)
        if m.shape != (3, 3):
            raise ValueError("expected a 3x3 matrix")
        dev = np.abs(m.conj().T @ m - np.eye(3)).max()
        if dev > 1e-10:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3g})")


def gram_schmidt(ps: PsiSystem, rank_tol: float = RANK_TOL) -> GramRep:
    """Orthogonalise the conditional states with psi_0 as the anchor.

    Raises DegenerateSystemError when any conditional norm vanishes;
    with N1 or N2 = 0 the projection conditions already force zero
    probability, so callers treat that case before orthogonalising.
    """
    n0, n1, n2 = ps.norms
    scale = max(ps.norms)
    if n0 <= rank_tol * max(scale, 1e-300):
        raise DegenerateSystemError("psi_0 vanishes; nothing to anchor the basis")
    if n1 <= rank_tol * scale or n2 <= rank_tol * scale:
        raise DegenerateSystemError("a conditional state has zero norm")

    dim = ps.phi.shape[1]
    e0 = ps.psi(0)
    psi1 = ps.psi(1)
    psi2 = ps.psi(2)

    y1 = complex(np.vdot(e0, psi1))
    u1 = psi1 - y1 * e0
    y2 = float(np.linalg.norm(u1))
    rank = 1
    if y2 > rank_tol:
        e1 = u1 / y2
        rank = 2
    else:
        y2 = 0.0
        e1 = np.zeros(dim, dtype=complex)

    z1 = complex(np.vdot(e0, psi2))
    z2 = complex(np.vdot(e1, psi2)) if rank >= 2 else 0.0
    u2 = psi2 - z1 * e0 - z2 * e1
    z3 = float(np.linalg.norm(u2))
    if rank >= 2 and z3 > rank_tol:
        e2 = u2 / z3
        rank = 3
    else:
        z3 = 0.0
        e2 = np.zeros(dim, dtype=complex)

    basis = np.vstack([e0, e1, e2])
    return GramRep(y1, y2, z1, z2, z3, rank, basis)


def _detection_from_alpha(alpha, beta_over_alpha, gamma_over_alpha) -> DetectionState:
    # fix the arbitrary global phase: alpha real and non-negative
    b = alpha * beta_over_alpha
    c = alpha * gamma_over_alpha
    return DetectionState(complex(alpha), complex(b), complex(c))


def success_probability_3d(ps: PsiSystem, g: GramRep | None = None) -> tuple:
    """Probability and detection state for a full-rank conditional space.

    p = N0 [ 1 + |sqrt(N0/N1) - y1|^2 / y2^2
               + |sqrt(N0/N2) + z1 + (z2/y2)(sqrt(N0/N1) - y1)|^2 / z3^2 ]^-1
    """
    if g is None:
        g = gram_schmidt(ps)
    n0, n1, n2 = ps.norms
    if n1 <= 0.0 or n2 <= 0.0:
        raise ConditionsUnsatisfiableError(
            "a conditional state vanishes; the sign conditions force p = 0"
        )
    if g.rank < 3:
        raise DegenerateSystemError(
            "conditional space is not three-dimensional; use the 2d expression"
        )
    r1 = math.sqrt(n0 / n1)
    r2 = math.sqrt(n0 / n2)
    e1 = r1 - g.y1
    third = r2 + g.z1 + (g.z2 / g.y2) * e1
    p = n0 / (1.0 + abs(e1) ** 2 / g.y2**2 + abs(third) ** 2 / g.z3**2)

    alpha = math.sqrt(p / n0)
    beta_ratio = (r1 - np.conj(g.y1)) / g.y2
    gamma_ratio = -(r2 + np.conj(g.z1) + (np.conj(g.z2) / g.y2) * (r1 - np.conj(g.y1))) / g.z3
    det = _detection_from_alpha(alpha, beta_ratio, gamma_ratio)
    return p, det


def success_probability_2d(ps: PsiSystem, g: GramRep | None = None) -> tuple:
    """Probability, solvability residual and detection for a rank-2 space.

    Only one condition can be absorbed into the detection state; the
    other becomes a constraint on the beamsplitter.  The returned
    probability is meaningful only when the residual is (numerically)
    zero, and callers must check it.  A rank-1 space leaves no freedom
    at all: zero probability, infinite residual.
    """
    if g is None:
        g = gram_schmidt(ps)
    n0, n1, n2 = ps.norms
    if g.rank >= 3:
        raise DegenerateSystemError(
            "conditional space is three-dimensional; use the 3d expression"
        )
    if g.rank < 2:
        return 0.0, math.inf, None
    r1 = math.sqrt(n0 / n1)
    r2 = math.sqrt(n0 / n2)
    e1 = r1 - g.y1
    residual = float(abs(-r2 - g.z1 - (g.z2 / g.y2) * e1))
    p = n0 / (1.0 + abs(e1) ** 2 / g.y2**2)
    alpha = math.sqrt(p / n0)
    beta_ratio = (r1 - np.conj(g.y1)) / g.y2
    det = _detection_from_alpha(alpha, beta_ratio, 0.0)
    return p, residual, det


def success_probability(
    ps: PsiSystem,
    g: GramRep | None = None,
    residual_tol: float = 1e-9,
) -> float:
    """Rank-adaptive probability: 3d formula, else 2d gated on its residual.

    Degenerate systems (a vanishing conditional norm, rank 1, or an
    unsatisfied 2d constraint) give zero, which is the physically
    correct limit in every such case.
    """
    scale = max(ps.norms)
    if scale <= 0.0 or min(ps.norms) <= RANK_TOL * scale:
        return 0.0
    if g is None:
        g = gram_schmidt(ps)
    if g.rank == 3:
        return success_probability_3d(ps, g)[0]
    if g.rank == 2:
        p, residual, _ = success_probability_2d(ps, g)
        return p if residual <= residual_tol else 0.0
    return 0.0


def network_probability(u: UnitaryThree) -> float:
    """Sign-shift success probability of a three-mode network unitary.

    p = 4 |L12 L13 L21 L31|^2 / |1 + 2 L11 - L11^2|^2, valid for
    networks satisfying the gate conditions.
    """
    lam = u.lam
    den = abs(1.0 + 2.0 * lam[0, 0] - lam[0, 0] ** 2) ** 2
    if den <= _DEGENERATE_DEN_TOL:
        raise SingularNetworkError("network denominator vanishes")
    num = 4.0 * abs(lam[0, 1] * lam[0, 2] * lam[1, 0] * lam[2, 0]) ** 2
    return num / den


def unitarity_bound(lambda11: complex) -> float:
    """Upper bound (1-|L11|^2)^4 / (4 |1+2 L11 - L11^2|^2) from unitarity."""
    lam = complex(lambda11)
    if abs(lam) > 1.0 + 1e-12:
        raise ValueError("|Lambda_11| must not exceed 1")
    den = 4.0 * abs(1.0 + 2.0 * lam - lam * lam) ** 2
    if den <= _DEGENERATE_DEN_TOL:
        raise SingularNetworkError("bound denominator vanishes")
    return (1.0 - abs(lam) ** 2) ** 4 / den


def probability_from_overlaps(o: OverlapSet, identity_gate: bool = False) -> float:
    """Rational overlap form of the success probability (real overlaps).

    With `identity_gate` the two overlaps involving the third state flip
    sign, which turns the expression into the success probability of
    doing nothing to the signal; at a fully collinear system with equal
    norms (a transparent beamsplitter) that variant attains its limit
    N0 and is returned exactly.
    """
    for v in (o.v01, o.v02, o.v12):
        if abs(complex(v).imag) > 1e-12:
            raise ValueError("overlap form requires real overlaps (real T)")
    v01, v02, v12 = float(np.real(o.v01)), float(np.real(o.v02)), float(np.real(o.v12))
    n0, n1, n2 = o.n0, o.n1, o.n2
    if identity_gate:
        v02, v12 = -v02, -v12
    num = (n0 * v12**2 + n1 * v02**2 + n2 * v01**2) - n0 * n1 * n2 - 2 * v01 * v02 * v12
    den = (
        2 * (v01 * v02 + v01 * v12 - v02 * v12)
        - 2 * (n0 * v12 + n1 * v02 - n2 * v01)
        + (v01**2 + v02**2 + v12**2)
        - (n0 * n1 + n0 * n2 + n1 * n2)
    )
    scale = max(1.0, n0, n1, n2) ** 3
    if abs(den) <= _DEGENERATE_DEN_TOL * scale:
        if identity_gate and _is_collinear_equal_norms(o):
            return n0
        raise DegenerateSystemError("overlap form denominator vanishes")
    return num / den


def _is_collinear_equal_norms(o: OverlapSet, tol: float = 1e-10) -> bool:
    # rank-1 Gram with equal norms and fully aligned states
    if abs(o.n0 - o.n1) > tol or abs(o.n0 - o.n2) > tol:
        return False
    eig = np.linalg.eigvalsh(o.gram_matrix())
    if abs(eig[0]) > tol or abs(eig[1]) > tol:
        return False
    return (
        abs(o.v01 - o.n0) <= tol and abs(o.v02 - o.n0) <= tol and abs(o.v12 - o.n0) <= tol
    )


def probability_from_vectors(phi0, phi1, phi2) -> float:
    """Cross-product form on real 3-vector representations.

    p = [(phi0 x phi1) . phi2]^2 / [(phi0 x phi1) - phi2 x (phi0 - phi1)]^2

    The dual-vector rewrite (volume of the parallelepiped spanned by
    the pairwise cross products over its squared diagonal) is computed
    alongside and must agree; a disagreement beyond rounding raises.
    """
    f0 = np.asarray(phi0, dtype=float)
    f1 = np.asarray(phi1, dtype=float)
    f2 = np.asarray(phi2, dtype=float)
    if f0.shape != (3,) or f1.shape != (3,) or f2.shape != (3,):
        raise ValueError("expected three real 3-vectors")

    c01 = np.cross(f0, f1)
    num = float(np.dot(c01, f2)) ** 2
    dvec = c01 - np.cross(f2, f0 - f1)
    den = float(np.dot(dvec, dvec))

    d0 = np.cross(f1, f2)
    d1 = np.cross(f2, f0)
    d2 = c01
    dual_num = float(np.dot(np.cross(d0, d1), d2))
    dual_vec = d0 + d1 - d2
    dual_den = float(np.dot(dual_vec, dual_vec))

    scale = max(1.0, np.linalg.norm(f0) * np.linalg.norm(f1) * np.linalg.norm(f2)) ** 2
    if abs(num - dual_num) > 1e-10 * scale or abs(den - dual_den) > 1e-10 * scale:
        raise AssertionError("dual-vector form disagrees with the cross form")
    if den <= _DEGENERATE_DEN_TOL * max(1.0, scale):
        raise DegenerateSystemError("cross form denominator vanishes")
    return num / den


def representation_vectors(ps: PsiSystem, g: GramRep | None = None) -> tuple:
    """Real 3-vector representations of the unnormalised states (real T)."""
    if g is None:
        g = gram_schmidt(ps)
    for val in (g.y1, g.z1, g.z2):
        if abs(complex(val).imag) > 1e-12:
            raise ValueError("representation vectors require real overlaps")
    n0, n1, n2 = ps.norms
    f0 = math.sqrt(n0) * np.array([1.0, 0.0, 0.0])
    f1 = math.sqrt(n1) * np.array([g.y1.real, g.y2, 0.0])
    f2 = math.sqrt(n2) * np.array([g.z1.real, g.z2.real, g.z3])
    return f0, f1, f2


def random_unitary(rng: np.random.Generator, dim: int = 3) -> UnitaryThree:
    """Haar-ish random unitary from a QR decomposition of a Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return UnitaryThree(q)
