"""Transmission-coefficient polynomials and a complete real-root solver.

The solvability constraint for a two-weight ancilla at real
transmission T is a quartic whose integer coefficients depend only on
the two photon numbers (m, n).  Root isolation runs a Sturm chain in
exact rational arithmetic, so no sign change inside [-1, 1] can be
missed, followed by float bisection refinement.  Only physical roots
(|T| <= 1) are returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_TRIM_TOL = 1e-14
_REFINE_WIDTH = 1e-13
_DEDUP_TOL = 1e-9
_MULTIPLICITY_TOL = 1e-8


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial, coefficients ascending by degree, degree <= 4."""

    coefficients: tuple

    def __post_init__(self):
        c = [float(x) for x in self.coefficients]
        scale = max((abs(x) for x in c), default=0.0)
        while c and abs(c[-1]) <= _TRIM_TOL * max(scale, 1.0):
            c.pop()
        if not c:
            raise ValueError("zero polynomial")
        if len(c) > 5:
            raise ValueError("degree above 4 is not supported")
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RealPolynomial":
        if self.degree == 0:
            raise ValueError("constant polynomial has no useful derivative")
        return RealPolynomial(
            tuple(i * c for i, c in enumerate(self.coefficients) if i > 0)
        )


@dataclass(frozen=True)
class PhysicalRoots:
    """Real roots in [-1, 1] with multiplicities, ascending."""

    roots: tuple
    multiplicities: tuple

    def __iter__(self):
        return iter(self.roots)

    def closest_to(self, value: float) -> float:
        return min(self.roots, key=lambda r: abs(r - value))


def quartic_real(m: int, n: int) -> RealPolynomial:
    """Constraint quartic for the two-weight ancilla (m, n) at real T.

    T^4 (m+1)(n+1) - T^3 (m+n+3) - T^2 (m+n+2mn+1) + T (m+n-1) + mn,
    symmetric under m <-> n.
    """
    if m < 0 or n < 0:
        raise ValueError("photon numbers must be non-negative")
    return RealPolynomial(
        (
            m * n,
            m + n - 1,
            -(m + n + 2 * m * n + 1),
            -(m + n + 3),
            (m + 1) * (n + 1),
        )
    )


def cubic_m_zero(n: int) -> RealPolynomial:
    """Cubic factor left after removing the forced T = 0 root when m = 0.

    T^3 - ((n+3)/(n+1)) T^2 - T + (n-1)/(n+1).
    """
    if n < 1:
        raise ValueError("needs n >= 1")
    return RealPolynomial(((n - 1) / (n + 1), -1.0, -(n + 3) / (n + 1), 1.0))


def closed_form_adjacent(n: int) -> tuple:
    """Closed-form physical roots of the quartic for adjacent numbers m = n+1.

    Returns ((t1, t2), t3) with t1,2 = +-sqrt(n/(n+2)) and
    t3 = (1 - sqrt(n^2+2n+2)) / (n+1).  The remaining quartic root
    exceeds 1 for every n and is unphysical.
    """
    if n < 0:
        raise ValueError("needs n >= 0")
    s = math.sqrt(n / (n + 2))
    t3 = (1.0 - math.sqrt(n * n + 2 * n + 2)) / (n + 1)
    return (s, -s), t3


# ---------------------------------------------------------------------------
# exact Sturm machinery (degree <= 4, rational coefficients)


def _fpoly(p: RealPolynomial) -> list:
    return [Fraction(c) for c in p.coefficients]


def _feval(c: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _fderiv(c: list) -> list:
    return [i * coef for i, coef in enumerate(c) if i > 0]


def _ftrim(c: list) -> list:
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _fmod(a: list, b: list) -> list:
    a = _ftrim(a[:])
    b = _ftrim(b[:])
    db, lb = len(b) - 1, b[-1]
    while a and len(a) - 1 >= db:
        da = len(a) - 1
        q = a[-1] / lb
        for i in range(db + 1):
            a[da - db + i] -= q * b[i]
        a = _ftrim(a[:-1])
    return a


def _sturm_chain(c: list) -> list:
    chain = [_ftrim(c[:])]
    d = _ftrim(_fderiv(c))
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        rem = _fmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-x for x in rem])
    return chain


def _variations(chain: list, x: Fraction) -> int:
    signs = []
    for c in chain:
        v = _feval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _fgcd(a: list, b: list) -> list:
    a, b = _ftrim(a[:]), _ftrim(b[:])
    while b and len(b) > 1:
        a, b = b, _fmod(a, b)
    if b and len(b) == 1 and b[0] != 0:
        return [Fraction(1)]
    return [x / a[-1] for x in a]


def _fdiv_exact(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    a = a[:]
    db, lb = len(b) - 1, b[-1]
    for i in range(len(out) - 1, -1, -1):
        q = a[db + i] / lb
        out[i] = q
        for j in range(db + 1):
            a[i + j] -= q * b[j]
    return out


def solve_physical_roots(p: RealPolynomial) -> PhysicalRoots:
    """All real roots of `p` inside [-1, 1], with multiplicities.

    Isolation is exact (Sturm counts on rational arithmetic applied to
    the square-free part), refinement is float bisection to 1e-13,
    duplicates collapse at 1e-9, and multiplicity comes from derivative
    residuals.  Roots sitting exactly on |T| = 1 are kept.
    """
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    exact = _fpoly(p)
    gcd = _fgcd(exact, _fderiv(exact))
    sqfree = _fdiv_exact(exact, gcd) if len(gcd) > 1 else exact[:]

    roots = []
    one = Fraction(1)
    # endpoint roots first, then interior isolation on the open interval
    for endpoint in (-one, one):
        if _feval(sqfree, endpoint) == 0:
            roots.append(float(endpoint))
            sqfree = _fdiv_exact(sqfree, [-endpoint, one])

    # isolate; whenever a bisection midpoint is an exact rational root,
    # divide it out and restart so Sturm endpoints never sit on roots
    isolated = []
    while True:
        if len(sqfree) <= 1:
            isolated = []
            break
        chain = _sturm_chain(sqfree)
        work = [(-one, one)]
        isolated = []
        hit_exact = False
        while work:
            lo, hi = work.pop()
            count = _variations(chain, lo) - _variations(chain, hi)
            if count == 0:
                continue
            if count == 1:
                isolated.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            if _feval(sqfree, mid) == 0:
                roots.append(float(mid))
                sqfree = _fdiv_exact(sqfree, [-mid, one])
                hit_exact = True
                break
            work.append((lo, mid))
            work.append((mid, hi))
        if not hit_exact:
            break

    fsq = [float(c) for c in sqfree]

    def feval(x):
        acc = 0.0
        for c in reversed(fsq):
            acc = acc * x + c
        return acc

    for lo, hi in isolated:
        a, b = float(lo), float(hi)
        fa = feval(a)
        # exact interval guarantees one root; bisect on the sign change
        for _ in range(200):
            if b - a <= _REFINE_WIDTH:
                break
            mid = 0.5 * (a + b)
            fm = feval(mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fa < 0) != (fm < 0):
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))

    roots.sort()
    merged = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= _DEDUP_TOL:
            merged[-1] = min(merged[-1], r, key=lambda x: abs(p(x)))
        else:
            merged.append(r)

    scale = max(abs(c) for c in p.coefficients)
    mult = []
    for r in merged:
        m = 1
        deriv = p
        for _ in range(p.degree - 1):
            deriv = deriv.derivative()
            if abs(deriv(r)) <= _MULTIPLICITY_TOL * max(1.0, scale):
                m += 1
            else:
                break
        mult.append(m)
    return PhysicalRoots(tuple(merged), tuple(mult))
