"""Hirzebruch-Jung resolution of cyclic quotient singularities.

A singularity of type A_{n,q} (the quotient of C^2 by (x, y) -> (zx, z^q y)
for z a primitive n-th root of unity) resolves into a chain of rational
curves whose self-intersections -b_i come from the continued fraction

    n/q = b_1 - 1/(b_2 - 1/(...)),   all b_i >= 2.

The discrepancy coefficients a_i of the chain solve M a = (2 - b_i)_i against
the tridiagonal intersection matrix M, and the canonical self-intersection of
the resolution picks up the correction a^T M a <= 0 per singularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact_linalg import Rat


class NotIsolated(ValueError):
    """A tangent eigenvalue is trivial, so a fixed curve passes through the point."""


def hj_continued_fraction(n: int, q: int) -> tuple[int, ...]:
    """Expansion n/q = b_1 - 1/(b_2 - ...) with every b_i >= 2."""
    out = []
    while q > 0:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return tuple(out)


def evaluate_chain(selfints: tuple[int, ...]) -> Fraction:
    """Fold the continued fraction back to n/q (round-trip oracle)."""
    value = Fraction(selfints[-1])
    for b in reversed(selfints[:-1]):
        value = b - 1 / value
    return value


def _chain_is_negative_definite(selfints: tuple[int, ...]) -> bool:
    # leading principal minors of the tridiagonal matrix diag(-b_i) + offdiag 1
    d_prev2, d_prev1 = 1, 1
    for k, b in enumerate(selfints, start=1):
        d = -b * d_prev1 - d_prev2
        if (-1) ** k * d <= 0:
            return False
        d_prev2, d_prev1 = d_prev1, d
    return True


def chain_discrepancies(selfints: tuple[int, ...]) -> tuple[Rat, ...]:
    """Solve M a = (2 - b_i)_i exactly on the tridiagonal chain matrix.

    The constant vector 1 is a particular solution, so a_i = 1 + h_i with h
    solving the homogeneous three-term recurrence h_{i+1} = b_i h_i - h_{i-1}
    and virtual boundary values h_0 = h_{k+1} = -1.  Writing h against the two
    integer basis solutions keeps the whole computation in integers, with one
    division by n (the continued-fraction numerator) per component.
    """
    k = len(selfints)
    # basis solutions: U_0 = 1, U_1 = 0 and V_0 = 0, V_1 = 1
    u_prev, u = 1, 0
    v_prev, v = 0, 1
    us, vs = [0] * k, [0] * k
    for i, b in enumerate(selfints):
        us[i], vs[i] = u, v
        u_prev, u = u, b * u - u_prev
        v_prev, v = v, b * v - v_prev
    n = v  # V_{k+1} is the numerator of the continued fraction
    c_num = u - 1  # h = -U + c V with c = (U_{k+1} - 1) / n
    return tuple(Fraction(n * (1 - us[i]) + c_num * vs[i], n) for i in range(k))


@dataclass(frozen=True)
class ExceptionalChain:
    """A Hirzebruch-Jung chain with its discrepancy coefficients."""

    selfints: tuple[int, ...]
    discrepancies: tuple[Rat, ...]

    @classmethod
    def from_selfints(cls, selfints) -> "ExceptionalChain":
        b = tuple(int(x) for x in selfints)
        if not b or any(x < 2 for x in b):
            raise ValueError(f"chain self-intersections must all be >= 2, got {b}")
        if not _chain_is_negative_definite(b):
            raise ValueError(f"chain {b} is not negative definite")
        a = chain_discrepancies(b)
        if any(not (0 <= x < 1) for x in a):
            raise ValueError(f"discrepancies out of range for chain {b}: {a}")
        return cls(b, a)

    def __len__(self) -> int:
        return len(self.selfints)

    def pair(self, i: int, j: int) -> Fraction:
        """Entry (i, j) of the chain intersection matrix."""
        if i == j:
            return Fraction(-self.selfints[i])
        return Fraction(1) if abs(i - j) == 1 else Fraction(0)

    def bilinear(self, u, v) -> Fraction:
        """u^T M v for the tridiagonal chain matrix, in O(length)."""
        k = len(self.selfints)
        total = Fraction(0)
        for i in range(k):
            if u[i] == 0:
                continue
            s = -self.selfints[i] * v[i]
            if i > 0:
                s += v[i - 1]
            if i + 1 < k:
                s += v[i + 1]
            total += u[i] * s
        return total

    def k2_correction(self) -> Rat:
        """(sum a_i C_i)^2 = a^T M a; zero exactly on du Val chains."""
        # M a = (2 - b_i), so a^T M a collapses to sum a_i (2 - b_i)
        return sum((a * (2 - b) for a, b in zip(self.discrepancies, self.selfints)), Fraction(0))


@dataclass(frozen=True, order=True)
class CyclicSing:
    """The A_{n,q} singularity in canonical form (q replaced by min(q, q^-1 mod n))."""

    n: int
    q: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("cyclic singularity needs n >= 2")
        if not 1 <= self.q < self.n:
            raise ValueError(f"q must satisfy 1 <= q < n, got q={self.q}, n={self.n}")
        if math.gcd(self.n, self.q) != 1:
            raise ValueError(f"gcd(n, q) must be 1, got ({self.n}, {self.q})")
        q_inv = pow(self.q, -1, self.n)
        object.__setattr__(self, "q", min(self.q, q_inv))

    @property
    def is_du_val(self) -> bool:
        return all(b == 2 for b in self.chain().selfints)

    def display(self) -> str:
        """A_k for du Val A_{k+1,k}, otherwise A_{n,q}."""
        if self.q == self.n - 1 or (self.n, self.q) == (2, 1):
            return f"A{self.n - 1}"
        return f"A{self.n},{self.q}"

    def chain(self) -> ExceptionalChain:
        return _chain_for(self.n, self.q)


@lru_cache(maxsize=None)
def _chain_for(n: int, q: int) -> ExceptionalChain:
    return ExceptionalChain.from_selfints(hj_continued_fraction(n, q))


def hj_expand(s: CyclicSing) -> tuple[int, ...]:
    """Chain self-intersections [b_1..b_k] for the canonical-form singularity."""
    return s.chain().selfints


def discrepancies(s: CyclicSing) -> tuple[Rat, ...]:
    return s.chain().discrepancies


def k2_correction(s: CyclicSing) -> Rat:
    return s.chain().k2_correction()


def component_count(s: CyclicSing) -> int:
    return len(s.chain())


def sing_from_eigenvalues(order: int, exponents: tuple[int, int]) -> CyclicSing:
    """Singularity type from tangent-space eigenvalue exponents (p, q) mod n.

    The stabilizer acts on the tangent plane by (x, y) -> (z^p x, z^q y); the
    point is isolated only when no group element fixes a curve through it,
    which forces both exponents prime to n.  The type is normalised to
    1/n(1, q p^-1).
    """
    n = order
    p, q = exponents[0] % n, exponents[1] % n
    if p == 0 or q == 0:
        raise NotIsolated(f"tangent exponent 0 mod {n}: a fixed curve passes through the point")
    if math.gcd(math.gcd(p, q), n) != 1:
        raise ValueError(f"exponents ({p}, {q}) mod {n} do not act faithfully")
    if math.gcd(p, n) != 1 or math.gcd(q, n) != 1:
        # some power of the generator is a pseudo-reflection there
        raise NotIsolated(f"exponents ({p}, {q}) mod {n}: a subgroup element fixes a curve")
    return CyclicSing(n, (q * pow(p, -1, n)) % n)
