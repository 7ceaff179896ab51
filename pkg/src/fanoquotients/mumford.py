"""Q-valued intersection theory on a normal surface via its resolution.

A normal surface Y with cyclic quotient singularities is presented by the
chains of its minimal resolution g: Z -> Y plus, for each named curve C on Y,
the pairing values C.C' downstairs, the degree K_Y.C, and the multiplicities
with which the strict transform meets each exceptional component.  Writing
Cbar = g*C - sum a_i C_i with the defining relations g*C . C_i = 0, the
coefficients a_i solve M a = -m against the chain intersection matrix, and
everything else (strict-transform pairings, canonical degrees on Z, the K^2
correction) expands bilinearly from there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exact_linalg import Rat
from .hj_resolution import CyclicSing, ExceptionalChain, k2_correction


class NonIntegralGenus(ArithmeticError):
    """Adjunction produced a non-integer genus for a curve asserted smooth."""


class UnknownCurve(KeyError):
    pass


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class ResolutionModel:
    """Named curves on a normal surface together with its resolution data.

    chains: singular point name -> exceptional chain of its resolution
    pairing: downstairs values C.C' (symmetric; key order-insensitive)
    k_degree: K_Y.C per named curve
    incidence: curve -> point -> per-component multiplicities of Cbar.C_i
    """

    chains: dict[str, ExceptionalChain]
    curves: tuple[str, ...]
    pairing: dict[tuple[str, str], Rat]
    k_degree: dict[str, Rat]
    incidence: dict[str, dict[str, tuple[int, ...]]]
    k2_downstairs: Rat = Fraction(0)

    @classmethod
    def build(cls, chains: Mapping[str, ExceptionalChain], curves: Iterable[str],
              pairing: Mapping[tuple[str, str], Rat], k_degree: Mapping[str, Rat],
              incidence: Mapping[str, Mapping[str, Iterable[int]]],
              k2_downstairs: Rat = Fraction(0)) -> "ResolutionModel":
        curve_list = tuple(curves)
        pairs = {}
        for (a, b), v in pairing.items():
            key = _pair_key(a, b)
            value = Fraction(v)
            if pairs.get(key, value) != value:
                raise ValueError(f"conflicting pairing values for {key}")
            pairs[key] = value
        inc = {}
        for name in curve_list:
            per_point = {}
            for point, mults in incidence.get(name, {}).items():
                if point not in chains:
                    raise UnknownCurve(f"incidence references unknown singular point {point!r}")
                vec = tuple(int(m) for m in mults)
                if len(vec) != len(chains[point]):
                    raise ValueError(f"incidence for {name} at {point} has wrong length")
                if any(m < 0 for m in vec):
                    raise ValueError(f"negative incidence multiplicity for {name} at {point}")
                per_point[point] = vec
            inc[name] = per_point
        return cls(dict(chains), curve_list, pairs, {c: Fraction(k_degree[c]) for c in curve_list},
                   inc, Fraction(k2_downstairs))

    # -- strict transforms ---------------------------------------------------

    def strict_transform_coeffs(self, curve: str) -> dict[str, tuple[Rat, ...]]:
        """Per singular point, the coefficients a with M a = -m (all >= 0)."""
        if curve not in self.incidence:
            raise UnknownCurve(curve)
        out = {}
        for point, mults in self.incidence[curve].items():
            chain = self.chains[point]
            if all(m == 0 for m in mults):
                out[point] = tuple(Fraction(0) for _ in mults)
                continue
            coeffs = _solve_chain_neg(chain, mults)
            # definitional check g*C . C_i = (Cbar + sum a C) . C_i = m + M a = 0
            residual = [chain.bilinear(_unit(len(mults), i), coeffs) + mults[i] for i in range(len(mults))]
            assert all(r == 0 for r in residual), f"pullback relation violated at {point}"
            if any(c < 0 for c in coeffs):
                raise ValueError(f"negative strict-transform coefficient for {curve} at {point}")
            out[point] = coeffs
        return out

    def pair_on_resolution(self, c1: str, c2: str) -> Rat:
        """Strict-transform intersection Cbar1 . Cbar2 on the resolution."""
        base = self.downstairs(c1, c2)
        a1 = self.strict_transform_coeffs(c1)
        a2 = self.strict_transform_coeffs(c2)
        for point in set(a1) & set(a2):
            base += self.chains[point].bilinear(a1[point], a2[point])
        return base

    def pair_with_component(self, curve: str, point: str, index: int) -> Rat:
        """Cbar . C_i for an exceptional component (the incidence multiplicity)."""
        mults = self.incidence[curve].get(point)
        if mults is None:
            return Fraction(0)
        return Fraction(mults[index])

    def kz_degree(self, curve: str) -> Rat:
        """K_Z . Cbar from K_Z = g*K_Y - sum (discrepancies) and the relations."""
        total = self.k_degree[curve]
        for point, coeffs in self.strict_transform_coeffs(curve).items():
            chain = self.chains[point]
            # (sum d_i C_i).(sum a_j C_j) with M d = (2 - b): collapses to sum (2-b_i) a_i
            total += sum((2 - b) * a for b, a in zip(chain.selfints, coeffs))
        return total

    def downstairs(self, c1: str, c2: str) -> Rat:
        key = _pair_key(c1, c2)
        if key not in self.pairing:
            raise UnknownCurve(f"no downstairs pairing recorded for {key}")
        return self.pairing[key]


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(j == i)) for j in range(n))


def _solve_chain_neg(chain: ExceptionalChain, mults: Iterable[int]) -> tuple[Rat, ...]:
    """Solve M a = -m on the chain (tridiagonal, exact)."""
    m = [Fraction(-x) for x in mults]
    k = len(chain)
    diag = [Fraction(-b) for b in chain.selfints]
    rhs = m
    for i in range(1, k):
        factor = Fraction(1) / diag[i - 1]
        diag[i] -= factor
        rhs[i] -= factor * rhs[i - 1]
    a = [Fraction(0)] * k
    a[k - 1] = rhs[k - 1] / diag[k - 1]
    for i in range(k - 2, -1, -1):
        a[i] = (rhs[i] - a[i + 1]) / diag[i]
    return tuple(a)


def kz_squared(k2_downstairs: Rat, sings: Iterable[CyclicSing]) -> Rat:
    """K_Z^2 = K_Y^2 + sum of per-singularity corrections (sum a_i C_i)^2."""
    return Fraction(k2_downstairs) + sum((k2_correction(s) for s in sings), Fraction(0))


def adjunction_genus(self_int: Rat, k_degree: Rat, *, assert_smooth: bool = True) -> Rat:
    """Arithmetic genus 1 + (C^2 + K.C)/2 of a curve on a smooth surface."""
    g = 1 + (Fraction(self_int) + Fraction(k_degree)) / 2
    if assert_smooth and (g.denominator != 1 or g < 0):
        raise NonIntegralGenus(f"genus {g} is not a nonnegative integer")
    return g
