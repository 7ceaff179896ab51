"""Invariants of the minimal resolution of a quotient of the Fano surface.

The base surface S is fixed: K_S^2 = 45, e(S) = 27, and H^0(Omega_S) is
5-dimensional (q = 5, p_g = 10).  A scenario bundles a finite automorphism
group (5x5 cyclotomic generators), the fixed-point strata with their Euler
numbers, the ramification curves with their intersection data on S, the list
of cyclic quotient singularities, and optional fibration data.  From that the
engine computes

    c1^2   by the ramification formula plus per-singularity corrections,
    c2     by the stratified Euler number plus exceptional components,
    q, p_g by averaging characters over the group (forms and 2-forms),
    chi    = 1 - q + p_g,  h^{1,1} = c2 - 2 + 4q - 2p_g,

and cross-checks Noether's relation 12 chi = c1^2 + c2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cyclotomic_rep import (
    CycMatrix,
    FiniteMatrixGroup,
    exterior_square_trace,
    group_closure,
    invariant_dimension,
)
from .exact_linalg import Rat
from .hj_resolution import CyclicSing, component_count, k2_correction

BASE_K2 = Fraction(45)
BASE_EULER = 27


class NonIntegralEuler(ArithmeticError):
    """The stratified Euler number of the quotient failed to be an integer."""


class NonIntegralGenus(ArithmeticError):
    pass


class MissingIntersection(KeyError):
    """A needed R.R' value is absent from the ramification data."""


@dataclass(frozen=True)
class Stratum:
    """Points whose stabilizer has the given order, with their Euler number."""

    order: int
    euler: int
    note: str = ""


@dataclass(frozen=True)
class RamificationCurve:
    """A curve on S fixed pointwise by a subgroup of the given order."""

    name: str
    index: int
    self_int: Rat
    k_degree: Rat
    meets: dict[str, Rat] = field(default_factory=dict)


@dataclass(frozen=True)
class Fibration:
    """Genus data for the induced fibration over an elliptic Albanese image."""

    fiber_genus: int
    deck_order: int
    ramification: int


@dataclass(frozen=True)
class QuotientScenario:
    label: str
    generators: tuple[CycMatrix, ...]
    strata: tuple[Stratum, ...]
    ramification: tuple[RamificationCurve, ...]
    singularities: tuple[tuple[CyclicSing, int], ...]
    fibration: Optional[Fibration] = None
    annotations: dict = field(default_factory=dict)
    display: dict = field(default_factory=dict)
    table: Optional[int] = None
    source: str = ""

    def group(self) -> FiniteMatrixGroup:
        return _group_for(self)

    def singularity_list(self) -> list[CyclicSing]:
        return [s for s, count in self.singularities for _ in range(count)]

    def singularity_text(self) -> str:
        parts = []
        for sing, count in self.singularities:
            prefix = "" if count == 1 else str(count)
            parts.append(f"{prefix}{sing.display()}")
        return "+".join(parts)


_GROUP_CACHE: dict[tuple, FiniteMatrixGroup] = {}


def _group_for(scenario: QuotientScenario) -> FiniteMatrixGroup:
    key = tuple(g.key() for g in scenario.generators)
    if key not in _GROUP_CACHE:
        if scenario.generators:
            _GROUP_CACHE[key] = group_closure(list(scenario.generators))
        else:
            _GROUP_CACHE[key] = group_closure([CycMatrix.identity(5)])
    return _GROUP_CACHE[key]


# ---------------------------------------------------------------------------
# the individual invariants


def euler_quotient(scenario: QuotientScenario) -> int:
    """e(S/G) = (1/|G|) (e(S) + sum_{n>=2} (n-1) e(S_n)), asserted integral."""
    order = scenario.group().order
    total = Fraction(BASE_EULER)
    for stratum in scenario.strata:
        if stratum.order < 2 or order % stratum.order != 0:
            raise NonIntegralEuler(
                f"{scenario.label}: stratum order {stratum.order} does not divide |G| = {order}")
        total += (stratum.order - 1) * stratum.euler
    value = total / order
    if value.denominator != 1:
        raise NonIntegralEuler(f"{scenario.label}: e(S/G) = {value} is not an integer")
    return int(value)


def exceptional_component_count(singularities: Sequence[tuple[CyclicSing, int]]) -> int:
    return sum(count * component_count(sing) for sing, count in singularities)


def k2_quotient(scenario: QuotientScenario) -> Rat:
    """K_{S/G}^2 = (1/|G|) (K_S - sum_R (|H_R| - 1) R)^2, expanded exactly."""
    order = scenario.group().order
    curves = scenario.ramification
    total = BASE_K2
    for r in curves:
        weight = r.index - 1
        total -= 2 * weight * Fraction(r.k_degree)
        total += weight * weight * Fraction(r.self_int)
    for i, r in enumerate(curves):
        for s in curves[i + 1:]:
            if s.name in r.meets:
                cross = Fraction(r.meets[s.name])
            elif r.name in s.meets:
                cross = Fraction(s.meets[r.name])
            else:
                raise MissingIntersection(
                    f"{scenario.label}: no intersection value for {r.name}.{s.name}")
            if r.name in s.meets and s.name in r.meets and Fraction(s.meets[r.name]) != Fraction(r.meets[s.name]):
                raise ValueError(f"{scenario.label}: asymmetric intersection {r.name}.{s.name}")
            total += 2 * (r.index - 1) * (s.index - 1) * cross
    return total / order


def irregularity(scenario: QuotientScenario) -> int:
    """q of the resolution: dimension of the group-invariant 1-forms."""
    return invariant_dimension(scenario.group(), lambda g: g.trace())


def geometric_genus(scenario: QuotientScenario) -> int:
    """p_g of the resolution: invariant 2-forms, via the exterior-square character."""
    return invariant_dimension(scenario.group(), exterior_square_trace)


def albanese_fiber_genus(fiber_genus: int, deck_order: int, ramification: int) -> int:
    """Genus g' of the quotient fiber: 2g - 2 = d (2g' - 2) + r (Riemann-Hurwitz)."""
    value = Fraction(2 * fiber_genus - 2 - ramification, 2 * deck_order) + 1
    if value.denominator != 1 or value < 0:
        raise NonIntegralGenus(
            f"Riemann-Hurwitz gives a bad quotient-fiber genus {value} "
            f"for (g={fiber_genus}, d={deck_order}, r={ramification})")
    return int(value)


@dataclass(frozen=True)
class InvariantReport:
    label: str
    c1_sq: int | Rat  # stays a Fraction only for flagged, inconsistent input
    c2: int
    q: int
    p_g: int
    chi: int
    h11: int
    fiber_genus: Optional[int]
    singularities: str
    noether_ok: bool
    k2_quotient: Rat
    k2_correction: Rat
    euler_quotient: int
    exceptional_components: int
    flags: tuple[str, ...]
    annotations: dict
    display: dict
    table: Optional[int]
    source: str


def full_report(scenario: QuotientScenario) -> InvariantReport:
    """Assemble every invariant and run the Noether cross-check.

    A failed Noether identity or a fractional c1^2 is reported as a flag so
    that inconsistent user scenarios still produce diagnostics; hard data
    errors (missing intersections, bad strata) raise instead.
    """
    flags: list[str] = []
    k2q = k2_quotient(scenario)
    correction = sum((count * k2_correction(s) for s, count in scenario.singularities), Fraction(0))
    c1_sq = k2q + correction
    if c1_sq.denominator != 1:
        flags.append(f"c1^2 = {c1_sq} is not an integer")
    e_quot = euler_quotient(scenario)
    components = exceptional_component_count(scenario.singularities)
    c2 = e_quot + components
    q = irregularity(scenario)
    p_g = geometric_genus(scenario)
    chi = 1 - q + p_g
    h11 = c2 - 2 + 4 * q - 2 * p_g
    noether_ok = 12 * chi == c1_sq + c2
    if not noether_ok:
        flags.append(f"Noether violated: 12*{chi} != {c1_sq} + {c2}")
    fiber = None
    if scenario.fibration is not None:
        fib = scenario.fibration
        fiber = albanese_fiber_genus(fib.fiber_genus, fib.deck_order, fib.ramification)
    return InvariantReport(
        label=scenario.label,
        c1_sq=int(c1_sq) if c1_sq.denominator == 1 else c1_sq,
        c2=c2,
        q=q,
        p_g=p_g,
        chi=chi,
        h11=h11,
        fiber_genus=fiber,
        singularities=scenario.singularity_text(),
        noether_ok=noether_ok,
        k2_quotient=k2q,
        k2_correction=correction,
        euler_quotient=e_quot,
        exceptional_components=components,
        flags=tuple(flags),
        annotations=dict(scenario.annotations),
        display=dict(scenario.display),
        table=scenario.table,
        source=scenario.source,
    )
