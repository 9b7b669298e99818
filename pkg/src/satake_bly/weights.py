"""
Weight diagrams of irreducible highest-weight representations.

Multiplicities come from Freudenthal's recursion evaluated on dominant
weights only; the full diagram is the union of Weyl orbits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .roots import RootSystem, Weight


@dataclass(frozen=True, eq=False)
class WeightDiagram:
    root_system: RootSystem
    highest: Weight
    multiplicities: Mapping[Weight, int] = field(repr=False)

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities.values())

    def __len__(self):
        return len(self.multiplicities)

    def __getitem__(self, weight) -> int:
        return self.multiplicities.get(tuple(weight), 0)

    def __iter__(self):
        return iter(self.multiplicities)

    def items(self):
        return self.multiplicities.items()


def _check_dominant_integral(rs: RootSystem, mu) -> Weight:
    mu = tuple(mu)
    if len(mu) != rs.rank:
        raise ValueError(f"weight {mu} has length {len(mu)}, expected {rs.rank}")
    for m in mu:
        if isinstance(m, Fraction) and m.denominator != 1 or not float(m).is_integer():
            raise ValueError(f"weight {mu} is not integral")
    mu = tuple(int(m) for m in mu)
    if any(m < 0 for m in mu):
        raise ValueError(f"weight {mu} is not dominant")
    return mu


def weyl_dimension(rs: RootSystem, mu) -> int:
    """Weyl dimension formula, in exact arithmetic."""
    mu = _check_dominant_integral(rs, mu)
    shifted = tuple(m + 1 for m in mu)
    num = Fraction(1)
    den = Fraction(1)
    for alpha in rs.positive_roots_weights:
        num *= rs.pairing(shifted, alpha)
        den *= rs.pairing(rs.rho, alpha)
    dim = num / den
    assert dim.denominator == 1
    return int(dim)


def dominant_weights(rs: RootSystem, mu) -> list[Weight]:
    """Dominant weights below `mu`, i.e. the dominant weights of V(mu).

    Every dominant weight below mu is reachable from mu by subtracting
    positive roots while staying dominant (Stembridge), so a search over
    that move set is complete.
    """
    mu = _check_dominant_integral(rs, mu)
    found = {mu}
    stack = [mu]
    roots = rs.positive_roots_weights
    while stack:
        lam = stack.pop()
        for a in roots:
            nu = tuple(l - x for l, x in zip(lam, a))
            if nu not in found and all(m >= 0 for m in nu):
                found.add(nu)
                stack.append(nu)
    return sorted(found, key=lambda w: (_depth(rs, mu, w), w))


def _depth(rs: RootSystem, mu, lam) -> Fraction:
    return sum(rs.weight_to_root(tuple(m - l for m, l in zip(mu, lam))), Fraction(0))


def weight_diagram(rs: RootSystem, mu) -> WeightDiagram:
    mu = _check_dominant_integral(rs, mu)
    roots = rs.positive_roots_weights
    rho = rs.rho
    mu_rho = tuple(m + 1 for m in mu)
    top = rs.inner(mu_rho, mu_rho)

    dominant_mult: dict[Weight, int] = {}
    for lam in dominant_weights(rs, mu):
        if lam == mu:
            dominant_mult[lam] = 1
            continue
        total = Fraction(0)
        for a in roots:
            nu = tuple(l + x for l, x in zip(lam, a))
            # root strings through a weight are unbroken
            while True:
                m = dominant_mult.get(rs.dominant_representative(nu), 0)
                if m == 0:
                    break
                total += m * rs.inner(nu, a)
                nu = tuple(l + x for l, x in zip(nu, a))
        lam_rho = tuple(l + r for l, r in zip(lam, rho))
        mult = 2 * total / (top - rs.inner(lam_rho, lam_rho))
        assert mult.denominator == 1 and mult >= 0
        if mult:
            dominant_mult[lam] = int(mult)

    entries: dict[Weight, int] = {}
    for lam, m in dominant_mult.items():
        for w in rs.weyl_orbit(lam):
            entries[w] = m
    return WeightDiagram(rs, mu, entries)


def _below(rs: RootSystem, mu, nu) -> bool:
    """Whether mu - nu is a nonnegative combination of simple roots."""
    return all(c >= 0 for c in rs.weight_to_root(tuple(m - n for m, n in zip(mu, nu))))


def weights_by_strings(rs: RootSystem, mu) -> frozenset:
    """Weight set of V(mu) as the saturated closure of {mu} under root strings.

    Independent of Freudenthal; used as a cross-check of `weight_diagram`.
    """
    mu = _check_dominant_integral(rs, mu)
    roots = rs.positive_roots_weights
    found = {mu}
    stack = [mu]
    while stack:
        lam = stack.pop()
        for a in roots:
            k = rs.pairing(lam, a)
            step = -1 if k > 0 else 1
            for j in range(1, abs(int(k)) + 1):
                nu = tuple(l + step * j * x for l, x in zip(lam, a))
                if nu not in found:
                    found.add(nu)
                    stack.append(nu)
    return frozenset(found)


def dim_V_I(diagram: WeightDiagram, subset: Iterable[int]) -> int:
    """Dimension of V_I, the sum of weight spaces whose support lies in `subset`."""
    from .satake import support

    subset = frozenset(subset)
    return sum(
        m
        for lam, m in diagram.items()
        if support(diagram.root_system, lam, diagram.highest) <= subset
    )


def restricted_highest_weight(mu, subset: Iterable[int]) -> Weight:
    """Highest weight of V_I for the subsystem on `subset`: the coroot pairings <mu, alpha_i^vee>."""
    return tuple(mu[i] for i in sorted(set(subset)))
