"""
Boundary strata of Satake compactifications as subsets of simple roots.

A subset ``I`` of the simple roots is represented by a ``frozenset`` of
0-based indices. For a dominant weight ``mu`` (fundamental-weight
coordinates) ``B(mu, alpha_i) = mu_i * d_i`` so orthogonality to ``mu`` is
the vanishing of the ``i``-th coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .roots import RootSystem, Weight

SimpleSubset = frozenset


def _as_subset(rs: RootSystem, subset: Iterable[int]) -> frozenset:
    subset = frozenset(int(i) for i in subset)
    bad = [i for i in subset if not 0 <= i < rs.rank]
    if bad:
        raise ValueError(f"simple-root indices {sorted(bad)} out of range for rank {rs.rank}")
    return subset


def support(rs: RootSystem, lam: Iterable, mu: Iterable) -> frozenset:
    """Simple roots with positive coefficient in ``mu - lam``.

    Raises
    ------
    ValueError
        If ``mu - lam`` is not a nonnegative integer combination of simple roots.
    """
    lam, mu = tuple(lam), tuple(mu)
    coeffs = rs.weight_to_root(tuple(m - l for m, l in zip(mu, lam)))
    if any(Fraction(c).denominator != 1 or c < 0 for c in coeffs):
        raise ValueError(f"{lam} is not mu minus a nonnegative integer combination of simple roots")
    return frozenset(i for i, c in enumerate(coeffs) if c > 0)


def _touches_mu(mu, i) -> bool:
    return mu[i] != 0


def is_mu_connected(rs: RootSystem, subset: Iterable[int], mu: Iterable) -> bool:
    """Whether the Dynkin graph on ``subset`` plus the node ``mu`` is connected."""
    subset = _as_subset(rs, subset)
    mu = tuple(mu)
    return all(any(_touches_mu(mu, i) for i in comp) for comp in rs.components(subset))


def mu_connected_core(rs: RootSystem, subset: Iterable[int], mu: Iterable) -> frozenset:
    """Largest mu-connected subset of ``subset``: the union of components that touch ``mu``."""
    subset = _as_subset(rs, subset)
    mu = tuple(mu)
    core = set()
    for comp in rs.components(subset):
        if any(_touches_mu(mu, i) for i in comp):
            core |= comp
    return frozenset(core)


def mu_saturation(rs: RootSystem, subset: Iterable[int], mu: Iterable) -> frozenset:
    """``I`` together with every simple root orthogonal to ``I`` and to ``mu``."""
    subset = _as_subset(rs, subset)
    mu = tuple(mu)
    if not is_mu_connected(rs, subset, mu):
        raise ValueError(f"{sorted(subset)} is not mu-connected for mu={mu}")
    extra = {
        j
        for j in range(rs.rank)
        if j not in subset
        and not _touches_mu(mu, j)
        and all(rs.cartan[i][j] == 0 for i in subset)
    }
    return subset | frozenset(extra)


@dataclass(frozen=True)
class BoundaryComponent:
    I: frozenset
    J: frozenset
    dim_VI: int
    restricted_highest_weight: Weight

    def sorted_I(self) -> list[int]:
        return sorted(self.I)

    def as_dict(self) -> dict:
        return {
            "I": sorted(self.I),
            "J": sorted(self.J),
            "dim_VI": self.dim_VI,
            "restricted_highest_weight": list(self.restricted_highest_weight),
        }


@dataclass(frozen=True)
class BoundaryPoset:
    """Boundary components ordered by inclusion of ``I``."""

    components: tuple

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, subset) -> BoundaryComponent:
        subset = frozenset(subset)
        for c in self.components:
            if c.I == subset:
                return c
        raise KeyError(sorted(subset))

    def leq(self, a: BoundaryComponent, b: BoundaryComponent) -> bool:
        return a.I <= b.I

    def maximum(self) -> BoundaryComponent:
        tops = [a for a in self.components if all(self.leq(b, a) for b in self.components)]
        if len(tops) != 1:
            raise ValueError("poset has no unique maximum")
        return tops[0]

    def minimum(self) -> BoundaryComponent:
        bottoms = [a for a in self.components if all(self.leq(a, b) for b in self.components)]
        if len(bottoms) != 1:
            raise ValueError("poset has no unique minimum")
        return bottoms[0]

    def covers(self) -> list[tuple]:
        """Pairs ``(a, b)`` with ``a < b`` and nothing strictly between."""
        out = []
        for a in self.components:
            for b in self.components:
                if a.I < b.I and not any(a.I < c.I < b.I for c in self.components):
                    out.append((a, b))
        return out


def _check_mu(rs: RootSystem, mu) -> Weight:
    mu = tuple(mu)
    if len(mu) != rs.rank:
        raise ValueError(f"weight {mu} has length {len(mu)}, expected {rs.rank}")
    if any(Fraction(m).denominator != 1 or m < 0 for m in mu):
        raise ValueError(f"{mu} is not dominant integral")
    for comp in rs.components():
        if all(mu[i] == 0 for i in comp):
            raise ValueError(
                f"{mu} vanishes on the whole component {sorted(comp)}; representation is not almost faithful"
            )
    return tuple(int(m) for m in mu)


def mu_connected_subsets(rs: RootSystem, mu) -> list[frozenset]:
    """All mu-connected subsets, by brute force over the power set."""
    mu = tuple(mu)
    out = []
    for k in range(rs.rank + 1):
        for c in combinations(range(rs.rank), k):
            if is_mu_connected(rs, c, mu):
                out.append(frozenset(c))
    return out


def enumerate_boundary_components(rs: RootSystem, mu) -> BoundaryPoset:
    from .weights import dim_V_I, restricted_highest_weight, weight_diagram

    mu = _check_mu(rs, mu)
    diagram = weight_diagram(rs, mu)
    comps = [
        BoundaryComponent(
            I=I,
            J=mu_saturation(rs, I, mu),
            dim_VI=dim_V_I(diagram, I),
            restricted_highest_weight=restricted_highest_weight(mu, I),
        )
        for I in mu_connected_subsets(rs, mu)
    ]
    return BoundaryPoset(tuple(comps))
