"""
Exact root systems and Weyl group orbits for the finite Cartan types.

Weights are integer tuples in the fundamental-weight basis.  Roots are kept
twice: in fundamental-weight coordinates (as weights) and in simple-root
coordinates.  The invariant form is normalized so that long roots have
squared length 2.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import sympy

Weight = tuple  # tuple of int (or Fraction for rational points of the weight space)

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

# |W| per type, used by tests and by `weyl_group_order`.
_WEYL_ORDER = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in "ABCDEFG" or len(self.family) != 1:
            raise ValueError(f"unknown Cartan family {self.family!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"rank must be a positive integer, got {self.rank!r}")
        if self.family in _MIN_RANK and self.rank < _MIN_RANK[self.family]:
            raise ValueError(
                f"{self.family}_n requires n >= {_MIN_RANK[self.family]}, got {self.rank}"
            )
        if self.family in _FIXED_RANKS and self.rank not in _FIXED_RANKS[self.family]:
            raise ValueError(f"invalid rank {self.rank} for type {self.family}")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise ValueError(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _simple_gram(ct: CartanType) -> list[list[Fraction]]:
    """Gram matrix B(alpha_i, alpha_j) of the simple roots (Bourbaki numbering)."""
    n = ct.rank
    F = Fraction
    g = [[F(0)] * n for _ in range(n)]

    def bond(i, j, value):
        g[i][j] = g[j][i] = F(value)

    fam = ct.family
    if fam in "ABD":
        for i in range(n):
            g[i][i] = F(2)
        chain = n if fam != "D" else n - 1
        for i in range(chain - 1):
            bond(i, i + 1, -1)
        if fam == "D":
            bond(n - 3, n - 1, -1)
        if fam == "B":
            g[n - 1][n - 1] = F(1)
    elif fam == "C":
        for i in range(n - 1):
            g[i][i] = F(1)
        g[n - 1][n - 1] = F(2)
        for i in range(n - 2):
            bond(i, i + 1, F(-1, 2))
        bond(n - 2, n - 1, -1)
    elif fam == "E":
        for i in range(n):
            g[i][i] = F(2)
        bond(0, 2, -1)
        bond(1, 3, -1)
        for i in range(2, n - 1):
            bond(i, i + 1, -1)
    elif fam == "F":
        g[0][0] = g[1][1] = F(2)
        g[2][2] = g[3][3] = F(1)
        bond(0, 1, -1)
        bond(1, 2, -1)
        bond(2, 3, F(-1, 2))
    elif fam == "G":
        g[0][0] = F(2, 3)
        g[1][1] = F(2)
        bond(0, 1, -1)
    return g


def _rational_inverse(m: Sequence[Sequence]) -> tuple:
    inv = sympy.Matrix(m).inv()
    return tuple(
        tuple(Fraction(int(x.p), int(x.q)) for x in inv.row(i)) for i in range(inv.rows)
    )


class RootSystem:
    """A reduced root system given by the Gram matrix of its simple roots.

    Instances are immutable after construction.  Use `build_root_system` for
    the named Cartan types and `subsystem` for the root system spanned by a
    subset of the simple roots.
    """

    def __init__(self, simple_gram, cartan_type: CartanType | None = None):
        gram = tuple(tuple(Fraction(x) for x in row) for row in simple_gram)
        n = len(gram)
        if n == 0:
            raise ValueError("empty root system")
        self.cartan_type = cartan_type
        self.rank = n
        self.simple_gram = gram
        # d_i = B(alpha_i, alpha_i) / 2, so B(varpi_j, alpha_i) = delta_ij d_i.
        self.half_norms = tuple(gram[i][i] / 2 for i in range(n))
        cartan = []
        for i in range(n):
            row = []
            for j in range(n):
                c = 2 * gram[i][j] / gram[j][j]
                if c.denominator != 1:
                    raise ValueError("simple Gram matrix is not crystallographic")
                row.append(int(c))
            cartan.append(tuple(row))
        # cartan[i][j] = <alpha_i, alpha_j^vee>; row i is alpha_i in fundamental-weight coords.
        self.cartan = tuple(cartan)
        if not sympy.Matrix(gram).is_positive_definite:
            raise ValueError("simple Gram matrix is not positive definite (not finite type)")
        self.inverse_cartan = _rational_inverse(self.cartan)
        self.positive_roots = self._enumerate_positive_roots()
        self._root_index = {}
        for c in self.positive_roots:
            self._root_index[self.root_to_weight(c)] = c
            self._root_index[self.root_to_weight(tuple(-x for x in c))] = tuple(-x for x in c)

    def __repr__(self):
        label = str(self.cartan_type) if self.cartan_type else f"rank {self.rank}"
        return f"RootSystem({label})"

    # -- coordinates -------------------------------------------------------

    def root_to_weight(self, coeffs: Sequence) -> Weight:
        """Simple-root coordinates -> fundamental-weight coordinates."""
        n = self.rank
        out = [0] * n
        for i, c in enumerate(coeffs):
            if c:
                row = self.cartan[i]
                for j in range(n):
                    out[j] += c * row[j]
        return tuple(out)

    def weight_to_root(self, weight: Sequence) -> tuple:
        """Fundamental-weight coordinates -> simple-root coordinates (exact rationals)."""
        n = self.rank
        inv = self.inverse_cartan
        return tuple(
            sum((Fraction(weight[i]) * inv[i][j] for i in range(n)), Fraction(0))
            for j in range(n)
        )

    @property
    def simple_roots(self) -> tuple:
        return tuple(self.cartan)

    @property
    def positive_roots_weights(self) -> tuple:
        return tuple(self.root_to_weight(c) for c in self.positive_roots)

    @cached_property
    def form(self) -> tuple:
        """Matrix of B in the fundamental-weight basis: B(varpi_i, varpi_j)."""
        n = self.rank
        inv = self.inverse_cartan
        # varpi_i = sum_k inv[i][k] alpha_k, and B(varpi_j, alpha_k) = delta_jk d_k.
        return tuple(
            tuple(inv[i][j] * self.half_norms[j] for j in range(n)) for i in range(n)
        )

    @cached_property
    def rho(self) -> Weight:
        return (1,) * self.rank

    # -- exact arithmetic --------------------------------------------------

    def inner(self, lam: Sequence, mu: Sequence) -> Fraction:
        """B(lam, mu) for weights in fundamental-weight coordinates."""
        f = self.form
        n = self.rank
        total = Fraction(0)
        for i in range(n):
            if lam[i]:
                row = f[i]
                total += sum((Fraction(lam[i]) * row[j] * mu[j] for j in range(n) if mu[j]), Fraction(0))
        return total

    def is_root(self, alpha: Sequence) -> bool:
        return tuple(alpha) in self._root_index

    def root_coords(self, alpha: Sequence) -> tuple:
        try:
            return self._root_index[tuple(alpha)]
        except KeyError:
            raise ValueError(f"{tuple(alpha)} is not a root") from None

    def pairing(self, lam: Sequence, alpha: Sequence) -> Fraction:
        """<lam, alpha^vee> = 2 B(lam, alpha) / B(alpha, alpha)."""
        c = self.root_coords(alpha)
        d = self.half_norms
        b_la = sum((Fraction(lam[i]) * c[i] * d[i] for i in range(self.rank) if c[i]), Fraction(0))
        b_aa = sum((Fraction(alpha[i]) * c[i] * d[i] for i in range(self.rank) if c[i]), Fraction(0))
        return 2 * b_la / b_aa

    def reflect(self, lam: Sequence, alpha: Sequence) -> Weight:
        k = self.pairing(lam, alpha)
        out = tuple(Fraction(l) - k * a for l, a in zip(lam, alpha))
        return _normalize(out)

    def simple_reflect(self, lam: Sequence, i: int) -> Weight:
        m = lam[i]
        if not m:
            return tuple(lam)
        row = self.cartan[i]
        return tuple(l - m * a for l, a in zip(lam, row))

    def weyl_orbit(self, lam: Sequence, generators: Iterable[int] | None = None) -> frozenset:
        """Orbit of `lam` under the reflections in `generators` (default: all simple roots)."""
        gens = tuple(range(self.rank)) if generators is None else tuple(generators)
        start = _normalize(tuple(lam))
        seen = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i in gens:
                if w[i]:
                    v = self.simple_reflect(w, i)
                    if v not in seen:
                        seen.add(v)
                        queue.append(v)
        return frozenset(seen)

    def dominant_representative(self, lam: Sequence) -> Weight:
        w = tuple(lam)
        while True:
            for i, m in enumerate(w):
                if m < 0:
                    w = self.simple_reflect(w, i)
                    break
            else:
                return w

    def is_dominant(self, lam: Sequence) -> bool:
        return all(m >= 0 for m in lam)

    def height(self, coeffs: Sequence) -> Fraction:
        return sum((Fraction(c) for c in coeffs), Fraction(0))

    def components(self, subset: Iterable[int] | None = None) -> list[frozenset]:
        """Connected components of the Dynkin diagram restricted to `subset`."""
        nodes = set(range(self.rank)) if subset is None else set(subset)
        comps = []
        while nodes:
            start = nodes.pop()
            comp = {start}
            stack = [start]
            while stack:
                i = stack.pop()
                for j in list(nodes):
                    if self.cartan[i][j] != 0:
                        nodes.discard(j)
                        comp.add(j)
                        stack.append(j)
            comps.append(frozenset(comp))
        return sorted(comps, key=lambda c: min(c))

    def subsystem(self, subset: Iterable[int]) -> "RootSystem":
        """Root system generated by the simple roots indexed by `subset` (sorted)."""
        idx = sorted(set(subset))
        if not idx:
            raise ValueError("empty subset has no root system")
        gram = [[self.simple_gram[i][j] for j in idx] for i in idx]
        return RootSystem(gram)

    def weyl_group_order(self) -> int:
        ct = self.cartan_type
        if ct is None:
            return len(self.weyl_orbit(self.rho))
        from math import factorial

        n = ct.rank
        if ct.family == "A":
            return factorial(n + 1)
        if ct.family in "BC":
            return 2**n * factorial(n)
        if ct.family == "D":
            return 2 ** (n - 1) * factorial(n)
        return _WEYL_ORDER[(ct.family, n)]

    # -- construction ------------------------------------------------------

    def _enumerate_positive_roots(self) -> tuple:
        # alpha_i-strings: for a positive root beta != alpha_i with string
        # beta - p alpha_i, ..., beta + q alpha_i we have p - q = <beta, alpha_i^vee>.
        n = self.rank
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        roots = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                bw = self.root_to_weight(beta)
                for i in range(n):
                    if beta == simple[i]:
                        continue
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if tuple(down) in roots:
                            p += 1
                        else:
                            break
                    q = p - bw[i]
                    if q > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in roots:
                            roots.add(up)
                            nxt.append(up)
            layer = nxt
        return tuple(sorted(roots, key=lambda c: (sum(c), tuple(-x for x in c))))


def _normalize(w: tuple) -> tuple:
    """Turn integral Fractions into ints so that hashing is canonical."""
    out = []
    for x in w:
        if isinstance(x, Fraction) and x.denominator == 1:
            out.append(int(x))
        else:
            out.append(x)
    return tuple(out)


def build_root_system(cartan: CartanType | str) -> RootSystem:
    if isinstance(cartan, str):
        cartan = CartanType.parse(cartan)
    return RootSystem(_simple_gram(cartan), cartan)


def parse_weight(text: str) -> Weight:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")


def fundamental_weight(rank: int, i: int) -> Weight:
    return tuple(1 if j == i else 0 for j in range(rank))
