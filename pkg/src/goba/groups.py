"""Finite groups realized on the index set 0..order-1.

Element 0 is always the identity.  Orderings are fixed per kind:

* abelian products use mixed-radix indexing, ``(x_1, ..., x_r)`` maps to its
  position in lexicographic order;
* ``D_2n`` is ordered ``1, a, ..., a^(n-1), b, ab, ..., a^(n-1) b``;
* ``Q_8t`` is ordered ``x^0, ..., x^(4t-1), y, xy, ..., x^(4t-1) y``;
* a central extension ``E_psi`` is ordered ``(1, g)`` for all ``g`` then
  ``(-1, g)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

TABLE_LIMIT = 256


class Group:
    """A finite group with a fixed element ordering.

    Products come from an explicit Cayley table when ``order <= TABLE_LIMIT``
    and from the supplied product rule otherwise.
    """

    def __init__(
        self,
        name: str,
        order: int,
        rule: Callable[[int, int], int],
        labels: Sequence[Hashable] | None = None,
        spec: str | None = None,
    ):
        self.name = name
        self.order = order
        self.spec = spec if spec is not None else name
        self._rule = rule
        self.labels = list(labels) if labels is not None else list(range(order))
        self.table: np.ndarray | None = None
        if order <= TABLE_LIMIT:
            table = np.empty((order, order), dtype=np.int64)
            for g in range(order):
                for h in range(order):
                    table[g, h] = rule(g, h)
            table.setflags(write=False)
            self.table = table
        self.inverse = self._inverse_table()
        self._abelian: bool | None = None

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def _check(self, g: int) -> None:
        if not 0 <= g < self.order:
            raise ValueError(f"element index {g} out of range for {self.name} of order {self.order}")

    def mul(self, g: int, h: int) -> int:
        self._check(g)
        self._check(h)
        if self.table is not None:
            return int(self.table[g, h])
        return self._rule(g, h)

    def inv(self, g: int) -> int:
        self._check(g)
        return int(self.inverse[g])

    def _inverse_table(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.int64)
        for g in range(self.order):
            if inv[g] >= 0:
                continue
            for h in range(self.order):
                if self.mul(g, h) == 0:
                    inv[g] = h
                    inv[h] = g
                    break
            else:
                raise ValueError(f"{self.name}: element {g} has no inverse")
        inv.setflags(write=False)
        return inv

    def cayley(self) -> np.ndarray:
        """Full product table as an array (built on demand for large groups)."""
        if self.table is not None:
            return self.table
        return np.array([[self._rule(g, h) for h in range(self.order)] for g in range(self.order)])

    def elements(self) -> range:
        return range(self.order)

    def label(self, g: int) -> Hashable:
        return self.labels[g]

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            T = self.cayley()
            self._abelian = bool(np.array_equal(T, T.T))
        return self._abelian

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def power(self, g: int, k: int) -> int:
        x = 0
        for _ in range(k % self.element_order(g)):
            x = self.mul(x, g)
        return x

    def center(self) -> list[int]:
        T = self.cayley()
        return [g for g in self.elements() if np.array_equal(T[g, :], T[:, g])]

    def coset(self, g: int, subgroup: Sequence[int]) -> tuple[int, ...]:
        """Left coset ``g N`` as a sorted index tuple."""
        return tuple(sorted({self.mul(g, n) for n in subgroup}))

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        s = set(subset)
        return 0 in s and all(self.mul(a, self.inv(b)) in s for a in s for b in s)

    def is_normal(self, subset: Sequence[int]) -> bool:
        s = set(subset)
        return all(self.mul(self.mul(g, n), self.inv(g)) in s for g in self.elements() for n in s)

    def check_axioms(self) -> None:
        """Exhaustive associativity / identity / inverse check; raises ValueError."""
        T = self.cayley()
        n = self.order
        idx = np.arange(n)
        if not (np.array_equal(T[0], idx) and np.array_equal(T[:, 0], idx)):
            raise ValueError(f"{self.name}: index 0 is not the identity")
        if not np.all(T[idx, self.inverse] == 0):
            raise ValueError(f"{self.name}: inverse law fails")
        for row in T:
            if len(set(row.tolist())) != n:
                raise ValueError(f"{self.name}: table is not a Latin square")
        # (gh)k == g(hk) for all triples
        lhs = T[T[:, :, None], idx[None, None, :]]
        rhs = T[idx[:, None, None], T[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise ValueError(f"{self.name}: associativity fails")


def _mixed_radix(sizes: Sequence[int]) -> tuple[Callable[[int], tuple[int, ...]], Callable[[Sequence[int]], int]]:
    sizes = tuple(sizes)

    def to_tuple(g: int) -> tuple[int, ...]:
        out = []
        for s in reversed(sizes):
            g, r = divmod(g, s)
            out.append(r)
        return tuple(reversed(out))

    def to_index(x: Sequence[int]) -> int:
        g = 0
        for s, xi in zip(sizes, x):
            g = g * s + (xi % s)
        return g

    return to_tuple, to_index


class AbelianGroup(Group):
    """``Z_{s_1} x ... x Z_{s_r}`` with mixed-radix indexing."""

    def __init__(self, sizes: Sequence[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes or any(s < 2 for s in sizes):
            raise ValueError(f"abelian group needs sizes >= 2, got {sizes}")
        self.sizes = sizes
        to_tuple, self._to_index = _mixed_radix(sizes)
        labels = [to_tuple(g) for g in range(math.prod(sizes))]

        def rule(g: int, h: int) -> int:
            return self._to_index([a + b for a, b in zip(labels[g], labels[h])])

        super().__init__(
            "x".join(f"Z{s}" for s in sizes),
            math.prod(sizes),
            rule,
            labels,
            spec="a:" + "x".join(map(str, sizes)),
        )

    def to_index(self, x: Sequence[int]) -> int:
        """Index of the tuple ``x`` (entries reduced modulo the sizes)."""
        return self._to_index(x)


def abelian(sizes: Sequence[int]) -> AbelianGroup:
    return _abelian(tuple(int(s) for s in sizes))


@functools.lru_cache(maxsize=None)
def _abelian(sizes: tuple[int, ...]) -> AbelianGroup:
    return AbelianGroup(sizes)


def cyclic(n: int) -> Group:
    return abelian([n])


@functools.lru_cache(maxsize=None)
def dihedral(n: int) -> Group:
    """``D_2n = <a, b | a^n = b^2 = 1, a^b = a^-1>``; index ``i + n e`` is ``a^i b^e``."""
    if n < 2:
        raise ValueError(f"dihedral group needs n >= 2, got {n}")

    def rule(g: int, h: int) -> int:
        i, e = g % n, g // n
        j, f = h % n, h // n
        k = (i + j) % n if e == 0 else (i - j) % n
        return k + n * ((e + f) % 2)

    labels = [("a", i) for i in range(n)] + [("ab", i) for i in range(n)]
    return Group(f"D{2 * n}", 2 * n, rule, labels, spec=f"d:{n}")


@functools.lru_cache(maxsize=None)
def dicyclic(t: int) -> Group:
    """``Q_8t = <x, y | x^2t = y^2, y^4 = 1, y^-1 x y = x^-1>``; index ``i + 4t e`` is ``x^i y^e``."""
    if t < 1:
        raise ValueError(f"dicyclic group needs t >= 1, got {t}")
    m = 4 * t

    def rule(g: int, h: int) -> int:
        i, a = g % m, g // m
        j, b = h % m, h // m
        e = i + (j if a == 0 else -j)
        if a + b == 2:
            e += 2 * t
        return e % m + m * ((a + b) % 2)

    labels = [("x", i) for i in range(m)] + [("xy", i) for i in range(m)]
    return Group(f"Q{8 * t}", 8 * t, rule, labels, spec=f"q:{t}")


@functools.lru_cache(maxsize=None)
def direct_product(G: Group, H: Group) -> Group:
    """``G x H`` with index ``g * |H| + h``."""
    m = H.order

    def rule(x: int, y: int) -> int:
        return G.mul(x // m, y // m) * m + H.mul(x % m, y % m)

    labels = [(a, b) for a in G.labels for b in H.labels]
    spec = f"x2:{H.spec}" if G.spec == "a:2" and H.spec else None
    return Group(f"{G.name}x{H.name}", G.order * m, rule, labels, spec=spec)


@dataclass(frozen=True)
class Quotient:
    """``G / N`` for a normal subgroup ``N``, cosets represented by their minimal index."""

    parent: Group
    subgroup: tuple[int, ...]
    group: Group
    cosets: tuple[tuple[int, ...], ...]
    projection: np.ndarray = field(repr=False)

    def project(self, g: int) -> int:
        return int(self.projection[g])

    def lift(self, c: int) -> int:
        return self.cosets[c][0]


def quotient(G: Group, N: Sequence[int], name: str | None = None) -> Quotient:
    N = tuple(sorted(set(N)))
    if not G.is_subgroup(N) or not G.is_normal(N):
        raise ValueError(f"{N} is not a normal subgroup of {G.name}")
    seen: dict[tuple[int, ...], int] = {}
    proj = np.empty(G.order, dtype=np.int64)
    for g in G.elements():
        c = G.coset(g, N)
        if c not in seen:
            seen[c] = len(seen)
        proj[g] = seen[c]
    cosets = tuple(sorted(seen, key=lambda c: seen[c]))
    reps = [c[0] for c in cosets]

    def rule(a: int, b: int) -> int:
        return int(proj[G.mul(reps[a], reps[b])])

    Q = Group(name or f"{G.name}/N{len(N)}", len(cosets), rule, [G.labels[r] for r in reps])
    proj.setflags(write=False)
    return Quotient(G, N, Q, cosets, proj)


@dataclass(frozen=True)
class Expansion:
    """The groups ``E``, ``H``, ``K`` attached to a size vector and type vector."""

    s: tuple[int, ...]
    z: tuple[int, ...]
    E: Group
    H: tuple[int, ...]
    K: tuple[int, ...]

    @property
    def G(self) -> AbelianGroup:
        return abelian(self.s)

    def reduce(self, g: int) -> tuple[int, ...]:
        """``g mod s`` as a tuple."""
        return tuple(x % s for x, s in zip(self.E.label(g), self.s))

    def quotient(self) -> Quotient:
        """``E / K`` with ``H / K`` its central subgroup of order 2."""
        if not any(self.z):
            raise ValueError("E/K is degenerate for z = 0")
        return _expansion_quotient(self.s, self.z)


@functools.lru_cache(maxsize=None)
def _build_expansion(s: tuple[int, ...], z: tuple[int, ...]) -> Expansion:
    if len(s) != len(z):
        raise ValueError(f"size vector {s} and type vector {z} differ in length")
    if any(v not in (0, 1) for v in z):
        raise ValueError(f"type vector must be 0/1, got {z}")
    # a private instance: the cached abelian group keeps its own spec
    E = AbelianGroup([(zi + 1) * si for si, zi in zip(s, z)])
    E.spec = "ext:" + "x".join(map(str, s)) + "/" + "".join(map(str, z))
    H = []
    K = []
    for g in E.elements():
        x = E.label(g)
        if all((xi == 0) if zi == 0 else xi in (0, si) for xi, si, zi in zip(x, s, z)):
            H.append(g)
            if sum(1 for xi in x if xi != 0) % 2 == 0:
                K.append(g)
    return Expansion(s, z, E, tuple(H), tuple(K))


@functools.lru_cache(maxsize=None)
def _expansion_quotient(s: tuple[int, ...], z: tuple[int, ...]) -> Quotient:
    ex = _build_expansion(s, z)
    Q = quotient(ex.E, ex.K, name=f"{ex.E.name}/K")
    Q.group.spec = "quo:" + ex.E.spec[len("ext:"):]
    return Q


def build_expansion(s: Sequence[int], z: Sequence[int]) -> Expansion:
    return _build_expansion(tuple(int(v) for v in s), tuple(int(v) for v in z))


def central_extension(psi) -> Group:
    """``E_psi`` with product ``(u, g)(v, h) = (u v psi(g, h), g h)``.

    Index ``g`` is ``(1, g)`` and ``n + g`` is ``(-1, g)``.
    """
    from .cocycles import is_cocycle  # cyclical import

    G = psi.group
    M = psi.table
    if not is_cocycle(M, G):
        raise ValueError("central extension requires a valid cocycle")
    n = G.order

    def rule(x: int, y: int) -> int:
        u, g = divmod(x, n)
        v, h = divmod(y, n)
        w = (u + v + (M[g, h] < 0)) % 2
        return w * n + G.mul(g, h)

    labels = [(1, lab) for lab in G.labels] + [(-1, lab) for lab in G.labels]
    spec = f"cext:{G.spec}:{psi.bits():x}" if G.spec else None
    return Group(f"E[{G.name}]", 2 * n, rule, labels, spec=spec)


def parse_group(spec: str) -> Group:
    """Build a group from a compact spec string.

    Grammar::

        a:S1xS2x...   abelian product Z_S1 x Z_S2 x ...
        c:N           cyclic group Z_N (same as a:N)
        d:N           dihedral group D_2N of order 2N
        q:T           dicyclic group Q_8T of order 8T
        ext:S1x.../Z1Z2...   expansion group E for size vector S, type vector Z
        quo:S1x.../Z1Z2...   the quotient E/K of that expansion group
        x2:SPEC              Z_2 x G, index u |G| + g
        cext:SPEC:HEX        central extension by the cocycle with row-major bitset HEX
    """
    kind, _, rest = spec.strip().partition(":")
    try:
        if kind == "x2":
            return direct_product(cyclic(2), parse_group(rest))
        if kind == "cext":
            from . import cocycles  # cyclical import

            inner, _, bits = rest.rpartition(":")
            G = parse_group(inner)
            return central_extension(cocycles.make(G, cocycles.from_bits(int(bits, 16), G.order)))
        if kind == "quo":
            s, _, z = rest.partition("/")
            return build_expansion([int(v) for v in s.split("x")], [int(c) for c in z]).quotient().group
        if kind in ("a", "c"):
            return abelian([int(v) for v in rest.split("x")])
        if kind == "d":
            return dihedral(int(rest))
        if kind == "q":
            return dicyclic(int(rest))
        if kind == "ext":
            s, _, z = rest.partition("/")
            return build_expansion([int(v) for v in s.split("x")], [int(c) for c in z]).E
    except ValueError as exc:
        raise ValueError(f"bad group spec {spec!r}: {exc}") from None
    raise ValueError(f"bad group spec {spec!r}: unknown kind {kind!r}")
