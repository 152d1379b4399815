"""Z_2-valued 2-cocycles stored as +-1 matrices indexed by group elements."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import groups
from .gf2 import Echelon, bits_of
from .groups import Group


@dataclass(frozen=True, eq=False)
class Cocycle:
    group: Group
    table: np.ndarray

    def __post_init__(self) -> None:
        n = self.group.order
        if self.table.shape != (n, n):
            raise ValueError(f"cocycle table shape {self.table.shape} does not match |G| = {n}")
        self.table.setflags(write=False)

    def __call__(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def __mul__(self, other: "Cocycle") -> "Cocycle":
        return hadamard_product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cocycle):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((id(self.group), self.table.tobytes()))

    @property
    def order(self) -> int:
        return self.group.order

    def bits(self) -> int:
        """Row-major bitset, bit ``g*n + h`` set where ``psi(g, h) = -1``."""
        return to_bits(self.table)

    def is_trivial(self) -> bool:
        return bool(np.all(self.table == 1))


def to_bits(M: np.ndarray) -> int:
    return int.from_bytes(np.packbits((np.asarray(M) < 0).ravel(), bitorder="little").tobytes(), "little")


def from_bits(bits: int, n: int) -> np.ndarray:
    nbytes = (n * n + 7) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    flat = np.unpackbits(raw, bitorder="little")[: n * n]
    return (1 - 2 * flat.astype(np.int8)).reshape(n, n)


def is_cocycle(M: np.ndarray, G: Group) -> bool:
    """The cocycle identity ``psi(g,h) psi(gh,k) = psi(g,hk) psi(h,k)``, plus ``psi(1,1) = 1``."""
    M = np.asarray(M)
    n = G.order
    if M.shape != (n, n):
        raise ValueError(f"matrix shape {M.shape} does not match |G| = {n}")
    if not np.all(np.abs(M) == 1) or M[0, 0] != 1:
        return False
    T = G.cayley()
    lhs = M[:, :, None] * M[T[:, :, None], np.arange(n)[None, None, :]]
    rhs = M[np.arange(n)[:, None, None], T[None, :, :]] * M[None, :, :]
    return bool(np.array_equal(lhs, rhs))


def make(G: Group, M, check: bool = True) -> Cocycle:
    M = np.array(M, dtype=np.int8)
    if check and not is_cocycle(M, G):
        raise ValueError(f"matrix is not a cocycle over {G.name}")
    return Cocycle(G, M)


def trivial(G: Group) -> Cocycle:
    return Cocycle(G, np.ones((G.order, G.order), dtype=np.int8))


def coboundary(G: Group, phi: Sequence[int]) -> Cocycle:
    """``d phi(g, h) = phi(g) phi(h) phi(gh)`` for a normalized map ``phi``."""
    phi = np.asarray(phi, dtype=np.int8)
    if phi.shape != (G.order,) or not np.all(np.abs(phi) == 1):
        raise ValueError("phi must be a +-1 vector of length |G|")
    if phi[0] != 1:
        raise ValueError("phi must be normalized (phi(identity) = 1)")
    T = G.cayley()
    return Cocycle(G, phi[:, None] * phi[None, :] * phi[T])


def delta(G: Group, k: int) -> np.ndarray:
    phi = np.ones(G.order, dtype=np.int8)
    phi[k] = -1
    return phi


def elementary_coboundary(G: Group, k: int) -> Cocycle:
    """``d delta_k`` where ``delta_k`` is -1 exactly at element ``k``."""
    if k == 0:
        raise ValueError("the identity gives the trivial coboundary; k must be >= 1")
    if not 0 < k < G.order:
        raise ValueError(f"element index {k} out of range")
    return coboundary(G, delta(G, k))


def gamma(m: int) -> Cocycle:
    """``gamma_m(j, k) = (-1)^floor((j+k)/m)`` over ``Z_m``: the back-negacyclic matrix."""
    if m < 2:
        raise ValueError("gamma_m needs m >= 2")
    i = np.arange(m)
    return Cocycle(groups.cyclic(m), np.where(i[:, None] + i[None, :] >= m, -1, 1).astype(np.int8))


def f_z(s: Sequence[int], z: Sequence[int]) -> Cocycle:
    """``f_z(x, y) = prod_{z_i = 1} gamma_{s_i}(x_i, y_i)`` over ``Z_{s_1} x ... x Z_{s_r}``."""
    s, z = tuple(s), tuple(z)
    if len(s) != len(z):
        raise ValueError(f"size vector {s} and type vector {z} differ in length")
    G = groups.abelian(s)
    X = np.array(G.labels, dtype=np.int64).reshape(G.order, len(s))
    M = np.ones((G.order, G.order), dtype=np.int8)
    for i, (si, zi) in enumerate(zip(s, z)):
        if zi:
            carry = X[:, i][:, None] + X[:, i][None, :] >= si
            M = np.where(carry, -M, M)
    return Cocycle(G, M)


def hadamard_product(c1: Cocycle, c2: Cocycle) -> Cocycle:
    if c1.group is not c2.group and c1.group.spec != c2.group.spec:
        raise ValueError(f"cocycles over different groups: {c1.group.name} vs {c2.group.name}")
    return Cocycle(c1.group, c1.table * c2.table)


def product(G: Group, factors: Iterable[Cocycle]) -> Cocycle:
    M = np.ones((G.order, G.order), dtype=np.int8)
    for c in factors:
        M = M * c.table
    return Cocycle(G, M)


@functools.lru_cache(maxsize=None)
def dihedral_lambda(n: int) -> Cocycle:
    """Representative ``[[A, A], [B, -B]]`` over ``D_2n``.

    ``A`` is the back-negacyclic matrix of order ``n`` and ``B`` is ``A`` with
    its rows in reverse order.
    """
    A = gamma(n).table
    B = A[::-1]
    return make(groups.dihedral(n), np.block([[A, A], [B, -B]]))


@functools.lru_cache(maxsize=None)
def dihedral_beta(m: int) -> Cocycle:
    """``[[J, J], [J, -J]]`` over ``D_2m``: the inflation of ``gamma_2`` along ``D_2m -> Z_2``."""
    J = np.ones((m, m), dtype=np.int8)
    return make(groups.dihedral(m), np.block([[J, J], [J, -J]]))


class CoboundaryBasis:
    """Canonical GF(2) basis of ``B^2(G, Z_2)`` made of elementary coboundaries.

    Elements are scanned in index order and ``d_k`` is kept when it is
    independent of those already kept.
    """

    def __init__(self, G: Group):
        self.group = G
        self.indices: list[int] = []
        self.relations: list[list[int]] = []
        self._echelon = Echelon()
        self._rows: list[int] = []
        ech = Echelon()
        candidates = list(range(1, G.order))
        for k in candidates:
            v = elementary_coboundary(G, k).bits()
            independent, tags = ech.add(v)
            if independent:
                self.indices.append(k)
                self._echelon.add(v)
                self._rows.append(v)
            else:
                self.relations.append(sorted(candidates[j] for j in bits_of(tags)))

    @property
    def dimension(self) -> int:
        return len(self.indices)

    def decompose(self, c: Cocycle) -> tuple[int, ...] | None:
        residual, tags = self._echelon.reduce(c.bits())
        if residual:
            return None
        return tuple(self.indices[j] for j in bits_of(tags))

    def homomorphisms(self) -> list[np.ndarray]:
        """All homomorphisms ``G -> {+-1}``: maps whose coboundary is trivial."""
        out = [np.ones(self.group.order, dtype=np.int8)]
        for rel in self.relations:
            chi = np.ones(self.group.order, dtype=np.int8)
            chi[rel] = -1
            out += [x * chi for x in out]
        return out


@functools.lru_cache(maxsize=None)
def coboundary_basis(G: Group) -> CoboundaryBasis:
    return CoboundaryBasis(G)


def decompose_coboundary(c: Cocycle) -> tuple[int, ...] | None:
    """Element indices ``k`` with ``c = prod d_k`` over the canonical basis, or ``None``."""
    return coboundary_basis(c.group).decompose(c)


def is_coboundary(c: Cocycle) -> bool:
    return decompose_coboundary(c) is not None


def from_subset(representative: Cocycle, subset: Iterable[int]) -> Cocycle:
    """``representative * prod_{k in subset} d_k``."""
    G = representative.group
    M = representative.table.copy()
    for k in subset:
        M = M * elementary_coboundary(G, k).table
    return Cocycle(G, M)


def delta_product(G: Group, subset: Iterable[int]) -> np.ndarray:
    """``prod_{k in subset} delta_k`` as a +-1 vector."""
    phi = np.ones(G.order, dtype=np.int8)
    for k in subset:
        phi[k] = -phi[k]
    return phi


def space(G: Group, representatives: Sequence[Cocycle] = ()) -> list[Cocycle]:
    """Every cocycle in the span of ``representatives`` and all elementary coboundaries."""
    from .gf2 import span

    vecs = [c.bits() for c in representatives] + [elementary_coboundary(G, k).bits() for k in range(1, G.order)]
    return [Cocycle(G, from_bits(v, G.order)) for v in sorted(span(vecs))]


def transport(c: Cocycle, perm: Sequence[int], target: Group) -> Cocycle:
    """Move ``c`` along the isomorphism ``g -> perm[g]`` onto ``target``."""
    perm = np.asarray(perm)
    M = np.empty_like(c.table)
    M[np.ix_(perm, perm)] = c.table
    return make(target, M)


def dumps(c: Cocycle) -> str:
    """Text form: ``"<order> <group-spec>"`` then one row of ``+``/``-`` per element."""
    rows = ["".join("+" if v > 0 else "-" for v in row) for row in c.table]
    return "\n".join([f"{c.order} {c.group.spec}", *rows]) + "\n"


def loads(text: str, check: bool = True) -> Cocycle:
    """Inverse of :func:`dumps`; blank lines and lines starting with ``#`` are skipped."""
    numbered = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    numbered = [(i, ln) for i, ln in numbered if ln and not ln.startswith("#")]
    lines = [ln for _, ln in numbered]
    if not lines:
        raise ValueError("empty cocycle text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"line {numbered[0][0]}: expected '<order> <group-spec>', got {lines[0]!r}")
    n = int(head[0])
    G = groups.parse_group(head[1])
    if G.order != n:
        raise ValueError(f"line {numbered[0][0]}: order {n} does not match group {head[1]} of order {G.order}")
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    M = np.empty((n, n), dtype=np.int8)
    for r, ln in enumerate(lines[1:]):
        if len(ln) != n or set(ln) - {"+", "-"}:
            raise ValueError(f"line {numbered[r + 1][0]}: expected {n} characters from '+-', got {ln!r}")
        M[r] = [1 if ch == "+" else -1 for ch in ln]
    return make(G, M, check=check)
