"""Exhaustive search for quasi-orthogonal cocycles and GOBAs.

A search space is a representative cocycle times the span of a canonical set
of elementary coboundaries.  Subsets of the basis are encoded as masks (bit
``j`` selects ``basis[j]``) and are visited in increasing mask order; the high
bits of the mask form independent partitions that can be farmed out to worker
processes.

Over ``Z_{4t+2}`` the module also implements the path-counting criterion on
generalized coboundary matrices, which uses 1-based column labels
``1, ..., 4t+2`` (label ``i`` is the element ``i - 1``).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import cocycles, groups
from .arrays import BinaryArray
from .cocycles import Cocycle
from .excess import is_quasi_orthogonal

LOW_BITS = 14


@dataclass(frozen=True, eq=False)
class SearchSpace:
    representative: Cocycle
    basis: tuple[int, ...]
    w_min: int
    w_max: int
    coboundary: bool
    name: str = ""

    @property
    def group(self) -> groups.Group:
        return self.representative.group

    @property
    def target_excess(self) -> int:
        t = (self.group.order - 2) // 4
        return 8 * t + 2 if self.coboundary else 4 * t

    def cocycle(self, subset: Iterable[int]) -> Cocycle:
        return cocycles.from_subset(self.representative, subset)

    def subset(self, mask: int) -> tuple[int, ...]:
        return tuple(self.basis[j] for j in range(len(self.basis)) if mask >> j & 1)

    @property
    def partitions(self) -> int:
        return 1 << max(0, len(self.basis) - LOW_BITS)


def make_space(representative: Cocycle, weights: tuple[int, int] | None = None, name: str = "") -> SearchSpace:
    G = representative.group
    if G.order % 4 != 2 or G.order <= 2:
        raise ValueError(f"quasi-orthogonal search needs |G| = 4t+2 > 2, got {G.order}")
    basis = tuple(cocycles.coboundary_basis(G).indices)
    lo, hi = weights if weights is not None else (0, len(basis))
    cob = cocycles.decompose_coboundary(representative) is not None
    return SearchSpace(representative, basis, lo, hi, cob, name or G.spec)


def cyclic_space(t: int, prune: bool = True) -> SearchSpace:
    """``gamma * prod d_k`` over ``Z_{4t+2}``, weight-bounded to ``[t, 3t+1]`` when pruned."""
    n = 4 * t + 2
    rep = cocycles.gamma(n)
    return make_space(rep, (t, 3 * t + 1) if prune else None, name=f"gamma{n}")


def fz_space(s: Sequence[int], z: Sequence[int]) -> SearchSpace:
    return make_space(cocycles.f_z(s, z), name=f"f_z s={tuple(s)} z={tuple(z)}")


def trivial_space(G: groups.Group) -> SearchSpace:
    return make_space(cocycles.trivial(G), name=f"B2({G.name})")


@dataclass(frozen=True)
class Hit:
    mask: int
    subset: tuple[int, ...]
    row_sums: tuple[int, ...]
    re: int

    def to_json(self) -> dict:
        return {"subset": list(self.subset), "row_sums": list(self.row_sums), "re": self.re}


def _row_masks(M: np.ndarray) -> np.ndarray:
    """Rows of a sign matrix as uint64 bitsets (bit ``h`` set where the entry is -1)."""
    weights = np.uint64(1) << np.arange(M.shape[1], dtype=np.uint64)
    return ((M < 0).astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


@dataclass(frozen=True)
class _Job:
    n: int
    rep_rows: np.ndarray
    gen_rows: np.ndarray = field(repr=False)
    low: int
    w_min: int
    w_max: int
    target: int


def _prepare(space: SearchSpace) -> _Job:
    G = space.group
    if G.order > 64:
        raise ValueError("bitset search supports |G| <= 64")
    gens = np.stack([_row_masks(cocycles.elementary_coboundary(G, k).table) for k in space.basis]) if space.basis else np.zeros((0, G.order), np.uint64)
    return _Job(
        G.order,
        _row_masks(space.representative.table),
        gens,
        min(LOW_BITS, len(space.basis)),
        space.w_min,
        space.w_max,
        space.target_excess,
    )


def _low_table(job: _Job) -> tuple[np.ndarray, np.ndarray]:
    rows = np.zeros((1, job.n), dtype=np.uint64)
    weight = np.zeros(1, dtype=np.int64)
    for j in range(job.low):
        rows = np.concatenate([rows, rows ^ job.gen_rows[j]])
        weight = np.concatenate([weight, weight + 1])
    return rows, weight


def _run_partition(args: tuple[_Job, int]) -> list[tuple[int, tuple[int, ...], int]]:
    job, prefix = args
    low_rows, low_w = _low_table(job)
    base = job.rep_rows.copy()
    pw = 0
    for j in range(job.gen_rows.shape[0] - job.low):
        if prefix >> j & 1:
            base ^= job.gen_rows[job.low + j]
            pw += 1
    keep = (low_w + pw >= job.w_min) & (low_w + pw <= job.w_max)
    rows = low_rows[keep] ^ base[None, :]
    sums = job.n - 2 * np.bitwise_count(rows).astype(np.int64)
    re = np.abs(sums[:, 1:]).sum(axis=1)
    good = np.flatnonzero(re == job.target)
    low_masks = np.flatnonzero(keep)[good]
    out = []
    for lm, g in zip(low_masks.tolist(), good.tolist()):
        out.append(((prefix << job.low) | lm, tuple(sums[g].tolist()), int(re[g])))
    return out


def iter_partitions(space: SearchSpace, workers: int = 1, start_partition: int = 0) -> Iterator[tuple[int, list[Hit]]]:
    """Hits grouped by partition, partitions in increasing order."""
    job = _prepare(space)
    prefixes = list(range(start_partition, space.partitions))
    args = ((job, p) for p in prefixes)
    if workers <= 1:
        for p in prefixes:
            yield p, [Hit(m, space.subset(m), s, r) for m, s, r in _run_partition((job, p))]
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for p, part in zip(prefixes, pool.map(_run_partition, args)):
            yield p, [Hit(m, space.subset(m), s, r) for m, s, r in part]


def enumerate_quasiorthogonal(space: SearchSpace, workers: int = 1, start_partition: int = 0) -> Iterator[Hit]:
    """Quasi-orthogonal cocycles ``representative * prod_{k in S} d_k`` in mask order.

    Partitions below ``start_partition`` are skipped (resume support); the
    output does not depend on ``workers``.
    """
    for _, part in iter_partitions(space, workers, start_partition):
        yield from part


def goba_search(s: Sequence[int], z: Sequence[int], workers: int = 1) -> Iterator[BinaryArray]:
    """Normalized GOBAs of type ``z``: every ``phi`` with ``f_z d phi`` quasi-orthogonal.

    Each hit ``f_z prod d_k`` gives ``prod delta_k``; multiplying by the
    homomorphisms ``G -> {+-1}`` gives every other array with the same
    coboundary.
    """
    from .arrays import goba_applicable

    s, z = tuple(s), tuple(z)
    if not any(z):
        raise ValueError("z = 0 has no expansion; test the OBA predicate instead")
    if not goba_applicable(s):
        raise ValueError(f"GOBA search needs s_1/2, s_2, ..., s_r odd; got s = {s}")
    space = fz_space(s, z)
    G = space.group
    homs = cocycles.coboundary_basis(G).homomorphisms()
    for hit in enumerate_quasiorthogonal(space, workers):
        phi = cocycles.delta_product(G, hit.subset)
        for chi in homs:
            yield BinaryArray(s, phi * chi)


# ---------------------------------------------------------------------------
# Z_{4t+2}: generalized coboundary matrices and path counting


@dataclass(frozen=True)
class PathCensus:
    r: int
    C: int
    I: int
    paths: tuple[tuple[int, ...], ...]
    cycles: int


def _edges(labels: Iterable[int], n: int, r: int) -> list[tuple[int, int]]:
    return [(i, (i - r) % n + 1) for i in labels]


def path_census(labels: Iterable[int], t: int, r: int) -> PathCensus:
    """Maximal ``r``-paths of ``{Mbar_i : i in labels}``.

    Row ``r`` of ``Mbar_i`` is -1 exactly in columns ``i`` and ``[i - r + 1]``;
    joining those two columns for every ``i`` gives a graph of maximum degree 2
    whose path components are the maximal ``r``-paths.  ``I`` counts path
    endpoints in the -1 block ``{4t+4-r, ..., 4t+2}`` of row ``r`` of ``N``.
    """
    n = 4 * t + 2
    labels = sorted(set(labels))
    if any(not 2 <= i <= n for i in labels) or not 2 <= r <= n:
        raise ValueError(f"labels must lie in 2..{n} and r in 2..{n}")
    adj: dict[int, list[int]] = {}
    for a, b in _edges(labels, n, r):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen: set[int] = set()
    paths = []
    cycles = 0
    for v in sorted(adj):
        if v in seen or len(adj[v]) != 1:
            continue
        walk = [v]
        seen.add(v)
        prev, cur = None, v
        while True:
            nbrs = [u for u in adj[cur] if u != prev]
            if not nbrs:
                break
            prev, cur = cur, nbrs[0]
            walk.append(cur)
            seen.add(cur)
        paths.append(tuple(walk))
    for v in adj:
        if v not in seen:
            cycles += 1
            stack = [v]
            while stack:
                u = stack.pop()
                if u in seen:
                    continue
                seen.add(u)
                stack.extend(adj[u])
    block = set(range(4 * t + 4 - r, n + 1))
    ends = {p[0] for p in paths} | {p[-1] for p in paths}
    return PathCensus(r, len(paths), len(ends & block), tuple(paths), cycles)


def _rot(mask: int, k: int, n: int) -> int:
    """Column ``c`` of the result is column ``[c + k]`` of ``mask`` (bit ``c-1`` is label ``c``)."""
    k %= n
    full = (1 << n) - 1
    return ((mask >> k) | (mask << (n - k))) & full


def fast_quasiorthogonal_test(labels: Iterable[int], t: int) -> bool:
    """Decide quasi-orthogonality of ``gamma * prod_{i in labels} d_i`` over ``Z_{4t+2}``.

    Uses only the path counts of rows ``2 <= r <= 2t+1``; labels are 1-based.
    """
    labels = set(labels)
    w = len(labels)
    if not t <= w <= 3 * t + 1:
        return False
    n = 4 * t + 2
    S = 0
    for i in labels:
        S |= 1 << (i - 1)
    for r in range(2, 2 * t + 2):
        # a column is an endpoint when exactly one of its two possible edges is present
        ends = S ^ _rot(S, r - 1, n)
        C = bin(ends).count("1") // 2
        block = ((1 << (r - 1)) - 1) << (n - r + 1)
        I = bin(ends & block).count("1")
        if r % 2 == 0:
            if C != I + t + 1 - r // 2:
                return False
        elif C not in (I + t + (1 - r) // 2, I + t + (3 - r) // 2):
            return False
    return True


def brute_force_quasiorthogonal(labels: Iterable[int], t: int) -> bool:
    """Oracle: build the cocycle and compare its row excess with the bound."""
    n = 4 * t + 2
    c = cocycles.from_subset(cocycles.gamma(n), [i - 1 for i in labels])
    return is_quasi_orthogonal(c)


def brute_force_batch(masks: np.ndarray, t: int) -> np.ndarray:
    """Vectorized oracle over rows of a 0/1 matrix; column ``j`` selects label ``j + 2`` (labels ``2 .. 4t+2``)."""
    n = 4 * t + 2
    G = groups.cyclic(n)
    masks = np.asarray(masks, dtype=np.int64)
    if masks.ndim != 2 or masks.shape[1] != n - 1:
        raise ValueError(f"masks must have {n - 1} columns")
    D = np.stack([(cocycles.elementary_coboundary(G, k).table < 0).ravel() for k in range(1, n)]).astype(np.int64)
    base = (cocycles.gamma(n).table < 0).ravel().astype(np.int64)
    bits = (masks @ D + base[None, :]) % 2
    sums = n - 2 * bits.reshape(-1, n, n).sum(axis=2)
    re = np.abs(sums[:, 1:]).sum(axis=1)
    # gamma times coboundaries is never a coboundary, so the bound is 4t
    return re == 4 * t


def minus_count(labels: Iterable[int], t: int, r: int) -> int:
    """-1 entries in row ``r`` of ``prod Mbar_i``, counted directly."""
    n = 4 * t + 2
    G = groups.cyclic(n)
    row = np.ones(n, dtype=np.int64)
    for i in labels:
        M = cocycles.elementary_coboundary(G, i - 1).table.astype(np.int64)
        Mbar = M.copy()
        Mbar[i - 1] *= -1
        row *= Mbar[r - 1]
    return int((row < 0).sum())


def row_sum_symmetry(c: Cocycle) -> bool:
    """Row ``i`` and row ``4t+4-i`` agree up to sign, and row ``2t+2`` sums to 0."""
    n = c.order
    t = (n - 2) // 4
    sums = c.table.astype(np.int64).sum(axis=1)
    mirror = all(abs(sums[i - 1]) == abs(sums[4 * t + 4 - i - 1]) for i in range(2, n + 1))
    return mirror and sums[2 * t + 1] == 0


def gobs_from_cyclic(t: int, workers: int = 1) -> list[np.ndarray]:
    """Normalized GOBSs of length ``4t+2``, read off the quasi-orthogonal cocycles over ``Z_{4t+2}``."""
    space = cyclic_space(t)
    G = space.group
    homs = cocycles.coboundary_basis(G).homomorphisms()
    out = []
    for hit in enumerate_quasiorthogonal(space, workers):
        phi = cocycles.delta_product(G, hit.subset)
        out += [phi * chi for chi in homs]
    return out


def transport_perm(src: groups.AbelianGroup, dst: groups.AbelianGroup) -> list[int]:
    """Isomorphism ``Z_{s_1} x ... -> Z_{d_1} x ...`` for coprime-factor regroupings (CRT).

    Supported when ``dst`` is cyclic of order ``|src|`` and the source sizes
    are pairwise coprime, or the reverse.
    """
    if src.order != dst.order:
        raise ValueError("groups of different order")
    if len(dst.sizes) == 1 and _coprime(src.sizes):
        n = dst.order
        coeffs = [(n // s) * pow(n // s, -1, s) for s in src.sizes]
        return [sum(c * x for c, x in zip(coeffs, src.label(g))) % n for g in src.elements()]
    if len(src.sizes) == 1 and _coprime(dst.sizes):
        return [dst.to_index([g % s for s in dst.sizes]) for g in src.elements()]
    raise ValueError("only cyclic <-> coprime-product transports are supported")


def _coprime(sizes: Sequence[int]) -> bool:
    return all(math.gcd(a, b) == 1 for i, a in enumerate(sizes) for b in sizes[i + 1:])
