"""Negaperiodic Golay pairs: predicate, exhaustive enumeration and equivalence classes.

Sequences of length ``n`` are coded as integers: bit ``i`` is set when entry
``i`` is -1.  A pair ``(a, b)`` is coded as ``(a << n) | b``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .arrays import is_gobs, negaperiodic, rl_decode, rl_encode, to_pm

MAX_ALL_LENGTH = 20
MAX_GOBS_LENGTH = 22
MAX_ORBIT_STATES = 10**7
CHUNK = 1 << 16

# reference census keyed by k (length 2k): all pairs, GOBS pairs, and their class counts
KNOWN_CENSUS = {
    3: (576, 576, 1, 1),
    5: (11200, 4800, 3, 2),
    7: (90944, 18816, 5, 1),
    9: (1041984, 62208, 20, 2),
}

# reference NGPs of length 2k (run-length form), both members GOBSs
KNOWN_PAIRS = {
    3: ("1^2,4", "2,1,3"),
    5: ("2,1^3,5", "3,1,2,1,3"),
    7: ("2,1,5,1^3,3", "2,1,4,2,1^2,3"),
    9: ("3,1,2,1^3,3,1,5", "2,1,2,3,2,1^3,5"),
    13: ("3,3,2,2,1,2,1,2,1^4,6", "3,3,1,3,1,2,1,2,1^4,6"),
    15: ("3,2,4,1^2,2,2,1,2,1^5,7", "3,2,3,2,1,2,2,1,2,1^5,7"),
}


def known_pair(k: int) -> "NGPair":
    a, b = KNOWN_PAIRS[k]
    return NGPair(rl_decode(a, 2 * k), rl_decode(b, 2 * k))


class ResourceGuardError(RuntimeError):
    """A request exceeds the exhaustive-computation limits."""


@dataclass(frozen=True, eq=False)
class NGPair:
    phi1: np.ndarray
    phi2: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.phi1, dtype=np.int8)
        b = np.asarray(self.phi2, dtype=np.int8)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("NGP members must be sequences of equal length")
        if a.size % 2 or a.size == 0:
            raise ValueError(f"NGP members need even length, got {a.size}")
        if not (np.all(np.abs(a) == 1) and np.all(np.abs(b) == 1)):
            raise ValueError("NGP entries must be +-1")
        object.__setattr__(self, "phi1", a)
        object.__setattr__(self, "phi2", b)

    @property
    def length(self) -> int:
        return self.phi1.size

    @classmethod
    def from_code(cls, code: int, n: int) -> "NGPair":
        return cls(decode(code >> n, n), decode(code & ((1 << n) - 1), n))

    def code(self) -> int:
        n = self.length
        return (encode(self.phi1) << n) | encode(self.phi2)

    def to_json(self) -> dict:
        out = {"length": self.length, "phi1": to_pm(self.phi1), "phi2": to_pm(self.phi2)}
        for key, seq in (("phi1_rl", self.phi1), ("phi2_rl", self.phi2)):
            out[key] = rl_encode(seq) if seq[0] == 1 else None
        return out


def encode(seq) -> int:
    code = 0
    for i, v in enumerate(seq):
        if v < 0:
            code |= 1 << i
    return code


def decode(code: int, n: int) -> np.ndarray:
    return np.array([-1 if code >> i & 1 else 1 for i in range(n)], dtype=np.int8)


def is_ngp(pair: NGPair) -> bool:
    """``R_{phi1'}(w) + R_{phi2'}(w) = 0`` for ``1 <= w <= 2t - 1``."""
    s = negaperiodic(pair.phi1) + negaperiodic(pair.phi2)
    return bool(np.all(s[1:] == 0))


def is_ngp_expanded(pair: NGPair) -> bool:
    """The same law on the expansions: every ``1 <= w <= 4t - 1`` except ``w = 2t``."""
    from . import groups
    from .arrays import autocorrelations

    n = pair.length
    G = groups.cyclic(2 * n)
    tot = autocorrelations(np.concatenate([pair.phi1, -pair.phi1]), G) + autocorrelations(
        np.concatenate([pair.phi2, -pair.phi2]), G
    )
    return all(tot[w] == 0 for w in range(1, 2 * n) if w != n)


# ---------------------------------------------------------------------------
# enumeration


def _signs(codes: np.ndarray, n: int) -> np.ndarray:
    bits = (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


def _nega_block(X: np.ndarray, shifts: Sequence[int]) -> np.ndarray:
    n = X.shape[1]
    Xi = X.astype(np.int16)
    out = np.empty((X.shape[0], len(shifts)), dtype=np.int16)
    for c, w in enumerate(shifts):
        sh = np.roll(Xi, -w, axis=1)
        sh[:, n - w:] *= -1
        out[:, c] = (Xi * sh).sum(axis=1)
    return out


def _gobs_mask(N: np.ndarray, n: int, shifts: Sequence[int]) -> np.ndarray:
    t_odd = (n // 2) % 2 == 1
    want = np.array([2 if (w % 2 == 0) == t_odd else 0 for w in shifts], dtype=np.int16)
    return np.all(np.abs(N) == want[None, :], axis=1)


def sequence_keys(n: int, source: str = "all") -> tuple[np.ndarray, np.ndarray]:
    """Codes of all length-``n`` sequences (GOBSs only for ``source='gobs'``) and
    their negaperiodic autocorrelations at shifts ``1 .. n/2 - 1``.

    Those shifts determine the rest: ``N(n - w) = -N(w)`` and ``N(n/2) = 0``.
    """
    t = n // 2
    shifts = list(range(1, t))
    all_shifts = list(range(1, n))
    codes_out, keys_out = [], []
    for start in range(0, 1 << n, CHUNK):
        codes = np.arange(start, min(start + CHUNK, 1 << n), dtype=np.int64)
        X = _signs(codes, n)
        if source == "gobs":
            N = _nega_block(X, all_shifts)
            keep = _gobs_mask(N, n, all_shifts)
            codes, N = codes[keep], N[keep][:, : t - 1]
        else:
            N = _nega_block(X, shifts)
        codes_out.append(codes)
        keys_out.append(N)
    return np.concatenate(codes_out), np.concatenate(keys_out).reshape(-1, t - 1)


@dataclass(frozen=True, eq=False)
class Enumeration:
    k: int
    source: str
    pairs: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return 2 * self.k

    @property
    def count(self) -> int:
        return int(self.pairs.size)

    def __iter__(self) -> Iterator[NGPair]:
        for code in self.pairs.tolist():
            yield NGPair.from_code(code, self.length)


def _check_guard(k: int, source: str) -> None:
    if source not in ("all", "gobs"):
        raise ValueError(f"source must be 'all' or 'gobs', got {source!r}")
    if k < 2:
        raise ValueError("NGP enumeration needs k >= 2")
    limit = MAX_ALL_LENGTH if source == "all" else MAX_GOBS_LENGTH
    if 2 * k > limit:
        raise ResourceGuardError(
            f"exhaustive {source} enumeration is limited to length {limit} (k <= {limit // 2}); "
            "verify individual pairs instead"
        )


def enumerate_ngps(k: int, source: str = "all") -> Enumeration:
    """All ordered NGPs of length ``2k`` by matching opposite autocorrelation vectors."""
    _check_guard(k, source)
    n = 2 * k
    codes, keys = sequence_keys(n, source)
    if keys.shape[1] == 0:
        pairs = (codes[:, None] << n | codes[None, :]).ravel()
        return Enumeration(k, source, np.sort(pairs))
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.ravel()
    lookup = {row.tobytes(): i for i, row in enumerate(uniq)}
    order = np.argsort(inv, kind="stable")
    bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
    chunks = []
    for i, row in enumerate(uniq):
        j = lookup.get((-row).tobytes())
        if j is None:
            continue
        left = codes[order[bounds[i]:bounds[i + 1]]]
        right = codes[order[bounds[j]:bounds[j + 1]]]
        chunks.append((left[:, None] << n | right[None, :]).ravel())
    pairs = np.sort(np.concatenate(chunks)) if chunks else np.zeros(0, dtype=np.int64)
    return Enumeration(k, source, pairs)


def enumerate_ngps_direct(k: int, source: str = "all") -> list[int]:
    """Naive double loop over all ordered pairs; for cross-checking small ``k``."""
    n = 2 * k
    seqs = [decode(c, n) for c in range(1 << n)]
    if source == "gobs":
        seqs = [s for s in seqs if is_gobs(s)]
    N = [negaperiodic(s) for s in seqs]
    out = []
    for (a, na), (b, nb) in itertools.product(zip(seqs, N), repeat=2):
        if np.all((na + nb)[1:] == 0):
            out.append((encode(a) << n) | encode(b))
    return sorted(out)


# ---------------------------------------------------------------------------
# elementary operations


def _seq_tables(n: int) -> dict[str, np.ndarray]:
    """Permutations of the ``2^n`` sequence codes induced by single-sequence moves."""
    codes = np.arange(1 << n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1
    weights = np.int64(1) << np.arange(n, dtype=np.int64)

    def pack(B: np.ndarray) -> np.ndarray:
        return (B * weights).sum(axis=1)

    def from_expansion(idx: np.ndarray) -> np.ndarray:
        # entry i of the new sequence is entry idx[i] of the expansion (phi, -phi)
        return pack(bits[:, idx % n] ^ (idx >= n).astype(np.int64))

    out = {
        "neg": codes ^ ((1 << n) - 1),
        "shift": from_expansion((np.arange(n) - 1) % (2 * n)),
        "rev": pack(bits[:, ::-1]),
        "alt": codes ^ sum(1 << i for i in range(1, n, 2)),
    }
    for m in units(2 * n):
        if m != 1:
            out[f"dec{m}"] = from_expansion((m * np.arange(n)) % (2 * n))
    return out


def units(m: int) -> list[int]:
    return [u for u in range(1, m) if math.gcd(u, m) == 1]


Move = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]


def _on(which: str, table: np.ndarray) -> Move:
    if which == "one":
        return lambda a, b: (table[a], b)
    return lambda a, b: (table[a], table[b])


def _moves(name: str, tables: dict[str, np.ndarray], n: int) -> list[Move]:
    """Generators of one named elementary operation on pairs."""
    if name == "swap":
        return [lambda a, b: (b, a)]
    op, _, which = name.partition("-")
    if which not in ("one", "both"):
        raise ValueError(f"unknown operation {name!r}")
    base = {"negate": "neg", "reverse": "rev", "shift": "shift", "alternate": "alt"}.get(op)
    if base is not None:
        return [_on(which, tables[base])]
    if op == "decimate":
        return [_on(which, tables[f"dec{m}"]) for m in units(2 * n) if m != 1]
    raise ValueError(f"unknown operation {name!r}")


OPERATIONS = (
    "swap",
    "negate-one",
    "negate-both",
    "reverse-one",
    "reverse-both",
    "shift-one",
    "shift-both",
    "alternate-both",
    "decimate-both",
)

# Reproduces the reference class counts (see calibrate()).
DEFAULT_OPS = ("swap", "negate-one", "reverse-one", "shift-one", "decimate-both")

OP_SETS = {
    "default": DEFAULT_OPS,
    "alternate": ("swap", "negate-one", "reverse-both", "shift-one", "alternate-both"),
}


def candidate_family() -> list[tuple[str, ...]]:
    """Every five-operation set containing ``swap``, drawn from :data:`OPERATIONS`."""
    rest = [op for op in OPERATIONS if op != "swap"]
    return [("swap", *c) for c in itertools.combinations(rest, 4)]


@dataclass(frozen=True, eq=False)
class Orbits:
    count: int
    labels: np.ndarray = field(repr=False)
    representatives: tuple[int, ...]
    sizes: tuple[int, ...]


class NotInvariant(ValueError):
    """An operation maps some pair outside the set being classified."""


def classify_ngps(pairs: np.ndarray | Enumeration, ops: Sequence[str] = DEFAULT_OPS, n: int | None = None) -> Orbits:
    """Orbits of the group generated by ``ops``: components of its Schreier graph."""
    if isinstance(pairs, Enumeration):
        n = pairs.length
        pairs = pairs.pairs
    if n is None:
        raise ValueError("sequence length n is required for raw pair codes")
    pairs = np.asarray(pairs, dtype=np.int64)
    N = pairs.size
    if N > MAX_ORBIT_STATES:
        raise ResourceGuardError(f"{N} states exceed the orbit limit {MAX_ORBIT_STATES}")
    if N == 0:
        return Orbits(0, np.zeros(0, dtype=np.int64), (), ())
    if np.any(pairs[1:] <= pairs[:-1]):
        pairs = np.unique(pairs)
    tables = _seq_tables(n)
    mask = (1 << n) - 1
    a, b = pairs >> n, pairs & mask
    src, dst = [], []
    for name in ops:
        for move in _moves(name, tables, n):
            na, nb = move(a, b)
            img = (na << n) | nb
            j = np.searchsorted(pairs, img)
            j[j == N] = 0
            if not np.array_equal(pairs[j], img):
                raise NotInvariant(f"operation {name!r} does not preserve the pair set")
            src.append(np.arange(N))
            dst.append(j)
    graph = coo_matrix((np.ones(sum(len(s) for s in src)), (np.concatenate(src), np.concatenate(dst))), shape=(N, N))
    count, labels = connected_components(graph, directed=True, connection="weak")
    reps = np.full(count, -1, dtype=np.int64)
    # pairs are sorted, so the first hit per label is the orbit minimum
    first = np.unique(labels, return_index=True)[1]
    reps[labels[first]] = pairs[first]
    sizes = np.bincount(labels, minlength=count)
    order = np.argsort(reps)
    relabel = np.empty(count, dtype=np.int64)
    relabel[order] = np.arange(count)
    return Orbits(int(count), relabel[labels], tuple(reps[order].tolist()), tuple(sizes[order].tolist()))


@dataclass
class Calibration:
    ks: tuple[int, ...]
    tried: list[tuple[tuple[str, ...], dict]] = field(default_factory=list)

    @property
    def matches(self) -> list[tuple[str, ...]]:
        return [ops for ops, rec in self.tried if rec.get("match")]

    def report(self) -> str:
        lines = [f"calibration against the reference class counts for k in {list(self.ks)}"]
        want = {k: (KNOWN_CENSUS[k][2], KNOWN_CENSUS[k][3]) for k in self.ks}
        lines.append(f"  target (d, d^): {want}")
        for ops, rec in self.tried:
            tag = "MATCH" if rec.get("match") else "     "
            lines.append(f"  {tag} {','.join(ops)}: {rec.get('result') or rec.get('error')}")
        if not self.matches:
            lines.append("  no candidate set reproduces the class counts")
        return "\n".join(lines)


def calibrate(
    family: Sequence[Sequence[str]] | None = None,
    ks: Sequence[int] = (3, 5, 7, 9),
    data: dict[int, tuple[Enumeration, Enumeration]] | None = None,
) -> Calibration:
    """Classify under each candidate set, stopping a candidate at its first mismatch."""
    family = [tuple(f) for f in (family if family is not None else candidate_family())]
    ks = tuple(ks)
    if data is None:
        data = {k: (enumerate_ngps(k, "all"), enumerate_ngps(k, "gobs")) for k in ks}
    cal = Calibration(ks)
    for ops in family:
        got: dict[int, tuple[int, int]] = {}
        rec: dict = {"match": True}
        try:
            for k in ks:
                full, gobs = data[k]
                got[k] = (classify_ngps(full, ops).count, classify_ngps(gobs, ops).count)
                if got[k] != KNOWN_CENSUS[k][2:]:
                    rec["match"] = False
                    break
            rec["result"] = got
        except NotInvariant as exc:
            rec = {"match": False, "error": str(exc)}
        cal.tried.append((ops, rec))
    return cal


def census_rows(ks: Sequence[int] = (3, 5, 7, 9), ops: Sequence[str] = DEFAULT_OPS) -> list[dict]:
    rows = []
    for k in ks:
        full = enumerate_ngps(k, "all")
        gobs = enumerate_ngps(k, "gobs")
        rows.append(
            {
                "k": k,
                "n": full.count,
                "n_hat": gobs.count,
                "d": classify_ngps(full, ops).count,
                "d_hat": classify_ngps(gobs, ops).count,
            }
        )
    return rows
