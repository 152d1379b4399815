"""Binary s-arrays, type-vector expansion, periodic autocorrelation and the
predicates built on it (perfect/optimal sequences, PBA, OBA, GPBA, GOBA, GOBS).
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import groups
from .groups import AbelianGroup, Expansion


@dataclass(frozen=True, eq=False)
class BinaryArray:
    """A map ``Z_{s_1} x ... x Z_{s_r} -> {+-1}`` stored in mixed-radix order."""

    s: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        vals = np.asarray(self.values, dtype=np.int8).ravel()
        if vals.size != math.prod(self.s):
            raise ValueError(f"array of size {vals.size} does not match energy {math.prod(self.s)}")
        if not np.all(np.abs(vals) == 1):
            raise ValueError("array entries must be +-1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def sequence(cls, values: Sequence[int]) -> "BinaryArray":
        return cls((len(values),), np.asarray(values))

    @classmethod
    def from_grid(cls, grid) -> "BinaryArray":
        """From a nested list whose shape is the size vector."""
        a = np.asarray(grid)
        return cls(a.shape, a.ravel())

    @property
    def energy(self) -> int:
        return self.values.size

    @property
    def group(self) -> AbelianGroup:
        return groups.abelian(self.s)

    @property
    def normalized(self) -> bool:
        return bool(self.values[0] == 1)

    def to_str(self) -> str:
        return to_pm(self.values)

    def to_json(self) -> dict:
        return {"s": list(self.s), "values": self.values.tolist()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryArray):
            return NotImplemented
        return self.s == other.s and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.s, self.values.tobytes()))


def to_pm(values) -> str:
    return "".join("+" if v > 0 else "-" for v in values)


def from_pm(text: str) -> np.ndarray:
    text = text.strip()
    bad = [i for i, ch in enumerate(text) if ch not in "+-"]
    if bad:
        raise ValueError(f"position {bad[0]}: expected '+' or '-', got {text[bad[0]]!r}")
    return np.array([1 if ch == "+" else -1 for ch in text], dtype=np.int8)


def correlation_table(G: AbelianGroup) -> np.ndarray:
    """``T[a, x] = a + x`` for the additive group ``G``."""
    return G.cayley()


def autocorrelations(values, G: AbelianGroup) -> np.ndarray:
    """``R(x) = sum_a phi(a) phi(a + x)`` for every ``x``, as exact integers."""
    v = np.asarray(values, dtype=np.int64)
    T = G.cayley()
    return (v[:, None] * v[T]).sum(axis=0)


def autocorrelation(phi: BinaryArray, x: int) -> int:
    return int(autocorrelations(phi.values, phi.group)[x])


@dataclass(frozen=True, eq=False)
class ExpandedArray:
    base: BinaryArray
    z: tuple[int, ...]
    expansion: Expansion
    values: np.ndarray = field(repr=False)

    @property
    def E(self) -> AbelianGroup:
        return self.expansion.E

    def autocorrelations(self) -> np.ndarray:
        return autocorrelations(self.values, self.E)


def expand(phi: BinaryArray, z: Sequence[int]) -> ExpandedArray:
    """``phi'(g) = phi(a)`` if ``g`` lies in ``a + K``, else ``-phi(a)``, with ``a = g mod s``."""
    ex = groups.build_expansion(phi.s, z)
    E = ex.E
    G = phi.group
    K = set(ex.K)
    vals = np.empty(E.order, dtype=np.int8)
    for g in E.elements():
        a = ex.reduce(g)
        ai = G.to_index(a)
        # g - a, with a embedded into E by its canonical coordinates
        diff = E.to_index([gi - xi for gi, xi in zip(E.label(g), a)])
        vals[g] = phi.values[ai] if diff in K else -phi.values[ai]
    vals.setflags(write=False)
    return ExpandedArray(phi, ex.z, ex, vals)


def negaperiodic(values) -> np.ndarray:
    """Negaperiodic autocorrelations ``N(w)``, ``0 <= w < n``; ``R_{phi'}(w) = 2 N(w)``."""
    v = np.asarray(values, dtype=np.int64)
    n = v.size
    out = np.empty(n, dtype=np.int64)
    for w in range(n):
        sh = np.roll(v, -w)
        sh[n - w:] *= -1
        out[w] = int((v * sh).sum())
    return out


def derivative_bias(phi: BinaryArray) -> Fraction:
    """``max_{a != 0, b} Pr_x[phi(x + a) phi(x) = b]``; smaller is more nonlinear."""
    R = autocorrelations(phi.values, phi.group)
    v = phi.energy
    return Fraction(v + int(np.abs(R[1:]).max(initial=0)), 2 * v)


def optimal_bound(n: int) -> int:
    """Least possible ``max_{0<w<n} |R(w)|`` for a binary sequence of length ``n``."""
    return (0, 1, 2, 1)[n % 4]


@dataclass(frozen=True)
class Classification:
    """Predicate record; ``None`` marks a predicate that does not apply."""

    perfect: bool | None
    optimal: bool | None
    PBA: bool
    OBA: bool
    GPBA: bool | None
    GOBA: bool | None
    GOBS: bool | None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != "notes"} | {"notes": list(self.notes)}


def goba_applicable(s: Sequence[int]) -> bool:
    """``|G| = 2 mod 4`` with ``s_1 / 2`` and ``s_2, ..., s_r`` odd."""
    n = math.prod(s)
    return n > 2 and n % 4 == 2 and s[0] % 2 == 0 and (s[0] // 2) % 2 == 1 and all(v % 2 == 1 for v in s[1:])


def is_goba(phi: BinaryArray, z: Sequence[int], R: np.ndarray | None = None, ex: Expansion | None = None) -> bool:
    z = tuple(z)
    if not any(z):
        raise ValueError("GOBA needs a non-zero type vector; use the OBA predicate for z = 0")
    if R is None or ex is None:
        e = expand(phi, z)
        R, ex = e.autocorrelations(), e.expansion
    H = ex.H
    h2 = 2 * len(H)
    mask = np.ones(ex.E.order, dtype=bool)
    mask[list(H)] = False
    outside = R[mask]
    if not np.all((outside == 0) | (np.abs(outside) == h2)):
        return False
    if z[0] == 1:
        return int((R == 0).sum()) == ex.E.order // 2
    return True


def is_gobs(values) -> bool:
    """``|R_{phi'}(w)|`` is 0 or 4 by parity of ``w`` for ``0 < w < 2t``."""
    v = np.asarray(values)
    n = v.size
    if n < 4 or n % 2:
        raise ValueError("GOBS needs an even length >= 4")
    R = 2 * np.abs(negaperiodic(v)[1:])
    w = np.arange(1, n)
    t_odd = (n // 2) % 2 == 1
    want = np.where((w % 2 == 0) == t_odd, 4, 0)
    return bool(np.array_equal(R, want))


def classify(phi: BinaryArray, z: Sequence[int] | None = None) -> Classification:
    G = phi.group
    R = autocorrelations(phi.values, G)
    off = np.abs(R[1:])
    n = phi.energy
    notes: list[str] = []
    seq = len(phi.s) == 1
    perfect = bool(np.all(off == 0)) if seq else None
    optimal = bool(off.max(initial=0) == optimal_bound(n)) if seq else None
    pba = bool(np.all(off == 0))
    oba = bool(np.all(off == 2))
    gpba = goba = gobs = None
    if z is not None and any(z):
        z = tuple(z)
        e = expand(phi, z)
        Rp = e.autocorrelations()
        mask = np.ones(e.E.order, dtype=bool)
        mask[list(e.expansion.H)] = False
        gpba = bool(np.all(Rp[mask] == 0))
        if goba_applicable(phi.s):
            goba = is_goba(phi, z, Rp, e.expansion)
            if z[0] == 0:
                notes.append("z_1 = 0: zero-count condition (ii) is vacuous")
        else:
            notes.append("GOBA not applicable: needs |G| = 2 mod 4 with s_1/2, s_2, ..., s_r odd")
        if seq and z == (1,) and n >= 4 and n % 2 == 0:
            gobs = is_gobs(phi.values)
    return Classification(perfect, optimal, pba, oba, gpba, goba, gobs, tuple(notes))


# Run-length strings.  A token is either an integer ``i`` (a run of ``i``
# equal entries) or ``1^j`` (``j`` alternating entries).  The first entry is
# +1 and the entry after every token is the negation of the last one emitted.

_TOKEN = re.compile(r"^(?:1\^(\d+)|(\d+))$")


def rl_decode(text: str, length: int | None = None) -> np.ndarray:
    out: list[int] = []
    sign = 1
    for pos, tok in enumerate(t.strip() for t in text.split(",")):
        m = _TOKEN.match(tok)
        if not m or int(m.group(1) or m.group(2)) < 1:
            raise ValueError(f"token {pos + 1}: bad run-length token {tok!r}")
        if m.group(1):
            for _ in range(int(m.group(1))):
                out.append(sign)
                sign = -sign
        else:
            out.extend([sign] * int(m.group(2)))
            sign = -sign
    if length is not None and len(out) != length:
        raise ValueError(f"run-length string {text!r} has length {len(out)}, expected {length}")
    return np.array(out, dtype=np.int8)


def rl_encode(values) -> str:
    """Canonical run-length string; maximal alternating stretches of length >= 2 use ``1^j``."""
    v = [int(x) for x in values]
    if not v or v[0] != 1:
        raise ValueError("run-length form needs a sequence starting with +1")
    runs = []
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[j + 1] == v[i]:
            j += 1
        runs.append(j - i + 1)
        i = j + 1
    tokens: list[str] = []
    i = 0
    while i < len(runs):
        if runs[i] == 1:
            j = i
            while j + 1 < len(runs) and runs[j + 1] == 1:
                j += 1
            count = j - i + 1
            tokens.append("1" if count == 1 else f"1^{count}")
            i = j + 1
        else:
            tokens.append(str(runs[i]))
            i += 1
    return ",".join(tokens)


def parse_sequence(text: str, length: int | None = None) -> np.ndarray:
    """Accept ``+-`` strings, JSON integer arrays or run-length strings."""
    text = text.strip()
    if text.startswith("["):
        vals = np.array(json.loads(text), dtype=np.int8)
        if not np.all(np.abs(vals) == 1):
            raise ValueError("JSON sequence entries must be +-1")
    elif set(text) <= {"+", "-"}:
        vals = from_pm(text)
    else:
        return rl_decode(text, length)
    if length is not None and vals.size != length:
        raise ValueError(f"sequence has length {vals.size}, expected {length}")
    return vals
