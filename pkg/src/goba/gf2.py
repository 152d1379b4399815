"""GF(2) elimination on Python int bitsets."""

from __future__ import annotations


class Echelon:
    """Incrementally built row echelon form that remembers how each row was made.

    Every stored row carries a tag mask: bit ``j`` set means the ``j``-th vector
    passed to :meth:`add` takes part in the combination.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}
        self.count = 0

    def reduce(self, vec: int) -> tuple[int, int]:
        """Return ``(residual, tags)`` with ``vec = residual ^ combination(tags)``."""
        tags = 0
        while vec:
            p = vec.bit_length() - 1
            if p not in self._pivots:
                break
            row, rtags = self._pivots[p]
            vec ^= row
            tags ^= rtags
        return vec, tags

    def add(self, vec: int) -> tuple[bool, int]:
        """Insert ``vec``; returns ``(independent, relation_tags)``.

        When ``vec`` is dependent, ``relation_tags`` is the set of inserted
        vectors (including this one) that sum to zero.
        """
        j = self.count
        self.count += 1
        residual, tags = self.reduce(vec)
        tags ^= 1 << j
        if residual == 0:
            return False, tags
        self._pivots[residual.bit_length() - 1] = (residual, tags)
        return True, tags

    @property
    def rank(self) -> int:
        return len(self._pivots)


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def span(vectors) -> list[int]:
    """All ``2^rank`` elements of the span, without repeats."""
    basis: list[int] = []
    e = Echelon()
    for v in vectors:
        if e.add(v)[0]:
            basis.append(v)
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
