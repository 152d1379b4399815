"""Row sums, row excess, (quasi-)orthogonality, Grammians, normality, determinants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cocycles import Cocycle, decompose_coboundary


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class ExcessProfile:
    row_sums: tuple[int, ...]
    row_excess: int
    classes: dict[int, tuple[int, ...]] = field(repr=False)

    def X(self, m: int) -> tuple[int, ...]:
        """Elements whose row sums to ``m``."""
        return self.classes.get(m, ())

    def to_json(self) -> dict:
        return {
            "row_sums": {str(g): s for g, s in enumerate(self.row_sums)},
            "re": self.row_excess,
            "X": {str(m): list(v) for m, v in sorted(self.classes.items())},
        }


def excess_profile(M) -> ExcessProfile:
    M = _matrix(M)
    sums = M.astype(np.int64).sum(axis=1)
    classes: dict[int, list[int]] = {}
    for g, s in enumerate(sums.tolist()):
        classes.setdefault(s, []).append(g)
    return ExcessProfile(
        tuple(sums.tolist()),
        int(np.abs(sums[1:]).sum()),
        {m: tuple(v) for m, v in classes.items()},
    )


def row_excess(M) -> int:
    M = _matrix(M)
    return int(np.abs(M[1:].astype(np.int64).sum(axis=1)).sum())


def column_excess(M) -> int:
    return row_excess(_matrix(M).T)


def _matrix(M) -> np.ndarray:
    return M.table if isinstance(M, Cocycle) else np.asarray(M)


def is_orthogonal(c: Cocycle) -> bool:
    return row_excess(c) == 0


def _quarter(c: Cocycle) -> int:
    n = c.order
    if n <= 2 or n % 4 != 2:
        raise ValueError(f"quasi-orthogonality needs |G| = 4t+2 > 2, got {n}")
    return (n - 2) // 4


def is_quasi_orthogonal(c: Cocycle, coboundary: bool | None = None) -> bool:
    """Least possible row excess: ``4t`` off ``B^2``, ``8t+2`` on it.

    ``coboundary`` may be supplied when membership in ``B^2`` is already known.
    """
    t = _quarter(c)
    if coboundary is None:
        coboundary = decompose_coboundary(c) is not None
    return row_excess(c) == (8 * t + 2 if coboundary else 4 * t)


def x_census_quasi_orthogonal(c: Cocycle, coboundary: bool | None = None) -> bool:
    """The same predicate phrased through the sizes of ``X_0`` and ``X_2 u X_-2``."""
    t = _quarter(c)
    if coboundary is None:
        coboundary = decompose_coboundary(c) is not None
    p = excess_profile(c)
    pm2 = len(p.X(2)) + len(p.X(-2))
    if coboundary:
        return pm2 == 4 * t + 1
    return len(p.X(0)) == 2 * t + 1 and pm2 == 2 * t


def grammians(c: Cocycle) -> tuple[np.ndarray, np.ndarray]:
    """``(M M^T, M^T M)``, checked against the closed forms in group terms."""
    G = c.group
    M = c.table.astype(np.int64)
    direct = M @ M.T
    direct_t = M.T @ M
    T = G.cayley()
    inv = G.inverse
    idx = np.arange(G.order)
    sums_row = M.sum(axis=1)
    sums_col = M.sum(axis=0)
    # g_i g_j^-1 and g_i^-1 g_j
    q = T[idx[:, None], inv[None, :]]
    p = T[inv[:, None], idx[None, :]]
    closed = M[q, idx[None, :]] * sums_row[q]
    closed_t = M[idx[:, None], p] * sums_col[p]
    if not (np.array_equal(direct, closed) and np.array_equal(direct_t, closed_t)):
        raise ConsistencyError("Grammian closed forms disagree with direct products")
    return direct, direct_t


def is_normal(c: Cocycle) -> bool:
    gr, gr_t = grammians(c)
    return bool(np.array_equal(gr, gr_t))


MAX_DET_ORDER = 32


def abs_determinant(M) -> int:
    """Exact ``|det M|`` by Bareiss fraction-free elimination."""
    M = _matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("determinant needs a square matrix")
    if n > MAX_DET_ORDER:
        raise ValueError(f"order {n} exceeds the determinant limit {MAX_DET_ORDER}")
    a = [[int(v) for v in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return abs(sign * a[n - 1][n - 1]) if n else 1


def ehlich_wojtas_bound(t: int) -> int:
    """Maximal ``|det|`` of a +-1 matrix of order ``4t+2``."""
    return 2 * (4 * t + 1) * (4 * t) ** (2 * t)
