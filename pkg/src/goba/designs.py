"""Design certificates: relative (quasi-)difference sets, almost difference sets,
Menon difference sets, and the constructions that produce them from arrays,
cocycles and negaperiodic Golay pairs.

Intersection numbers always use left translates ``xR = {x r : r in R}``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import cocycles, groups
from .arrays import BinaryArray, expand
from .cocycles import Cocycle
from .groups import Group
from .ngp import NGPair, is_ngp

KINDS = (
    "relative-difference-set",
    "relative-quasi-difference-set",
    "almost-difference-set",
    "menon-difference-set",
)


@dataclass(frozen=True)
class DesignCertificate:
    kind: str
    group: Group
    subset: tuple[int, ...]
    forbidden: tuple[int, ...] | None = None
    params: tuple[int, ...] = ()
    census: dict[int, int] = field(default_factory=dict, repr=False)
    S: tuple[int, ...] | None = None
    extremal: bool | None = None
    verified: bool | None = None
    reason: str = ""
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "group": {"name": self.group.name, "spec": self.group.spec, "order": self.group.order},
            "subset": list(self.subset),
            "forbidden": None if self.forbidden is None else list(self.forbidden),
            "params": list(self.params),
            "census": {str(x): c for x, c in sorted(self.census.items())},
            "S": None if self.S is None else list(self.S),
            "extremal": self.extremal,
            "verified": self.verified,
            "reason": self.reason,
            "notes": list(self.notes),
        }


def intersection_census(G: Group, R: Sequence[int]) -> np.ndarray:
    """``|R cap xR|`` for every ``x`` in ``G``."""
    R = np.asarray(sorted(set(R)), dtype=np.int64)
    member = np.zeros(G.order, dtype=bool)
    member[R] = True
    if R.size == 0:
        return np.zeros(G.order, dtype=np.int64)
    return member[G.cayley()[:, R]].sum(axis=1).astype(np.int64)


def verify_design(cert: DesignCertificate) -> DesignCertificate:
    """Recompute the census from scratch and set ``verified`` (with a reason on failure)."""
    if cert.kind not in KINDS:
        raise ValueError(f"unknown design kind {cert.kind!r}")
    G = cert.group
    R = tuple(sorted(set(cert.subset)))
    if len(R) != len(cert.subset) or any(not 0 <= r < G.order for r in R):
        return dataclasses.replace(cert, verified=False, reason="subset has repeated or out-of-range elements")
    counts = intersection_census(G, R)
    check = {
        "relative-difference-set": _check_rds,
        "relative-quasi-difference-set": _check_rqds,
        "almost-difference-set": _check_ads,
        "menon-difference-set": _check_menon,
    }[cert.kind]
    return check(dataclasses.replace(cert, subset=R), counts)


def _forbidden_ok(G: Group, N: tuple[int, ...] | None, order: int | None) -> str:
    if N is None:
        return "forbidden subgroup missing"
    if not G.is_subgroup(N) or not G.is_normal(N):
        return "forbidden set is not a normal subgroup"
    if order is not None and len(N) != order:
        return f"forbidden subgroup has order {len(N)}, expected {order}"
    return ""


def _coset_hits(G: Group, R: Sequence[int], N: Sequence[int]) -> dict[tuple[int, ...], int]:
    hits: dict[tuple[int, ...], int] = {}
    for r in R:
        c = G.coset(r, N)
        hits[c] = hits.get(c, 0) + 1
    return hits


def _fail(cert: DesignCertificate, census: dict[int, int], reason: str, **kw) -> DesignCertificate:
    return dataclasses.replace(cert, census=census, verified=False, reason=reason, **kw)


def _check_rds(cert: DesignCertificate, counts: np.ndarray) -> DesignCertificate:
    G, R, N = cert.group, cert.subset, cert.forbidden
    v, m, k, lam = cert.params
    census = {x: int(counts[x]) for x in G.elements() if x not in set(N or ())}
    bad = _forbidden_ok(G, N, m)
    if bad:
        return _fail(cert, census, bad)
    if v * m != G.order:
        return _fail(cert, census, f"v*m = {v * m} does not match |G| = {G.order}")
    if len(R) != k:
        return _fail(cert, census, f"|R| = {len(R)}, expected {k}")
    if max(_coset_hits(G, R, N).values()) > 1:
        return _fail(cert, census, "R meets some coset of the forbidden subgroup twice")
    wrong = [x for x, c in census.items() if c != lam]
    if wrong:
        return _fail(cert, census, f"|R cap xR| = {census[wrong[0]]} != {lam} at x = {wrong[0]}")
    return dataclasses.replace(cert, census=census, verified=True, reason="")


def _check_rqds(cert: DesignCertificate, counts: np.ndarray) -> DesignCertificate:
    G, R, Z = cert.group, cert.subset, cert.forbidden
    census = {x: int(counts[x]) for x in G.elements() if x not in set(Z or ())}
    bad = _forbidden_ok(G, Z, 2)
    if bad:
        return _fail(cert, census, bad)
    if G.order % 4 or G.order % 8 == 0 or G.order < 12:
        return _fail(cert, census, f"|E| = {G.order} is not 8t+4 with t >= 1")
    t = (G.order - 4) // 8
    params = (4 * t + 2, 2, 4 * t + 2, 2 * t + 1)
    cert = dataclasses.replace(cert, params=params)
    hits = _coset_hits(G, R, Z)
    if len(R) != 4 * t + 2 or len(hits) != 4 * t + 2:
        return _fail(cert, census, "R is not a transversal for the forbidden subgroup")
    odd = [x for x, c in census.items() if c not in (2 * t, 2 * t + 1, 2 * t + 2)]
    if odd:
        return _fail(cert, census, f"|R cap xR| = {census[odd[0]]} at x = {odd[0]} is outside {{2t, 2t+1, 2t+2}}")
    X = {x for x, c in census.items() if c == 2 * t + 1}
    S = tuple(sorted(set(R) & X))
    SZ = {G.mul(s, z) for s in S for z in Z}
    if X != SZ:
        return _fail(cert, census, "the value 2t+1 is not taken exactly on SZ", S=S)
    if len(S) not in (0, 2 * t + 1):
        return _fail(cert, census, f"|S| = {len(S)} is neither 0 nor 2t+1", S=S)
    return dataclasses.replace(cert, census=census, S=S, extremal=not S, verified=True, reason="")


def almost_difference_parameters(t: int, k: int) -> tuple[int, int, int, int]:
    return (4 * t + 2, k, k - t - 1, (4 * t + 1) * (k - t) - k * (k - 1))


def _check_ads(cert: DesignCertificate, counts: np.ndarray) -> DesignCertificate:
    G, D = cert.group, cert.subset
    census = {x: int(counts[x]) for x in G.elements() if x != 0}
    if G.order % 4 != 2 or G.order < 6:
        return _fail(cert, census, f"|G| = {G.order} is not 4t+2")
    t = (G.order - 2) // 4
    params = almost_difference_parameters(t, len(D))
    cert = dataclasses.replace(cert, params=params)
    lam, mult = params[2], params[3]
    odd = [x for x, c in census.items() if c not in (lam, lam + 1)]
    if odd:
        return _fail(cert, census, f"|D cap xD| = {census[odd[0]]} at x = {odd[0]} is not {lam} or {lam + 1}")
    got = sum(1 for c in census.values() if c == lam)
    if got != mult:
        return _fail(cert, census, f"value {lam} occurs {got} times, expected {mult}")
    return dataclasses.replace(cert, census=census, verified=True, reason="")


def _check_menon(cert: DesignCertificate, counts: np.ndarray) -> DesignCertificate:
    G, D = cert.group, cert.subset
    census = {x: int(counts[x]) for x in G.elements() if x != 0}
    u = math.isqrt(G.order // 4)
    if 4 * u * u != G.order:
        return _fail(cert, census, f"|G| = {G.order} is not 4u^2")
    params = (4 * u * u, 2 * u * u - u, u * u - u)
    cert = dataclasses.replace(cert, params=params)
    if len(D) != params[1]:
        return _fail(cert, census, f"|D| = {len(D)}, expected {params[1]}")
    wrong = [x for x, c in census.items() if c != params[2]]
    if wrong:
        return _fail(cert, census, f"|D cap xD| = {census[wrong[0]]} != {params[2]} at x = {wrong[0]}")
    return dataclasses.replace(cert, census=census, verified=True, reason="")


# ---------------------------------------------------------------------------
# constructions


def ngp_to_rds(pair: NGPair) -> DesignCertificate:
    """``{x^i : phi1'(i) = 1} u {x^i y : phi2'(i) = 1}`` in ``Q_8t``, forbidden ``<x^2t>``."""
    n = pair.length
    t = n // 2
    Q = groups.dicyclic(t)
    e1 = np.concatenate([pair.phi1, -pair.phi1])
    e2 = np.concatenate([pair.phi2, -pair.phi2])
    R = tuple(int(i) for i in np.flatnonzero(e1 == 1)) + tuple(int(i) + 4 * t for i in np.flatnonzero(e2 == 1))
    cert = DesignCertificate(
        "relative-difference-set", Q, R, (0, 2 * t), (4 * t, 2, 4 * t, 2 * t),
        notes=(f"ngp={bool(is_ngp(pair))}",),
    )
    return verify_design(cert)


@dataclass(frozen=True)
class DihedralTranslation:
    cocycle: Cocycle
    phi1: np.ndarray
    phi2: np.ndarray
    exponents: tuple[tuple[int, ...], tuple[int, ...]]
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "group": self.cocycle.group.spec,
            "j1": list(self.exponents[0]),
            "j2": list(self.exponents[1]),
            "notes": list(self.notes),
        }


def ngp_to_dihedral_cocycle(pair: NGPair) -> DihedralTranslation:
    """``lambda * prod_k d_k^{j_k1} d_{n+k}^{j_k2}`` over ``D_2n``, ``n`` the pair length.

    ``j_k,i = 1`` exactly when ``phi_i(k) = -1``; members starting with -1 are
    negated first, which keeps the pair an NGP.
    """
    n = pair.length
    notes = []
    a, b = pair.phi1.copy(), pair.phi2.copy()
    if a[0] < 0:
        a = -a
        notes.append("negated phi1")
    if b[0] < 0:
        b = -b
        notes.append("negated phi2")
    G = groups.dihedral(n)
    phi = np.concatenate([a, b])
    c = cocycles.dihedral_lambda(n) * cocycles.coboundary(G, phi)
    j1 = tuple(int(v < 0) for v in a)
    j2 = tuple(int(v < 0) for v in b)
    return DihedralTranslation(c, a, b, (j1, j2), tuple(notes))


def extension_certificate(psi: Cocycle) -> DesignCertificate:
    """``D = {(1, g)}`` in ``E_psi`` with forbidden subgroup ``<(-1, 1)>``."""
    E = groups.central_extension(psi)
    n = psi.order
    return verify_design(DesignCertificate("relative-quasi-difference-set", E, tuple(range(n)), (0, n)))


def goba_certificate(phi: BinaryArray, z: Sequence[int]) -> DesignCertificate:
    """``D = {g + K : phi'(g) = -1}`` in ``E/K`` with forbidden subgroup ``H/K``."""
    e = expand(phi, z)
    Q = e.expansion.quotient()
    D = tuple(sorted({Q.project(g) for g in np.flatnonzero(e.values == -1).tolist()}))
    Z = tuple(sorted({Q.project(h) for h in e.expansion.H}))
    return verify_design(DesignCertificate("relative-quasi-difference-set", Q.group, D, Z, notes=(f"z={tuple(z)}",)))


def _graph_subset(G: Group, phi) -> tuple[Group, tuple[int, ...]]:
    """``{(phi(g), g)}`` inside ``Z_2 x G``; index ``u |G| + g`` with ``u = 1`` for ``phi(g) = -1``."""
    P = groups.direct_product(groups.cyclic(2), G)
    phi = np.asarray(phi)
    return P, tuple(int(g + G.order * (phi[g] < 0)) for g in G.elements())


def graph_quasi_difference_certificate(G: Group, phi) -> DesignCertificate:
    P, R = _graph_subset(G, phi)
    return verify_design(DesignCertificate("relative-quasi-difference-set", P, R, (0, G.order)))


def graph_relative_difference_certificate(G: Group, phi) -> DesignCertificate:
    P, R = _graph_subset(G, phi)
    v = G.order
    return verify_design(DesignCertificate("relative-difference-set", P, R, (0, v), (v, 2, v, v // 2)))


def almost_difference_certificate(G: Group, D: Sequence[int]) -> DesignCertificate:
    return verify_design(DesignCertificate("almost-difference-set", G, tuple(D)))


def menon_certificate(G: Group, D: Sequence[int]) -> DesignCertificate:
    return verify_design(DesignCertificate("menon-difference-set", G, tuple(D)))


def support(phi) -> tuple[int, ...]:
    """Elements where ``phi`` is -1."""
    return tuple(int(g) for g in np.flatnonzero(np.asarray(phi) < 0))
