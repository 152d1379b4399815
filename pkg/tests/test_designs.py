from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goba import arrays, cocycles, designs, excess, groups, ngp
from goba.arrays import BinaryArray
from goba.designs import DesignCertificate
from goba.ngp import NGPair

Z23 = groups.abelian((2, 3))


def _pairs(n: int):
    for a, b in itertools.product(range(1 << n), repeat=2):
        yield NGPair(ngp.decode(a, n), ngp.decode(b, n))


def _both_ways(pair: NGPair) -> None:
    law = ngp.is_ngp(pair)
    assert designs.ngp_to_rds(pair).verified == law
    assert excess.is_orthogonal(designs.ngp_to_dihedral_cocycle(pair).cocycle) == law


@pytest.mark.parametrize("n", [2, 4, 6])
def test_ngp_biconditionals_exhaustive(n):
    for pair in _pairs(n):
        _both_ways(pair)


@settings(max_examples=150)
@given(st.sampled_from([8, 10]), st.data())
def test_ngp_biconditionals_sampled(n, data):
    a = data.draw(st.integers(0, (1 << n) - 1))
    b = data.draw(st.integers(0, (1 << n) - 1))
    _both_ways(NGPair(ngp.decode(a, n), ngp.decode(b, n)))


def test_ngp_biconditionals_on_enumerated_pairs():
    res = ngp.enumerate_ngps(5)
    rng = np.random.default_rng(11)
    for code in rng.choice(res.pairs, 100):
        pair = NGPair.from_code(int(code), 10)
        assert designs.ngp_to_rds(pair).verified
        assert excess.is_orthogonal(designs.ngp_to_dihedral_cocycle(pair).cocycle)


def test_known_pairs_give_designs_and_hadamard_matrices():
    for k in ngp.KNOWN_PAIRS:
        pair = ngp.known_pair(k)
        cert = designs.ngp_to_rds(pair)
        t = k
        assert cert.verified and cert.params == (4 * t, 2, 4 * t, 2 * t)
        assert set(cert.census.values()) == {2 * t}
        assert excess.row_excess(designs.ngp_to_dihedral_cocycle(pair).cocycle) == 0


def test_dihedral_translation_normalizes_and_records():
    pair = ngp.known_pair(3)
    flipped = NGPair(-pair.phi1, pair.phi2)
    out = designs.ngp_to_dihedral_cocycle(flipped)
    assert out.notes == ("negated phi1",)
    assert excess.is_orthogonal(out.cocycle)
    assert out.exponents[0] == tuple(int(v < 0) for v in pair.phi1)


def test_quaternion_order_eight_case():
    cert = designs.ngp_to_rds(NGPair([1, 1], [1, -1]))
    assert cert.group.order == 8 and cert.verified
    # brute force over all eight translates
    Q = groups.dicyclic(1)
    R = set(cert.subset)
    for x in Q.elements():
        if x not in (0, 2):
            assert len(R & {Q.mul(x, r) for r in R}) == 2


def test_extension_certificate_recovers_zero_sum_rows():
    psi = cocycles.f_z((2, 3), (1, 0)) * cocycles.coboundary(Z23, [1, -1, 1, 1, 1, 1])
    cert = designs.extension_certificate(psi)
    assert cert.verified and not cert.extremal
    zero_rows = excess.excess_profile(psi).X(0)
    assert cert.S == zero_rows


def test_extension_certificate_is_extremal_for_coboundaries():
    G = groups.cyclic(6)
    seen = 0
    for c in cocycles.space(G):
        if excess.is_quasi_orthogonal(c, True):
            cert = designs.extension_certificate(c)
            assert cert.verified and cert.extremal
            seen += 1
    assert seen > 0


def test_extension_certificate_biconditional():
    G = groups.cyclic(6)
    for c in cocycles.space(G, [cocycles.gamma(6)]):
        assert designs.extension_certificate(c).verified == excess.is_quasi_orthogonal(c)


def test_three_way_equivalence_on_small_product():
    for z in ((1, 0), (0, 1), (1, 1)):
        fz = cocycles.f_z((2, 3), z)
        for tail in itertools.product([1, -1], repeat=5):
            phi = BinaryArray((2, 3), (1,) + tail)
            goba = arrays.is_goba(phi, z)
            quasi = excess.is_quasi_orthogonal(fz * cocycles.coboundary(Z23, phi.values))
            cert = designs.goba_certificate(phi, z)
            assert goba == quasi == cert.verified
            if cert.verified and z[0] == 0:
                assert cert.extremal


@pytest.mark.parametrize("n", [6, 10])
def test_oba_equivalences(n):
    G = groups.cyclic(n)
    for tail in itertools.product([1, -1], repeat=n - 1):
        phi = np.array((1,) + tail, dtype=np.int8)
        quasi = excess.is_quasi_orthogonal(cocycles.coboundary(G, phi), True)
        oba = arrays.classify(BinaryArray((n,), phi)).OBA
        ads = designs.almost_difference_certificate(G, designs.support(phi)).verified
        rqds = designs.graph_quasi_difference_certificate(G, phi)
        assert quasi == oba == ads == (rqds.verified and rqds.extremal)


def test_almost_difference_parameters():
    assert designs.almost_difference_parameters(1, 2) == (6, 2, 0, 1 * 5 - 2)


def test_menon_spot_checks():
    for sizes, k in (((4,), 1), ((2, 2), 1), ((2, 2, 2, 2), 6)):
        G = groups.abelian(sizes)
        n = G.order
        T = G.cayley()
        agree = 0
        for D in itertools.combinations(range(n), k):
            phi = np.ones(n, dtype=np.int8)
            phi[list(D)] = -1
            # d(phi) up to a global sign, which leaves |row sums| unchanged
            M = phi[:, None] * phi[None, :] * phi[T]
            orth = excess.row_excess(M) == 0
            menon = designs.menon_certificate(G, D).verified
            rds = designs.graph_relative_difference_certificate(G, phi).verified
            pba = arrays.classify(BinaryArray(sizes, phi)).PBA
            assert orth == menon == rds == pba
            agree += menon
        assert agree > 0


def test_verify_reports_malformed_subsets():
    Q = groups.dicyclic(1)
    cert = DesignCertificate("relative-difference-set", Q, (0, 2, 1, 5), (0, 2), (4, 2, 4, 2))
    out = designs.verify_design(cert)
    assert out.verified is False and "coset" in out.reason
    out = designs.verify_design(DesignCertificate("relative-difference-set", Q, (0, 9), (0, 2), (4, 2, 4, 2)))
    assert out.verified is False and "range" in out.reason
    E = groups.central_extension(cocycles.gamma(6))
    out = designs.verify_design(DesignCertificate("relative-quasi-difference-set", E, (0, 1, 2), (0, 6)))
    assert out.verified is False and "transversal" in out.reason
    out = designs.verify_design(DesignCertificate("relative-quasi-difference-set", E, tuple(range(6)), (0, 1)))
    assert out.verified is False
    with pytest.raises(ValueError):
        designs.verify_design(DesignCertificate("bent-function", Q, ()))


def test_certificate_json_is_serializable():
    cert = designs.goba_certificate(BinaryArray((2, 3), [1, -1, 1, 1, 1, 1]), (1, 0))
    blob = json.loads(json.dumps(cert.to_json()))
    assert blob["verified"] is True and blob["kind"] == "relative-quasi-difference-set"
    assert len(blob["census"]) == cert.group.order - 2
