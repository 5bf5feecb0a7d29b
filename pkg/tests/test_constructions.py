import random

import pytest

from birdeg import errors
from birdeg.constructions import (
    A_BDJK,
    A_SUG,
    bdjk_map,
    big_psi,
    conjugate,
    conjugate_construction,
    cremona,
    matrix_B,
    parse_variant,
    psi_variant,
    segre_slice_phi,
    slice_map,
    step_map_h,
    toy_matrix,
    tower,
    tower_step,
)
from birdeg.monomial import IntMatrix, det, linear_map, inverse_unimodular, monomial_degree, spectral_radius, to_projective
from birdeg.polyring import BlockShape
from birdeg.projmap import (
    RationalMap,
    certify_inverse,
    compose,
    equal,
    pointwise_identity,
    product,
)

from oracles import leibniz_det, projectively_equal

P3 = BlockShape((3,))


def flat(m: RationalMap) -> RationalMap:
    """Same map with its factor chain forgotten, so only expanded arithmetic applies."""
    return RationalMap(m.source, m.target, m.groups)


def named(name, f, g):
    from birdeg.constructions import _certified

    return _certified(name, f, g, {})


# the matrix B ---------------------------------------------------------------------


def test_matrix_B_matches_the_display():
    displayed = [[1, -1, 1, -1], [1, 1, -1, 1], [-1, 1, 1, -1], [1, -1, 1, 1]]
    assert matrix_B(3).tolist() == displayed


@pytest.mark.parametrize("d", range(1, 9))
def test_matrix_B_shape_and_determinant(d):
    B = matrix_B(d)
    rows = B.tolist()
    assert rows[0] == [(-1) ** j for j in range(d + 1)]
    assert [r[0] for r in rows[1:]] == [(-1) ** (i - 1) for i in range(1, d + 1)]
    assert all(rows[i][i] == 1 for i in range(d + 1))
    if d <= 6:
        assert det(B) == leibniz_det(rows) != 0
    assert det(B) == 2**d


# bdjk family ----------------------------------------------------------------------


def test_bdjk_with_identity_has_degree_three():
    c = bdjk_map(IntMatrix.identity(3))
    assert c.certificate.passed and c.degree() == 3


def test_bdjk_phi():
    c = bdjk_map(A_BDJK, 3, name="phi")
    assert c.certificate.passed
    assert monomial_degree(A_BDJK) == 50
    assert c.degree() <= 3 * 50
    assert c.notes["degree_bound"] == 150


def test_bdjk_rejects_bad_input():
    with pytest.raises(errors.NotUnimodular):
        bdjk_map(IntMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        bdjk_map(A_BDJK, d=4)


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_bdjk_degree_bound_on_random_small_matrices(seed):
    from birdeg.dyndeg import random_unimodular

    A = random_unimodular(3, random.Random(seed), max_entry=2)
    c = bdjk_map(A)
    assert c.degree() <= 3 * monomial_degree(A)


def test_psi_degree_and_inverse():
    psi = psi_variant("sug24")
    deg = psi.degree()
    assert 291 <= deg <= 669
    assert max(psi.map.term_counts()) <= 256
    assert psi.certificate.passed and psi.certificate.pointwise is True


def test_psi_expanded_matches_factorwise_evaluation():
    psi = psi_variant("sug24")
    from birdeg.projmap import _eval_chain_mod

    p = 2_147_483_647
    rng = random.Random(11)
    for _ in range(3):
        pt = [rng.randrange(1, p) for _ in range(4)]
        expanded = [v for g in psi.map(pt, p) for v in g]
        chained = _eval_chain_mod(psi.map, pt)
        assert all((expanded[i] * chained[j] - expanded[j] * chained[i]) % p == 0
                   for i in range(4) for j in range(4))


# slices -----------------------------------------------------------------------------


def test_phi_evaluation_example():
    phi = segre_slice_phi()
    assert phi.map([1, 2, 3, 4, 5, 6, 7, 8]) == [[5, 10, 15, 20, 24, 28, 32]]
    assert phi.certificate.passed
    assert phi.source == BlockShape((3, 3)) and phi.target == BlockShape((6,))


def test_phi_degenerate_second_factor():
    phi = segre_slice_phi()
    img = phi.map([1, 2, 3, 4, 0, 0, 0, 1])[0]
    assert img == [0, 0, 0, 0, 0, 0, 4]


def test_step_map_h_for_n0_1():
    h = step_map_h(1)
    a, b, c, d = 2, 3, 5, 7
    assert h.map([a, b, c, d]) == [[a * c, b * c, b * d]]
    # h∘h⁻¹: [z0 z1 : z1 z1 : z1 z2] loses the common factor z1
    hh = compose(h.map, h.inverse)
    assert hh.is_identity or equal(hh, RationalMap.identity(BlockShape((2,))))


@pytest.mark.parametrize("n0", range(1, 7))
def test_step_map_h_certificates(n0):
    h = step_map_h(n0)
    assert h.certificate.passed
    assert certify_inverse(flat(h.map), flat(h.inverse)).passed


def test_slice_map_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        slice_map(0, 2)


# conjugation and towers ------------------------------------------------------------


def test_conjugate_identity_is_identity():
    phi = segre_slice_phi()
    out = conjugate(RationalMap.identity(BlockShape((3, 3))), phi)
    assert equal(out, RationalMap.identity(BlockShape((6,))))


def test_conjugate_preserves_involutions():
    phi = segre_slice_phi()
    hh = product(cremona(3), cremona(3))
    g = conjugate(hh, phi)
    assert g.source == BlockShape((6,))
    assert equal(compose(g, g), RationalMap.identity(BlockShape((6,))))
    assert certify_inverse(g, g).passed
    assert certify_inverse(flat(g), flat(g)).passed


def test_tower_of_identity():
    base = named("id2", RationalMap.identity(BlockShape((2,))), RationalMap.identity(BlockShape((2,))))
    out = tower(base, 4)
    assert out.source == BlockShape((4,))
    assert equal(out.map, RationalMap.identity(BlockShape((4,))))


def test_tower_of_cremona_is_an_involution():
    h = cremona(3)
    base = named("h3", h, h)
    out = tower(base, 5)
    assert out.certificate.passed and out.source == BlockShape((5,))
    assert equal(compose(out.map, out.map), RationalMap.identity(BlockShape((5,))))
    # every intermediate dimension certifies too
    step = base
    for n in (4, 5):
        step = tower_step(step)
        assert step.certificate.passed and step.source == BlockShape((n,))


def test_tower_rejects_lower_dimension():
    h = cremona(3)
    with pytest.raises(ValueError):
        tower(named("h3", h, h), 2)


# toy pipeline ----------------------------------------------------------------------


def test_toy_matrix_choice():
    A = toy_matrix(42)
    assert det(A) in (1, -1)
    assert all(abs(x) <= 2 for r in A.rows for x in r)
    assert 1 < spectral_radius(A).value < 3
    assert toy_matrix(42) == A
    assert parse_variant("toy:42") == ("psi_toy42", A)
    with pytest.raises(ValueError):
        parse_variant("toy:x")
    with pytest.raises(ValueError):
        parse_variant("nope")


@pytest.fixture(scope="module")
def toy():
    return psi_variant("toy:42")


@pytest.fixture(scope="module")
def toy_big_psi(toy):
    return big_psi(toy)


def test_toy_psi_flat_certificate(toy):
    """Composing the expanded maps directly agrees with the chain-cancellation path."""
    assert len(toy.map.chain) > 1
    assert compose(flat(toy.map), flat(toy.inverse)).is_identity
    assert compose(flat(toy.inverse), flat(toy.map)).is_identity
    assert certify_inverse(flat(toy.map), flat(toy.inverse)).passed
    bad = certify_inverse(flat(toy.map), flat(toy.map))
    assert not bad.passed


def test_toy_product_certifies(toy):
    pp = product(toy.map, toy.inverse)
    assert pp.source == BlockShape((3, 3))
    assert certify_inverse(pp, product(toy.inverse, toy.map)).passed


def test_toy_big_psi(toy_big_psi):
    Psi = toy_big_psi
    assert Psi.source == BlockShape((6,)) and Psi.certificate.passed
    assert pointwise_identity(Psi.map, Psi.inverse) is True


def test_toy_big_psi_agrees_with_definition(toy, toy_big_psi):
    """Ψ(Φ(x, y)) = Φ(ψ(x), ψ⁻¹(y)) at integer points."""
    phi = segre_slice_phi()
    rng = random.Random(2)
    for _ in range(3):
        x = [rng.randint(1, 9) for _ in range(4)]
        y = [rng.randint(1, 9) for _ in range(4)]
        z = phi.map(x + y)[0]
        lhs = toy_big_psi.map(z)[0]
        rhs = phi.map(toy.map(x)[0] + toy.inverse(y)[0])[0]
        assert projectively_equal(lhs, rhs)


def test_toy_tower_steps(toy_big_psi):
    g7 = tower_step(toy_big_psi)
    assert g7.certificate.passed and g7.source == BlockShape((7,))
    g8 = tower(toy_big_psi, 8)
    assert g8.certificate.passed and g8.source == BlockShape((8,))


def test_conjugate_construction_names(toy):
    L = IntMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, 1]])
    lin = named("L", linear_map(L), linear_map(inverse_unimodular(L)))
    c = conjugate_construction(toy, lin)
    assert c.name == "L.psi_toy42" and c.certificate.passed
    assert c.degree() == toy.degree()


def test_failing_certificate_raises():
    from birdeg.constructions import _certified

    swap = to_projective(IntMatrix([[0, 1], [1, 0]]))
    with pytest.raises(errors.CertificateFailure):
        _certified("bad", swap, RationalMap.identity(BlockShape((2,))), {})


def test_construction_document(toy):
    doc = toy.to_dict()
    assert doc["certificate"]["passed"] is True
    assert doc["notes"]["A"] == toy_matrix(42).tolist()
    assert inverse_unimodular(IntMatrix(doc["notes"]["A"])) is not None
