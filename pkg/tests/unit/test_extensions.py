import pytest

from src.app.core.exceptions import NotActiveError, NotAtomicError, NotGroupError, OperadAxiomError
from src.app.services.categories import pi0
from src.app.services.extensions import (
    bo_fiber,
    coherence_probe,
    ext_category,
    ext_HA_category,
    gamma_witness,
    strict_ext_fiber,
    unary_orbits,
)
from src.app.services.operad_categories import TupleMorphism, standard_active, total_category
from src.app.services.operads import AssInvOperad, AssOperad, CommOperad, TabulatedOperad, TrivOperad
from src.app.services.pointed import PointedMap


def identity_of_one(operad):
    """The identity of the one color tuple <1>."""
    return total_category(operad, 2).identity((operad.colors[0],))


@pytest.fixture
def assinv():
    """Create the operad of signed words."""
    return AssInvOperad()


@pytest.fixture
def assinv_id(assinv):
    """Create the identity of <1> in the total category of AssInv."""
    return identity_of_one(assinv)


def test_assinv_strict_fiber(assinv, assinv_id):
    """Test that id_<1> has four strict extensions in AssInv."""
    fiber = strict_ext_fiber(assinv, assinv_id)
    assert len(fiber) == 4
    assert all(f.is_active for f in fiber)


def test_assinv_orbits_are_free(assinv, assinv_id):
    """Test that the involution acts freely with two orbits."""
    report = unary_orbits(assinv, assinv_id)
    assert len(report.fiber) == 4
    assert len(report.group) == 2
    assert report.count == 2
    assert report.free


def test_assinv_ext_components(assinv, assinv_id):
    """Test pi0 of the full and normalized extension categories."""
    full = ext_category(assinv, assinv_id)
    normalized = ext_category(assinv, assinv_id, normalized=True)
    assert len(full.objects) == 32
    assert len(pi0(full)) == 2
    assert len(normalized.objects) == 4
    assert len(pi0(normalized)) == 2


def test_assinv_endomorphisms(assinv, assinv_id):
    """Test that one extension has 1 endomorphism, and 2 once the new color may merge."""
    ext = ext_category(assinv, assinv_id, normalized=True)
    ext_ha = ext_HA_category(assinv, assinv_id, normalized=True)
    record = ext.objects[0]
    assert len(ext.hom(record, record)) == 1
    assert len(ext_ha.hom(record, record)) == 2


def test_assinv_brane_fiber(assinv, assinv_id):
    """Test that the brane fiber matches the orbit count."""
    assert len(pi0(bo_fiber(assinv, assinv_id, normalized=True))) == 2


def test_comm_extensions_are_contractible():
    """Test that Comm has one extension up to isomorphism and singleton homs."""
    comm = CommOperad()
    sigma = identity_of_one(comm)
    assert len(strict_ext_fiber(comm, sigma)) == 1
    ext = ext_category(comm, sigma)
    assert len(pi0(ext)) == 1
    for a in ext.objects:
        for b in ext.objects:
            assert len(ext.hom(a, b)) == 1


def test_comm_gamma_witness():
    """Test that the merging endomorphism of Comm lies over a map without retraction."""
    comm = CommOperad()
    witness = gamma_witness(ext_HA_category(comm, identity_of_one(comm), normalized=True))
    assert witness is not None
    assert witness.mu == PointedMap(2, 2, (1, 1))
    assert witness.mu_has_retraction is False


def test_ass_components_count_insertion_points():
    """Test that extensions of <m> -> <n> in Ass have m + n components."""
    ass = AssOperad()
    assert len(strict_ext_fiber(ass, identity_of_one(ass))) == 2
    assert unary_orbits(ass, identity_of_one(ass)).count == 2
    for m, n in [(2, 1), (3, 1), (2, 2)]:
        sigma = standard_active(ass, m, n)
        assert len(pi0(ext_category(ass, sigma, normalized=True))) == m + n


def test_triv_has_no_extensions():
    """Test that Triv has no binary operation to extend with."""
    triv = TrivOperad()
    assert strict_ext_fiber(triv, identity_of_one(triv)) == []
    assert ext_category(triv, identity_of_one(triv)).objects == []


def test_inert_sigma_is_rejected(assinv):
    """Test that only active maps have extensions."""
    inert = TupleMorphism(("x",), (), PointedMap(1, 0, (0,)), ())
    with pytest.raises(NotActiveError):
        strict_ext_fiber(assinv, inert)


def test_non_atomic_map_is_rejected(assinv, assinv_id):
    """Test that the chosen map out of the source must be atomic."""
    with pytest.raises(NotAtomicError):
        strict_ext_fiber(assinv, assinv_id, atomic=assinv_id)


def test_non_unital_operad_is_rejected():
    """Test that extensions need a unital operad."""
    bare = TabulatedOperad("bare", ["x"], {"id": (("x",), "x")}, {"x": "id"}, {})
    with pytest.raises(OperadAxiomError, match="unitality"):
        strict_ext_fiber(bare, identity_of_one(bare))


def test_orbits_need_invertible_unaries():
    """Test that an idempotent unary operation is refused."""
    idempotent = TabulatedOperad(
        "idempotent",
        ["x"],
        {"id": (("x",), "x"), "p": (("x",), "x"), "e": ((), "x")},
        {"x": "id"},
        {("p", 0, "p"): "p", ("p", 0, "e"): "e"},
    )
    with pytest.raises(NotGroupError):
        unary_orbits(idempotent, identity_of_one(idempotent))


def test_coherence_square_for_ass():
    """Test the component square of the block maps <4> -> <2> -> <1>."""
    ass = AssOperad()
    verdict = coherence_probe(ass, standard_active(ass, 4, 2), standard_active(ass, 2, 1))
    assert verdict.pi0_sizes == {"Ext(id_Y)": 4, "Ext(g)": 3, "Ext(f)": 6, "Ext(gf)": 5}
    assert verdict.pushout_holds
    assert verdict.necessary_only
