import pytest

from src.app.core.exceptions import NotActiveError, OperadAxiomError
from src.app.services.operad_categories import (
    TupleMorphism,
    env_category,
    envelope_fiber,
    standard_active,
    total_category,
    underlying_category,
    unary_inverse,
)
from src.app.services.operads import AssInvOperad, AssOperad, CommOperad, TrivOperad
from src.app.services.pointed import PointedMap


@pytest.fixture
def comm_total():
    """Create the total category of Comm through arity 3."""
    return total_category(CommOperad(), 3)


@pytest.fixture
def ass_total():
    """Create the total category of Ass through arity 3."""
    return total_category(AssOperad(), 3)


def test_comm_total_category_is_pointed_sets(comm_total):
    """Test that hom(<2>, <1>) of Comm has one morphism per pointed map."""
    assert len(comm_total.hom(("x", "x"), ("x",))) == 4
    assert len(comm_total.hom(("x", "x"), ("x",), active_only=True)) == 1
    assert comm_total.hom_size(("x", "x", "x"), ("x", "x")) == 27


def test_ass_hom_counts(ass_total):
    """Test that active maps <2> -> <1> in Ass are the two orders."""
    assert len(ass_total.hom(("x", "x"), ("x",), active_only=True)) == 2
    assert ass_total.hom_size(("x", "x"), ("x",)) == 5


def test_identity_is_neutral(ass_total):
    """Test the unit law of composition in the total category."""
    for f in ass_total.hom(("x", "x"), ("x", "x")):
        assert ass_total.compose(ass_total.identity(f.target), f) == f
        assert ass_total.compose(f, ass_total.identity(f.source)) == f


def test_composition_is_associative(ass_total):
    """Test associativity on a sample of composable triples."""
    x1, x2, x3 = ("x",), ("x", "x"), ("x", "x", "x")
    for f in ass_total.hom(x3, x2, active_only=True)[:6]:
        for g in ass_total.hom(x2, x2)[:6]:
            for h in ass_total.hom(x2, x1):
                left = ass_total.compose(h, ass_total.compose(g, f))
                right = ass_total.compose(ass_total.compose(h, g), f)
                assert left == right


def test_hom_decomposition(ass_total):
    """Test that maps into <2> are determined by their two projections."""
    assert ass_total.check_hom_decomposition(("x", "x"), ("x", "x"))


def test_standard_active_block_map():
    """Test the block map <4> -> <2> of Ass."""
    f = standard_active(AssOperad(), 4, 2)
    assert f.alpha == PointedMap(4, 2, (1, 1, 2, 2))
    assert f.components == ((0, 1), (0, 1))
    assert f.is_active


def test_standard_active_needs_operations():
    """Test that Triv has no binary block map."""
    with pytest.raises(OperadAxiomError):
        standard_active(TrivOperad(), 2, 1)


def test_no_active_map_to_zero():
    """Test that a nonempty tuple has no active map to <0>."""
    with pytest.raises(NotActiveError):
        standard_active(CommOperad(), 1, 0)


def test_atomic_and_semi_inert(comm_total):
    """Test the atomic recognition of an inclusion with unit component."""
    inclusion = TupleMorphism(("x",), ("x", "x"), PointedMap.inclusion(1), (("comm", 1), ("comm", 0)))
    assert comm_total.is_atomic(inclusion)
    assert comm_total.is_semi_inert(inclusion)
    assert not comm_total.is_atomic(comm_total.identity(("x",)))


def test_unary_inverse_in_assinv():
    """Test that the involution is its own inverse."""
    assinv = AssInvOperad()
    assert unary_inverse(assinv, assinv.tau) == assinv.tau
    assert underlying_category(assinv).is_groupoid()


def test_inverse_of_swap(ass_total):
    """Test that the swap of <2> is invertible with inverse itself."""
    swap = TupleMorphism(("x", "x"), ("x", "x"), PointedMap(2, 2, (2, 1)), ((0,), (0,)))
    assert ass_total.inverse(swap) == swap


def test_envelope_of_comm():
    """Test the objects of the envelope of Comm through arity 1."""
    env = env_category(CommOperad(), 1)
    assert len(env.objects) == 3
    assert len(envelope_fiber(env, 1)) == 2
    assert env.check_axioms() == []
