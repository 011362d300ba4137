import pytest

from src.app.core.exceptions import OperadAxiomError
from src.app.services.operads import (
    AssInvOperad,
    AssOperad,
    CommOperad,
    TabulatedOperad,
    TrivOperad,
    builtin_operad,
    check_operad_axioms,
    compose_perms,
    invert_perm,
    presentation_closure,
    sorting_perm,
)
from src.app.services.pointed import MapKind, PointedMap, classify, has_retraction


@pytest.fixture
def assinv():
    """Create the operad of signed words."""
    return AssInvOperad()


def test_classify_identity_and_inclusion():
    """Test the kinds of an identity and of an atomic inclusion."""
    assert classify(PointedMap.identity(2)) == {MapKind.INERT, MapKind.ACTIVE, MapKind.SEMI_INERT}
    assert MapKind.ATOMIC in classify(PointedMap.inclusion(2))
    assert MapKind.INERT not in classify(PointedMap.inclusion(2))


def test_classify_fold_and_projection():
    """Test that the fold <2> -> <1> is active only and a projection is inert only."""
    assert classify(PointedMap(2, 1, (1, 1))) == {MapKind.ACTIVE}
    assert classify(PointedMap(2, 1, (1, 0))) == {MapKind.INERT, MapKind.SEMI_INERT}


def test_fold_has_no_retraction():
    """Test that only injective pointed maps have retractions."""
    assert not has_retraction(PointedMap(2, 1, (1, 1)))
    assert has_retraction(PointedMap.inclusion(1))


def test_permutation_helpers():
    """Test inverse, composition and sorting permutations."""
    perm = (2, 0, 1)
    assert compose_perms(perm, invert_perm(perm)) == (0, 1, 2)
    assert sorting_perm([5, 1, 3]) == (2, 0, 1)


def test_builtin_profiles():
    """Test the number of operations per arity of the builtin operads."""
    assert CommOperad().profile(3) == {0: 1, 1: 1, 2: 1, 3: 1}
    assert AssOperad().profile(3) == {0: 1, 1: 1, 2: 2, 3: 6}
    assert AssInvOperad().profile(2) == {0: 1, 1: 2, 2: 8}
    assert TrivOperad().profile(2) == {0: 1, 1: 1, 2: 0}


def test_assinv_involution(assinv):
    """Test tau o tau = id and tau o mu = mu(tau b, tau a)."""
    tau, mu = assinv.tau, assinv.mu
    assert assinv.compose(tau, 0, tau) == assinv.identity("x")
    left = assinv.compose(tau, 0, mu)
    swapped = assinv.act(mu, (1, 0))
    right = assinv.compose(assinv.compose(swapped, 0, tau), 1, tau)
    assert left == right


def test_assinv_presentation_closure(assinv):
    """Test that mu, tau and e generate 2 unary and 8 binary operations."""
    closure = presentation_closure(assinv, [assinv.mu, assinv.tau, assinv.e], 2)
    assert len(closure[1]) == 2
    assert len(closure[2]) == 8
    assert closure[2] == set(assinv.operations_of_arity(2))


@pytest.mark.parametrize("name", ["Comm", "Ass", "AssInv", "Triv"])
def test_builtin_axioms(name):
    """Test units, equivariance and associativity of the builtins through arity 3."""
    report = check_operad_axioms(builtin_operad(name), 3)
    assert report.ok, report.violations[:3]
    assert report.checked > 0


def test_unknown_builtin():
    """Test that unknown operad names are rejected."""
    with pytest.raises(OperadAxiomError):
        builtin_operad("E7")


def test_composition_checks_colors():
    """Test that plugging into a missing input is rejected."""
    comm = CommOperad()
    with pytest.raises(OperadAxiomError):
        comm.compose(("comm", 2), 2, ("comm", 1))


def test_triv_is_unital():
    """Test that Triv has exactly one nullary operation."""
    triv = TrivOperad()
    assert triv.is_unital
    assert triv.unit("x") == ("triv", 0)


def test_tabulated_operad_without_unit():
    """Test that a table with no nullary operation fails unitality."""
    operad = TabulatedOperad("bare", ["x"], {"id": (("x",), "x")}, {"x": "id"}, {})
    assert not operad.is_unital
    with pytest.raises(OperadAxiomError, match="unitality"):
        operad.unit("x")


def test_tabulated_operad_composes_through_identity():
    """Test that identity compositions need no table entries."""
    operad = TabulatedOperad(
        "pointed", ["x"], {"id": (("x",), "x"), "e": ((), "x")}, {"x": "id"}, {}
    )
    assert operad.compose("id", 0, "e") == "e"
    assert operad.unit("x") == "e"
    assert check_operad_axioms(operad, 2).ok
