import pytest

from src.app.core.exceptions import InvalidSimplicialDataError, NotMonomorphismError
from src.app.services.constructions import (
    boundary,
    disjoint_union,
    horn,
    join,
    opposite,
    point,
    product,
    pushout,
    spine,
    standard_simplex,
    subcomplex,
)
from src.app.services.isomorphism import find_isomorphism, is_isomorphic
from src.app.services.simplex_ops import SimplexOp, codegeneracy, coface, compose, surjections
from src.app.services.simplicial_set import SimplicialMap, SimplicialSet


@pytest.fixture
def triangle():
    """Create the standard 2-simplex."""
    return standard_simplex(2)


def test_standard_simplex_counts():
    """Test that Delta^3 has binomial simplex counts."""
    assert standard_simplex(3).counts() == (4, 6, 4, 1)


def test_boundary_horn_and_spine_counts():
    """Test the counts of the boundary, a horn and the spine."""
    assert boundary(2).counts() == (3, 3)
    assert horn(2, 1).counts() == (3, 2)
    assert horn(3, 0).counts() == (4, 6, 3)
    assert spine(3).counts() == (4, 3)


def test_face_along_nondegenerate_and_degenerate(triangle):
    """Test normal forms of faces and degeneracies of the top simplex."""
    assert triangle.face_along("<0,1,2>", (0, 2)) == ((0, 1), "<0,2>")
    assert triangle.face_along("<0,1,2>", (0, 0)) == ((0, 0), "0")
    assert triangle.face_along("<0,1,2>", (1, 1, 2)) == ((0, 0, 1), "<1,2>")


def test_vertices_of(triangle):
    """Test the vertex sequence of a simplex."""
    assert triangle.vertices_of("<0,1,2>") == ("0", "1", "2")
    assert triangle.vertices_of("<0,2>") == ("0", "2")


def test_validate_accepts_standard_simplex(triangle):
    """Test that a well formed simplex passes the simplicial identities."""
    triangle.validate()


def test_validate_rejects_broken_identities():
    """Test that a 2-simplex with three equal faces fails validation."""
    space = SimplicialSet(
        {"a": 0, "b": 0, "e": 1, "t": 2},
        {"e": [((0,), "b"), ((0,), "a")], "t": [((0, 1), "e")] * 3},
    )
    with pytest.raises(InvalidSimplicialDataError):
        space.validate()


def test_unknown_face_target_is_rejected():
    """Test that faces must point at known simplices."""
    with pytest.raises(InvalidSimplicialDataError):
        SimplicialSet({"a": 0, "e": 1}, {"e": [((0,), "a"), ((0,), "z")]})


def test_marking_must_name_edges():
    """Test that only edges can be marked."""
    with pytest.raises(InvalidSimplicialDataError):
        standard_simplex(2).with_marking(["<0,1,2>"])


def test_simplex_op_words():
    """Test degeneracy and face words of a monotone map."""
    op = SimplexOp(3, 2, (0, 0, 1, 2))
    assert op.degeneracy_word == (0,)
    assert op.face_word == ()
    assert SimplexOp.from_words((0,), (), 3).values == (0, 0, 1, 2)
    assert SimplexOp.from_words((), (1,), 1).values == (0, 2)


def test_cosimplicial_identity():
    """Test s_j d_j = id on the values of the elementary maps."""
    for n in range(1, 4):
        for j in range(n):
            assert compose(codegeneracy(n - 1, j), coface(n, j)) == tuple(range(n))


def test_surjection_count():
    """Test that there are C(m, n) surjections [m] -> [n]."""
    assert len(list(surjections(3, 1))) == 3
    assert len(list(surjections(4, 2))) == 6


def test_join_of_simplices_is_a_simplex():
    """Test Delta^1 * Delta^0 = Delta^2 and the join count formula."""
    joined = join(standard_simplex(1), standard_simplex(0)).space
    assert is_isomorphic(joined, standard_simplex(2), respect_marking=False)
    big = join(standard_simplex(1), standard_simplex(1)).space
    assert big.counts() == standard_simplex(3).counts()


def test_product_of_intervals():
    """Test that Delta^1 x Delta^1 has 4 vertices, 5 edges and 2 triangles."""
    assert product(standard_simplex(1), standard_simplex(1)).space.counts() == (4, 5, 2)


def test_opposite_of_simplex():
    """Test that the opposite of Delta^2 is isomorphic to Delta^2."""
    assert is_isomorphic(opposite(standard_simplex(2)), standard_simplex(2))


def test_pushout_of_two_intervals():
    """Test gluing two intervals end to end."""
    interval = standard_simplex(1)
    end = point("1")
    f = SimplicialMap.inclusion(end, interval, "end")
    g = SimplicialMap(end, interval, {"1": ((0,), "0")}, "start")
    glued = pushout(f, g)
    assert glued.space.counts() == (3, 2)
    assert is_isomorphic(glued.space, spine(2), respect_marking=False)


def test_pushout_requires_monomorphism():
    """Test that the attaching leg must be a monomorphism."""
    interval = standard_simplex(1)
    collapse = SimplicialMap(interval, point(), {"0": ((0,), "0"), "1": ((0,), "0"), "<0,1>": ((0, 0), "0")})
    with pytest.raises(NotMonomorphismError):
        pushout(collapse, SimplicialMap.identity(interval))


def test_disjoint_union_counts():
    """Test the disjoint union of a triangle and a point."""
    union = disjoint_union(standard_simplex(2), point())
    assert union.space.counts() == (4, 3, 1)


def test_subcomplex_closes_downwards(triangle):
    """Test that a subcomplex contains the faces of its generators."""
    sub = subcomplex(triangle, ["<0,2>"], "edge")
    assert sorted(sub.ids()) == ["0", "2", "<0,2>"]


def test_isomorphism_respects_marking():
    """Test that marking distinguishes otherwise isomorphic intervals."""
    plain = standard_simplex(1)
    marked = plain.with_marking(["<0,1>"])
    assert not is_isomorphic(plain, marked)
    assert is_isomorphic(plain, marked, respect_marking=False)


def test_isomorphism_witness_is_a_map():
    """Test that a found isomorphism is a valid simplicial map."""
    iso = find_isomorphism(horn(2, 1), spine(2))
    assert iso is not None
    assert iso.problems() == []


def test_horn_is_not_simplex():
    """Test that a horn and the simplex are not isomorphic."""
    assert not is_isomorphic(horn(2, 1), standard_simplex(2))
