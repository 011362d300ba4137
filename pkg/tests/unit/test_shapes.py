import pytest

from src.app.core.exceptions import InvalidSimplicialDataError
from src.app.services.anodyne import AnodyneClass
from src.app.services.anodyne_search import search_decomposition
from src.app.services.constructions import boundary, standard_simplex
from src.app.services.shapes import SHAPE_KINDS, ShapeBuilder, r_map
from src.app.services.simplex_ops import identity
from src.app.services.suite import SHAPE_COUNTS


@pytest.fixture
def point_shapes():
    """Create the shape builder for K = Delta^0."""
    return ShapeBuilder(standard_simplex(0))


@pytest.mark.parametrize("kind", SHAPE_KINDS)
def test_shape_counts_over_point(point_shapes, kind):
    """Test vertices, edges and marked edges of every shape for K = Delta^0."""
    assert point_shapes.shape(kind).counts() == SHAPE_COUNTS[0][kind]


@pytest.mark.slow
@pytest.mark.parametrize("kind", SHAPE_KINDS)
def test_shape_counts_over_interval(kind):
    """Test vertices, edges and marked edges of every shape for K = Delta^1."""
    assert ShapeBuilder(standard_simplex(1)).shape(kind).counts() == SHAPE_COUNTS[1][kind]


@pytest.mark.slow
def test_glued_shape_keeps_aliases():
    """Test that G(Delta^1) lists 8 distinct labels on its 6 vertices."""
    g = ShapeBuilder(standard_simplex(1)).g
    labels = g.vertex_labels()
    assert len(g.space.vertices()) == 6
    assert len(labels) == 8
    assert len(set(labels)) == 8
    glued = [v for v in g.space.vertices() if g.space.aliases.get(v)]
    assert not {g.space.label(v) for v in glued} & set(labels)


def test_flat_cone_has_no_marking(point_shapes):
    """Test that F2 carries no marked edges."""
    assert point_shapes.f2.space.marked == frozenset()


def test_unknown_shape(point_shapes):
    """Test that unknown shape kinds are refused."""
    with pytest.raises(InvalidSimplicialDataError):
        point_shapes.shape("F9")


@pytest.mark.parametrize("m", [0, 1])
def test_section_splits_projection(m):
    """Test that p o e is the identity of F3."""
    builder = ShapeBuilder(standard_simplex(m))
    composite = builder.p().compose(builder.section_e())
    for x in composite.source.ids():
        assert composite.image_of(x) == (identity(composite.source.dim(x)), x)


def test_section_needs_a_simplex():
    """Test that e is only built over standard simplices."""
    with pytest.raises(InvalidSimplicialDataError):
        ShapeBuilder(boundary(2)).section_e()


def test_r_ignores_marking():
    """Test that r is a map of simplicial sets but not of marked ones."""
    r = r_map()
    assert r.problems(marked=False) == []
    assert r.problems(marked=True)


@pytest.mark.parametrize("kind", ["i0", "i1", "i2"])
def test_comparison_maps_are_marked_anodyne(point_shapes, kind):
    """Test that the comparison maps over a point have marked certificates."""
    inclusion = point_shapes.comparison_map(kind)
    outcome = search_decomposition(inclusion, AnodyneClass.MARKED, with_witness=False)
    assert outcome.status == "found"
