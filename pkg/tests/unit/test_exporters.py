import json

import pytest

from src.app.core.exceptions import OperadAxiomError, SchemaValidationError
from src.app.services.anodyne import AnodyneClass, AttachmentCertificate, verify_certificate
from src.app.services.anodyne_search import search_decomposition
from src.app.services.categories import FiniteCategory, poset_category, twisted_arrow_cat
from src.app.services.constructions import horn, spine, standard_simplex
from src.app.services.exporters import export, import_file, parse_document, to_dot
from src.app.services.isomorphism import is_isomorphic
from src.app.services.operads import check_operad_axioms
from src.app.services.simplicial_set import SimplicialMap, SimplicialSet


@pytest.fixture
def marked_triangle():
    """Create Delta^2 with its first edge marked."""
    return standard_simplex(2).with_marking(["<0,1>"])


def round_trip(item):
    """Export to JSON text and read it back."""
    return parse_document(json.loads(export(item)))


def test_simplicial_set_round_trip(marked_triangle):
    """Test that a marked simplicial set survives JSON export."""
    back = round_trip(marked_triangle)
    assert isinstance(back, SimplicialSet)
    assert back.counts() == marked_triangle.counts()
    assert back.marked == marked_triangle.marked
    assert is_isomorphic(back, marked_triangle)


def test_map_round_trip():
    """Test that an inclusion survives JSON export."""
    inclusion = SimplicialMap.inclusion(horn(2, 1), standard_simplex(2), "horn")
    back = round_trip(inclusion)
    assert isinstance(back, SimplicialMap)
    assert back.assignment == inclusion.assignment
    assert back.name == "horn"


def test_certificate_round_trip():
    """Test that an exported certificate still replays."""
    delta = standard_simplex(2)
    inclusion = SimplicialMap.inclusion(horn(2, 1), delta, "Lambda^2_1")
    outcome = search_decomposition(inclusion, AnodyneClass.INNER, with_witness=False)
    back = round_trip(outcome.certificate)
    assert isinstance(back, AttachmentCertificate)
    assert back.target_class == AnodyneClass.INNER
    assert verify_certificate(back).accepted


def test_category_round_trip():
    """Test that a category keeps its composition table."""
    back = round_trip(poset_category(2))
    assert isinstance(back, FiniteCategory)
    assert len(back.objects) == 3
    assert len(back.morphisms) == 6
    assert back.check_axioms() == []


def test_dot_of_twisted_arrows():
    """Test that Tw([1]) draws three nodes and two edges."""
    source = to_dot(twisted_arrow_cat(poset_category(1)))
    assert source.startswith("digraph")
    assert source.count("->") == 2


def test_dot_of_spine():
    """Test that the 1-skeleton of a spine has one edge per segment."""
    assert export(spine(3), "dot").count("->") == 3


def test_unknown_format():
    """Test that only json and dot are exported."""
    with pytest.raises(ValueError):
        export(spine(1), "yaml")


def test_operad_document_without_unit():
    """Test that importing a non-unital operad table fails unitality."""
    data = {"name": "bare", "colors": ["x"], "ops": {"1": {"x->x": ["id"]}}, "identities": {"x": "id"}}
    with pytest.raises(OperadAxiomError, match="unitality"):
        parse_document(data)


def test_operad_document_with_unit():
    """Test importing the operad with one nullary operation."""
    data = {
        "name": "pointed",
        "colors": ["x"],
        "ops": {"0": {"->x": ["e"]}, "1": {"x->x": ["id"]}},
        "identities": {"x": "id"},
        "units": {"x": "e"},
    }
    operad = parse_document(data)
    assert operad.unit("x") == "e"
    assert check_operad_axioms(operad, 2).ok


def test_operad_document_with_bad_signature():
    """Test that a signature under the wrong arity is reported."""
    data = {"colors": ["x"], "ops": {"2": {"x->x": ["id"]}}, "identities": {"x": "id"}}
    with pytest.raises(SchemaValidationError):
        parse_document(data)


def test_marked_vertex_is_a_schema_error():
    """Test that only edges may be marked in a document."""
    data = {"dims": 0, "simplices": [{"id": "a", "dim": 0}], "marked": ["a"]}
    with pytest.raises(SchemaValidationError) as info:
        parse_document(data)
    assert info.value.details["errors"]


def test_unrecognized_document():
    """Test that documents of no known kind are refused."""
    with pytest.raises(SchemaValidationError):
        parse_document({"vertices": 3})


def test_import_file(tmp_path, marked_triangle):
    """Test reading an exported file back from disk."""
    path = tmp_path / "triangle.json"
    path.write_text(export(marked_triangle))
    assert is_isomorphic(import_file(path), marked_triangle)


def test_import_file_rejects_non_json(tmp_path):
    """Test that a file that is not JSON is a schema error."""
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SchemaValidationError):
        import_file(path)
