import pytest

from src.app.core.exceptions import InsufficientDimensionError
from src.app.services.categories import (
    builtin_corpus,
    cyclic_group_category,
    discrete_category,
    nerve_truncated,
    pi0,
    poset_category,
    twisted_arrow_cat,
)
from src.app.services.constructions import spine, standard_simplex
from src.app.services.isomorphism import find_isomorphism
from src.app.services.twisted import s_lower, tw_simplicial


@pytest.fixture
def corpus():
    """Create the builtin corpus keyed by name."""
    return {category.name: category for category in builtin_corpus()}


def test_corpus_names(corpus):
    """Test that the corpus holds ten distinct categories."""
    assert len(corpus) == 10
    assert {"[0]", "[1]", "[2]", "Z/2", "Z/3", "span", "square", "iso"} <= set(corpus)


@pytest.mark.parametrize("name", ["[0]", "[1]", "[2]", "discrete(3)", "Z/2", "Z/3", "parallel", "span", "square", "iso"])
def test_corpus_axioms(corpus, name):
    """Test the unit and associativity laws of every corpus category."""
    assert corpus[name].check_axioms() == []


def test_pi0():
    """Test components of categories and simplicial sets."""
    assert len(pi0(discrete_category(3))) == 3
    assert len(pi0(poset_category(2))) == 1
    assert len(pi0(spine(3))) == 1


def test_groupoids():
    """Test that groups are groupoids and posets are not."""
    assert cyclic_group_category(3).is_groupoid()
    assert not poset_category(1).is_groupoid()


def test_nerve_of_ordinal():
    """Test that N([2]) is Delta^2."""
    nerve = nerve_truncated(poset_category(2), 3)
    assert nerve.counts() == (3, 3, 1)
    assert nerve.complete_through is None
    assert find_isomorphism(nerve, standard_simplex(2), respect_marking=False) is not None


def test_nerve_of_group_is_truncated():
    """Test that a truncated nerve of Z/2 remembers where it stops."""
    nerve = nerve_truncated(cyclic_group_category(2), 2)
    assert nerve.counts() == (1, 1, 1)
    assert nerve.complete_through == 2


def test_twisted_arrows_of_interval():
    """Test that Tw([1]) has three objects and two non-identity morphisms."""
    tw = twisted_arrow_cat(poset_category(1))
    assert len(tw.objects) == 3
    assert len(tw.non_identities()) == 2
    assert tw.check_axioms() == []


@pytest.mark.parametrize("n", [1, 2])
def test_twisted_nerve_agrees(n):
    """Test Tw(N([n])) = N(Tw([n])) through dimension 3."""
    category = poset_category(n)
    left = tw_simplicial(nerve_truncated(category, 7), 3)
    right = nerve_truncated(twisted_arrow_cat(category), 3)
    assert find_isomorphism(left, right, respect_marking=False, budget=max(len(left), len(right))) is not None


def test_twisted_nerve_needs_enough_dimensions():
    """Test that Tw of a truncated nerve refuses to go past the truncation."""
    with pytest.raises(InsufficientDimensionError):
        tw_simplicial(nerve_truncated(cyclic_group_category(2), 2), 1)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_s_lower_of_simplex(n):
    """Test that s_*(Delta^n) is Delta^(2n+1)."""
    doubled = s_lower(standard_simplex(n)).space
    assert find_isomorphism(doubled, standard_simplex(2 * n + 1), respect_marking=False) is not None
