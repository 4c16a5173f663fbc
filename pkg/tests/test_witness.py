import pytest

from epkit.classes import is_hypo_EP, is_p_hypo_EP
from epkit.matrix import Matrix, rank
from epkit.polynomial import Polynomial
from epkit.scalar import FLOAT
from epkit.witness import (
    GenSpec,
    QueryError,
    SeparationQuery,
    candidate_rng,
    consensus_corpus,
    fixture,
    parse_query,
    query_atoms,
    random_matrix,
    random_polynomial,
    search_separation,
)

p1 = Polynomial([0, 0, -1, 1])


def test_fixtures():
    assert fixture("example1") == Matrix([[1, 0, 2, 3], [0, 2, 0, 0], [0, 0, 0, 3], [0, 0, 0, 0]])
    assert fixture("example2") == Matrix([[1, 1], [0, 0]])
    assert fixture("nilpotent2") == Matrix([[0, 1], [0, 0]])
    assert fixture("example1_poly") == p1
    with pytest.raises(KeyError):
        fixture("example3")


def test_random_matrix_rank_and_determinism():
    assert random_matrix(GenSpec(3, 0)).is_zero()
    for r in range(4):
        spec = GenSpec(3, r, seed=99)
        A = random_matrix(spec)
        assert rank(A) == r
        assert random_matrix(spec) == A
    f = random_matrix(GenSpec(4, 2, backend=FLOAT, seed=1, cols=3))
    assert f.shape == (4, 3) and f.backend == FLOAT and rank(f) == 2


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec(2, 3)
    with pytest.raises(ValueError):
        GenSpec(2, 1, entry_bound=0)
    with pytest.raises(ValueError):
        GenSpec(2, 1, seed=-1)


def test_streams_are_independent_of_order():
    a = [random_polynomial(candidate_rng(4, i)) for i in range(5)]
    b = [random_polynomial(candidate_rng(4, i)) for i in reversed(range(5))][::-1]
    assert a == b
    assert all(p.vanishes_at_zero() and 1 <= p.degree <= 4 for p in a)


def test_corpus_is_reproducible():
    assert consensus_corpus(6, 3) == consensus_corpus(6, 3)


@pytest.mark.parametrize("text, atoms", [
    ("p-HEP & !HEP", {"p-HEP", "HEP"}),
    ("pHEP∧¬HEP", {"p-HEP", "HEP"}),
    ("(EP | SD) & !normal", {"EP", "SD", "normal"}),
    ("2-HEP & !2-EP", {"n-HEP", "n-EP"}),
])
def test_query_parsing(text, atoms):
    assert query_atoms(parse_query(text)) == atoms


@pytest.mark.parametrize("text", ["", "EP &", "foo", "(EP", "EP EP"])
def test_bad_queries(text):
    with pytest.raises(QueryError):
        parse_query(text)


def test_fixture_path():
    q = SeparationQuery("pHEP&!HEP", (4,), budget=1)
    w = search_separation(q, p1, fixtures=[fixture("example1")])
    assert w is not None and w.source == "fixture"
    assert w.matrix == fixture("example1")
    assert w.report["p-hypo-EP"].holds and not w.report["hypo-EP"].holds


def test_random_search_finds_verified_witness():
    q = SeparationQuery("p-HEP & !HEP", (3, 4), budget=2000, seed=2024)
    w = search_separation(q, p1)
    assert w is not None and w.source == "random"
    assert is_p_hypo_EP(w.matrix, p1).holds and not is_hypo_EP(w.matrix).holds
    # independent of the worker count
    w2 = search_separation(q, p1, workers=2, chunk=64)
    assert w2.index == w.index and w2.matrix == w.matrix


def test_contradiction_and_finite_dim_collapse():
    assert search_separation(SeparationQuery("EP & !EP", (2, 3), budget=200)) is None
    # hypo-EP coincides with EP for matrices, so no separating example exists
    assert search_separation(SeparationQuery("HEP & !EP", (2,), budget=300)) is None


def test_missing_polynomial():
    with pytest.raises(QueryError):
        search_separation(SeparationQuery("p-EP", (2,), budget=5))
