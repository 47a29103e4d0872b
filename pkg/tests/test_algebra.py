
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arknit.algebra import (
    AModule,
    NonAdmissibleRelation,
    NotFiniteDimensional,
    PresentationError,
    QuiverPresentation,
    ResolutionBoundExceeded,
    build_algebra,
    hom_projectives,
    indec_injective,
    indec_projective,
    is_simple_algebra,
    min_proj_resolution,
    module_iso,
    nakayama_projective,
    opposite_algebra,
)
from arknit.complexes import realize


def simple_module(A, i):
    dims = tuple(1 if v == i else 0 for v in range(A.n_vertices))
    maps = tuple(np.zeros((dims[A.arrow_tgt[k]], dims[A.arrow_src[k]]), dtype=np.int64) for k in range(A.n_arrows))
    return AModule(A, dims, maps)


def count_paths(n_vertices, arrows, max_len):
    """Paths of length <= max_len, trivial paths included."""
    total = n_vertices
    frontier = [[a] for a in range(len(arrows))]
    length = 1
    while frontier and length <= max_len:
        total += len(frontier)
        frontier = [p + [b] for p in frontier for b in range(len(arrows)) if arrows[p[-1]][2] == arrows[b][1]]
        length += 1
    return total


def test_field_dimension(F5):
    assert F5.dim == 1 and is_simple_algebra(F5)


def test_a2_dimension_matches_path_count(A2):
    pres = A2.presentation
    assert A2.dim == 3 == count_paths(2, pres.arrows, 5)
    assert not is_simple_algebra(A2)


def test_dual_numbers_dimension(DN):
    assert DN.dim == 2
    assert not is_simple_algebra(DN)


def test_paths_compose_left_to_right(A3):
    a, b = A3.element([(1, ["a1"])]), A3.element([(1, ["a2"])])
    ab = A3.element([(1, ["a1", "a2"])])
    assert np.array_equal(A3.product(a, b), ab)
    assert not A3.product(b, a).any()


def test_projective_dimensions(F5, A2, DN):
    assert indec_projective(F5, 0).total_dim == 1
    # P_1 is spanned by e_1 and the arrow leaving 1
    assert indec_projective(A2, 0).dims == (1, 1)
    assert indec_projective(A2, 1).dims == (0, 1)
    assert indec_projective(DN, 0).total_dim == 2


def test_injectives(F5, A2, DN):
    assert indec_injective(F5, 0).dims == indec_projective(F5, 0).dims
    assert module_iso(indec_injective(DN, 0), indec_projective(DN, 0)) is not None
    # the injective hull of the sink simple is the whole path 1 -> 2
    assert indec_injective(A2, 1).dims == (1, 1)
    assert indec_injective(A2, 0).dims == (1, 0)


@pytest.mark.parametrize("name", ["F5", "A2", "A3", "D4", "DN"])
def test_nakayama_images_are_injectives(name, request):
    A = request.getfixturevalue(name)
    for i in range(A.n_vertices):
        nu = nakayama_projective(A, i).module
        assert nu.satisfies_relations()
        assert module_iso(nu, indec_injective(A, i)) is not None


def test_nakayama_on_dual_numbers_is_identity_up_to_iso(DN):
    assert module_iso(nakayama_projective(DN, 0).module, indec_projective(DN, 0)) is not None


def test_hom_projectives(F5, A2):
    assert len(hom_projectives(F5, 0, 0)) == 1
    # Hom(P_2, P_1) is the arrow, Hom(P_1, P_2) = 0
    assert len(hom_projectives(A2, 1, 0)) == 1
    assert len(hom_projectives(A2, 0, 1)) == 0


@pytest.mark.parametrize("name", ["F5", "A2", "A3", "D4", "DN"])
def test_dimension_is_sum_of_hom_spaces(name, request):
    A = request.getfixturevalue(name)
    n = A.n_vertices
    assert A.dim == sum(len(hom_projectives(A, i, j)) for i in range(n) for j in range(n))


def test_resolution_of_projective_is_stalk(A2):
    X = min_proj_resolution(A2, indec_projective(A2, 0))
    assert X.support == (0, 0) and X.labels(0) == (0,)


def test_resolution_of_source_simple(A2):
    X = min_proj_resolution(A2, simple_module(A2, 0))
    assert X.labels(0) == (0,) and X.labels(-1) == (1,)
    C = realize(X)
    assert [sum(C.homology_dims(n)) for n in (-1, 0)] == [0, 1]
    assert C.homology_dims(0) == (1, 0)


def test_resolution_of_dual_numbers_simple_is_unbounded(DN):
    with pytest.raises(ResolutionBoundExceeded):
        min_proj_resolution(DN, simple_module(DN, 0), 5)


@pytest.mark.parametrize("name", ["F5", "A2", "A3", "D4", "DN"])
def test_resolutions_of_simples_have_homology_in_degree_zero(name, request):
    A = request.getfixturevalue(name)
    for i in range(A.n_vertices):
        S = simple_module(A, i)
        try:
            X = min_proj_resolution(A, S, 6)
        except ResolutionBoundExceeded:
            continue
        C = realize(X)
        for n in X.terms:
            want = S.dims if n == 0 else (0,) * A.n_vertices
            assert C.homology_dims(n) == want


def test_opposite(F5, A2, DN):
    assert opposite_algebra(F5).dim == 1
    op = opposite_algebra(A2)
    k = op.arrow_index("a1")
    assert (op.arrow_src[k], op.arrow_tgt[k]) == (1, 0)
    assert opposite_algebra(DN).dim == 2


@pytest.mark.parametrize("name", ["A2", "A3", "D4", "DN"])
def test_double_opposite_has_same_table(name, request):
    A = request.getfixturevalue(name)
    B = build_algebra(A.presentation.opposite().opposite())
    assert B.basis == A.basis and np.array_equal(B.mult, A.mult)


def test_opposite_map_reverses_products(A3):
    m = A3.op_matrix
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.integers(0, 5, A3.dim), rng.integers(0, 5, A3.dim)
        lhs = A3.to_opposite(A3.product(a, b))
        rhs = A3.opposite.product(A3.to_opposite(b), A3.to_opposite(a))
        assert np.array_equal(lhs, rhs)
    assert m.shape == (A3.dim, A3.dim)


def test_length_one_relation_rejected():
    pres = QuiverPresentation(("1", "2"), (("a", "1", "2"),), (((1, ("a",)),),), 5)
    with pytest.raises(NonAdmissibleRelation):
        build_algebra(pres)


def test_free_loop_is_infinite_dimensional():
    pres = QuiverPresentation(("1",), (("x", "1", "1"),), (), 5)
    with pytest.raises(NotFiniteDimensional):
        build_algebra(pres, path_bound=6)


def test_unknown_arrow_endpoint_rejected():
    with pytest.raises(PresentationError):
        build_algebra(QuiverPresentation(("1",), (("a", "1", "9"),), (), 5))


def test_commutative_square_relation():
    pres = QuiverPresentation(
        ("1", "2", "3", "4"),
        (("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")),
        (((1, ("a", "b")), (-1, ("c", "d"))),),
        5,
    )
    A = build_algebra(pres)
    # 4 idempotents, 4 arrows, one surviving path of length 2
    assert A.dim == 9
    assert np.array_equal(A.element([(1, ["a", "b"])]), A.element([(1, ["c", "d"])]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.sampled_from([2, 3, 5]), st.data())
def test_associativity(n, p, data):
    A = build_algebra(QuiverPresentation(
        tuple(str(i) for i in range(n)),
        tuple((f"a{i}", str(i), str(i + 1)) for i in range(n - 1)),
        (),
        p,
    ))
    vec = st.lists(st.integers(0, p - 1), min_size=A.dim, max_size=A.dim).map(np.array)
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    assert np.array_equal(A.product(A.product(a, b), c), A.product(a, A.product(b, c)))
