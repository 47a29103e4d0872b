import numpy as np
import pytest

from arknit import fixtures
from arknit import linalg as la
from arknit.ar import (
    PreconditionUnmet,
    ar_triangle,
    classify,
    classify_tree,
    compose_chain,
    connecting_map,
    knit,
    sample_chain,
    serre_check,
    subadditive_witness,
    subadditivity_check,
    tree_class,
    verify_ar,
    verify_graph,
)
from arknit.complexes import l_p, shift, stalk, strip_contractibles
from arknit.homotopy import end_structure, hom_space, is_indecomposable, is_null_homotopic, iso_in_K


@pytest.fixture(scope="module")
def knitted():
    out = {}
    for name, A in [
        ("F5", fixtures.field(5)),
        ("A2", fixtures.linear_a(2)),
        ("A3", fixtures.linear_a(3)),
        ("D4", fixtures.d4()),
    ]:
        out[name] = (A, knit(A, window=(-3, 3)))
    A = fixtures.dual_numbers(3)
    out["DN"] = (A, knit(A, budget=6, window=(-2, 2)))
    return out


def socle_dim(X):
    """Dimension of the part of Hom(X, tau X[1]) killed by rad End(X), from scratch."""
    t = ar_triangle(X)
    H = hom_space(X, shift(t.tau_X, 1))
    st = end_structure(X)
    rows = []
    for j in range(st.radical.shape[1]):
        r = st.end.element(st.radical[:, j])
        rows.append(np.stack([H.class_of(H.rep(k).compose(r)) for k in range(H.dim)], axis=1))
    if not rows:
        return H.dim
    return la.kernel_basis(np.vstack(rows), X.algebra.p).shape[1]


def test_field_connecting_map_is_identity(F5):
    X = stalk(F5, 0)
    w = connecting_map(X)
    assert w.target.key() == X.key()
    c = w.f(0)[0, 0, 0]
    assert c != 0 and w.f(0).shape == (1, 1, 1)


def test_dual_numbers_connecting_map(DN):
    X = stalk(DN, 0)
    w = connecting_map(X)
    assert w.target.key() == X.key()
    # w is a nonzero multiple of x
    x = DN.element([(1, ["x"])])
    c = w.f(0)[0, 0]
    assert c.any() and la.rank(np.column_stack([c, x]), 3) == 1
    assert socle_dim(X) == 1


def test_a2_connecting_map_unique_up_to_scalar(A2):
    for i in range(2):
        assert socle_dim(stalk(A2, i)) == 1


def test_field_triangle_has_zero_middle(F5):
    t = ar_triangle(stalk(F5, 0))
    assert t.middle.is_zero() and t.checks["w_nonzero"]
    assert t.tau_X.key() == stalk(F5, 0, degree=1).key()


def test_a2_triangle(A2):
    X = stalk(A2, 0)
    t = ar_triangle(X)
    assert not t.middle.is_zero()
    assert l_p(t.middle) <= l_p(t.tau_X) + l_p(X)
    assert t.checks["gf_null"] and t.checks["tau_indecomposable"]


def test_dual_numbers_triangles(knitted):
    A, g = knitted["DN"]
    for r, t in g.triangles.items():
        assert iso_in_K(t.tau_X, shift(t.X, -1))
        assert g.tau[r] == (r, -1)


def test_verify_with_single_object(A2):
    X = stalk(A2, 0)
    rep = verify_ar(ar_triangle(X), [(None, X)])
    assert rep.ok and rep.checked == 1


def test_verify_field_shifts(F5):
    X = stalk(F5, 0)
    universe = [((0, s), shift(X, s)) for s in range(-3, 4)]
    rep = verify_ar(ar_triangle(X), universe, (0, 0), (0, -1))
    assert rep.ok and rep.checked == 7


def test_verify_without_node_labels(A3):
    X = stalk(A3, 1)
    t = ar_triangle(X)
    universe = [(None, shift(stalk(A3, i), s)) for i in range(3) for s in (-1, 0, 1)]
    universe += [(None, t.tau_X), (None, t.middle)]
    assert verify_ar(t, universe).ok


def test_verify_a3_window(knitted):
    A, g = knitted["A3"]
    reports = verify_graph(g)
    assert len(reports) == 6 and all(r.ok for r in reports.values())


def test_component_sizes(knitted):
    sizes = {k: len(g.reps) for k, (_, g) in knitted.items() if k != "DN"}
    assert sizes == {"F5": 1, "A2": 3, "A3": 6, "D4": 12}
    for k in ("F5", "A2", "A3", "D4"):
        assert knitted[k][1].complete


def test_field_component_is_isolated(knitted):
    A, g = knitted["F5"]
    assert g.arrows == {} and g.tau == {0: (0, -1)}
    assert tree_class(g) == "A1"


def test_no_loops_and_no_anomalies(knitted):
    for name, (A, g) in knitted.items():
        assert not any(a == b and k == 0 for (a, k, b) in g.arrows), name
        assert g.anomalies == [], name


def test_representatives_are_indecomposable_and_distinct(knitted):
    A, g = knitted["A3"]
    for R in g.reps:
        assert is_indecomposable(R)
        assert strip_contractibles(R).stripped == ()
    for i, R in enumerate(g.reps):
        for S in g.reps[i + 1:]:
            for s in (-2, -1, 0, 1, 2):
                assert not iso_in_K(R, shift(S, s))


def test_knitting_is_deterministic():
    A = fixtures.linear_a(3)
    g1, g2 = knit(A), knit(fixtures.linear_a(3))
    assert [R.describe() for R in g1.reps] == [R.describe() for R in g2.reps]
    assert g1.arrows == g2.arrows and g1.tau == g2.tau


def test_forward_and_backward_translates_agree(knitted):
    for name in ("A2", "A3", "D4"):
        A, g = knitted[name]
        for r, (a, k) in g.tau_inv.items():
            assert g.tau[a] == (r, -k)


def test_arrows_match_part_maps(knitted):
    for name in ("A2", "A3", "D4"):
        A, g = knitted[name]
        for r, maps in g.part_maps.items():
            assert sum(m for (a, k, b), m in g.arrows.items() if b == r) == len(maps)
            for src, f in maps:
                assert f.source.key() == g.node_complex(src).key()
                assert f.target.key() == g.reps[r].key()
                assert not is_null_homotopic(f)


def test_classification_verdicts(knitted):
    assert classify(knitted["F5"][1], knitted["F5"][0]).label() == "Simple_A1"
    for name in ("A2", "A3", "D4"):
        A, g = knitted[name]
        v = classify(g, A)
        assert v.label() == f"FiniteType_Dynkin({name})"
        assert v.note.endswith(f"derived equivalent to k{name}")
    A, g = knitted["DN"]
    v = classify(g, A)
    assert v.kind == "InfiniteOrInconclusive"
    assert v.evidence["candidate_tree"] == "A_infinity" and v.evidence["ladder"]


def test_periodicity(knitted):
    assert set(knitted["A2"][1].periodicity.values()) == {(3, -2)}
    assert set(knitted["A3"][1].periodicity.values()) == {(4, -2), (2, -1)}
    assert set(knitted["D4"][1].periodicity.values()) == {(3, -1)}
    assert set(knitted["F5"][1].periodicity.values()) == {(1, -1)}


def test_classify_tree_shapes():
    def path(n):
        return set(range(n)), {(i, i + 1): 1 for i in range(n - 1)}

    assert classify_tree(*path(1)) == "A1"
    assert classify_tree(*path(4)) == "A4"
    star = ({0, 1, 2, 3}, {(0, 1): 1, (0, 2): 1, (0, 3): 1})
    assert classify_tree(*star) == "D4"
    e6 = (set(range(6)), {(0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1, (2, 5): 1})
    assert classify_tree(*e6) == "E6"
    cycle = ({0, 1, 2}, {(0, 1): 1, (1, 2): 1, (0, 2): 1})
    assert classify_tree(*cycle) is None
    double = ({0, 1}, {(0, 1): 2})
    assert classify_tree(*double) is None


def test_serre_symmetry_small(knitted):
    for name in ("F5", "A2", "A3"):
        assert serre_check(knitted[name][1]) == []


def test_subadditivity_of_l_p(knitted):
    for name, (A, g) in knitted.items():
        for r, mid, total, stripped in subadditivity_check(g):
            assert mid <= total
            assert (mid == total) == (stripped == 0)


def test_subadditive_function_field(knitted):
    A, g = knitted["F5"]
    table = subadditive_witness((0, 0), g, 1, -1)
    assert len(set(table.values.values())) == 1
    assert all(row["d_middle"] == 0 for row in table.triangles)


def test_subadditive_function_a2(knitted):
    A, g = knitted["A2"]
    n, m = g.periodicity[0]
    table = subadditive_witness((0, 0), g, n, m)
    for row in table.triangles:
        assert row["d_middle"] <= row["d_tau"] + row["d_end"]
    at_x = [row for row in table.triangles if row["node"] == (0, 0)][0]
    assert at_x["d_middle"] < at_x["d_tau"] + at_x["d_end"]


def test_subadditive_function_dual_numbers(knitted):
    A, g = knitted["DN"]
    table = subadditive_witness((0, 0), g, 1, -1)
    assert all(0 < v < 100 for v in table.values.values())
    for row in table.triangles:
        assert row["d_middle"] <= row["d_tau"] + row["d_end"]


def test_subadditive_function_needs_periodicity(knitted):
    A, g = knitted["A2"]
    with pytest.raises(PreconditionUnmet):
        subadditive_witness((0, 0), g, 2, -1)


def test_short_chains_compose_nontrivially(knitted):
    A, g = knitted["A2"]
    rng = np.random.default_rng(0)
    chain = sample_chain(g, 1, rng)
    assert len(chain) == 1 and not is_null_homotopic(compose_chain(chain))
