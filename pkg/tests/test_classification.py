from fractions import Fraction

import pytest

from starcat.classification import (CHI_SAMPLE, ClassificationError, CollapseFunctor, DiagonalFunctor,
                                    ModificationError, ScalarMismatchError, SetPartition, bell_number,
                                    build_CWR_model, build_s_modification, check_modification_axiom,
                                    check_refinement_chain, chi_invariant, classify, coarsening_chains,
                                    consistency_CWR_presentation_vs_model, enumerate_partitions,
                                    identity_modification, induced_component_is_identity, is_transitive,
                                    labeled_action_matrices, modification_suite, natural_transformations,
                                    naturality_check, naturality_counterexample, normalize_modification,
                                    pullback_ideal, refinement_transformation, scalar_proportionality,
                                    simple_transitive_check, star_leaf_swaps, transported_s_modification,
                                    two_sided_socle, vertex_swap)
from starcat.exact_linalg import Field, Matrix, Subspace
from starcat.quiver_algebra import build_star_quotient
from starcat.star_bicategory import (StableIdeal, cell_birepresentation, stable_closure,
                                     subrepresentation_N)

import oracles


# ------------------------------------------------------------------ partitions

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_partitions_against_oracle(n):
    # [DERIVED] brute-force restricted growth strings and sympy's Bell numbers
    ours = {tuple(P.blocks) for P in enumerate_partitions(n)}
    theirs = set()
    for rgs in oracles.restricted_growth_strings(n):
        blocks = {}
        for k, b in enumerate(rgs, 1):
            blocks.setdefault(b, []).append(k)
        theirs.add(((0,),) + tuple(sorted(tuple(v) for v in blocks.values())))
    assert ours == theirs
    assert len(ours) == bell_number(n) == oracles.bell(n)


def test_bell_numbers_published():
    # [PAPER] 1, 2, 5, 15, 52 classes for n = 1..5
    assert [bell_number(n) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_set_partition_basics():
    P = SetPartition.from_blocks([[3, 1], [0], [2]])
    assert P.blocks == ((0,), (1, 3), (2,))
    assert str(P) == "{0}{1,3}{2}"
    assert P.rank == 2
    assert P.block_of == {0: 0, 1: 1, 3: 1, 2: 2}
    assert P.transversal() == [0, 1, 2]
    assert P.to_json() == [[0], [1, 3], [2]]
    assert SetPartition.total(3).coarsens(P)
    assert P.coarsens(SetPartition.discrete(3))
    assert not P.coarsens(SetPartition.total(3))
    assert not P.coarsens(SetPartition.discrete(2))
    with pytest.raises(ValueError):
        SetPartition.from_blocks([[0, 1], [2]])
    with pytest.raises(ValueError):
        SetPartition(3, ((0,), (1, 2)))
    with pytest.raises(ValueError):
        enumerate_partitions(0)


# ------------------------------------------------------------------- models

@pytest.mark.parametrize("n", [1, 2, 3])
def test_model_action_rows_follow_blocks(n):
    for P in enumerate_partitions(n):
        mats = labeled_action_matrices(build_CWR_model(P))
        assert set(mats) == {"Reg"} | {"F%d" % k for k in range(n + 1)}
        blk = P.block_of
        for j in range(n + 1):
            for k in range(n + 1):
                assert (mats["F%d" % j] == mats["F%d" % k]) == (blk[j] == blk[k])
        assert mats["Reg"] == [[int(i == j) for j in range(P.rank + 1)] for i in range(P.rank + 1)]


def test_discrete_model_is_the_cell_representation():
    for n in (1, 2, 3):
        m = labeled_action_matrices(build_CWR_model(SetPartition.discrete(n)))
        assert m == labeled_action_matrices(cell_birepresentation(n))


def test_action_matrix_frozen_values():
    # [DERIVED] F_0 on A_2-proj sends P_0 to P_0^2 and P_k to P_0
    m = labeled_action_matrices(build_CWR_model(SetPartition.from_blocks([[0], [1, 2]])))
    assert m == {"Reg": [[1, 0], [0, 1]], "F0": [[2, 1], [0, 0]],
                 "F1": [[0, 0], [2, 1]], "F2": [[0, 0], [2, 1]]}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_presentation_consistent_with_model(n):
    for P in enumerate_partitions(n):
        rep = consistency_CWR_presentation_vs_model(P)
        assert rep.ok, (str(P), rep.witness)
        assert rep.indecomposables == P.rank + 1
        assert rep.hom_table == rep.model_table
        assert rep.confluent and rep.saturated


# ---------------------------------------------------------- simple transitivity

@pytest.mark.parametrize("n", [1, 2, 3])
def test_models_simple_transitive(n):
    for P in enumerate_partitions(n):
        rep = build_CWR_model(P)
        st = simple_transitive_check(rep)
        assert st.verdict and st.transitive and st.socle_certificate, str(P)
        assert st.proper_ideals == []
        # the socle of A_r-proj is spanned by c on P_0
        assert st.socle_dims == {(0, 0): 1}


def test_subrepresentation_N_not_simple():
    st = simple_transitive_check(subrepresentation_N(2))
    assert st.transitive
    assert not st.verdict
    assert len(st.proper_ideals) == 1


def test_socle_of_cell_representation():
    soc = two_sided_socle(cell_birepresentation(2))
    assert {k: v.dim for k, v in soc.items() if v.dim} == {(0, 0): 1}


def test_pullback_of_trivial_ideals():
    for P in enumerate_partitions(3):
        theta = CollapseFunctor(P)
        model = theta.target
        zero = StableIdeal(model, {})
        assert pullback_ideal(theta, zero).is_zero()
        full = stable_closure(model, {(0, 0): Subspace.full(model.hom(0, 0).dim)})
        assert full.is_everything()
        assert pullback_ideal(theta, full).is_everything()


def test_collapse_functor_is_full_and_faithful_on_homs():
    P = SetPartition.from_blocks([[0], [1, 2], [3]])
    theta = CollapseFunctor(P)
    for i in range(4):
        for j in range(4):
            M = theta.hom_map(i, j)
            assert M.rank() == theta.source.hom(i, j).dim


def test_transitivity_helper():
    assert is_transitive(build_CWR_model(SetPartition.total(3)))


# ----------------------------------------------------------- modifications

def test_s_modification_components_frozen():
    # [DERIVED] s_{1,2} at n = 2 sends x⊗b_1 to x⊗b_2
    m = build_s_modification(1, 2, 2)
    X = next(Y for Y in m.rep.objects if Y.label == "F0")
    comp = m.components["F0"]
    assert [X.names[t] for t in comp.cols] == ["e0⊗b1", "a1⊗b1", "a2⊗b1", "c⊗b1"]
    assert [X.names[t] for t in comp.rows] == ["e0⊗b2", "a1⊗b2", "a2⊗b2", "c⊗b2"]
    assert comp.matrix == Matrix.identity(4)
    for lab in m.components:
        assert induced_component_is_identity(m, lab)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_s_modification_axiom(n):
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            m = build_s_modification(j, k, n)
            r = check_modification_axiom(m)
            assert r.ok, (j, k, r.witness)
            assert m.is_invertible()
        assert build_s_modification(j, j, n) == identity_modification(j, n)


def test_perturbation_is_detected():
    m = build_s_modification(1, 2, 2)
    for lab in m.components:
        r = check_modification_axiom(m.perturbed(lab, 2))
        assert not r.ok
        assert r.witness is not None and r.witness[0].startswith("F")
    assert check_modification_axiom(m.perturbed("F0", 2)).witness == ("F0", "F1")
    # a global scalar is still a modification
    assert check_modification_axiom(m.scaled(5)).ok


def test_scalar_proportionality():
    s = build_s_modification(1, 2, 3)
    assert scalar_proportionality(s, s.scaled(3)) == 3
    assert scalar_proportionality(s, s.scaled(Fraction(-1, 2))) == Fraction(-1, 2)
    via = build_s_modification(1, 3, 3).then(build_s_modification(3, 2, 3))
    assert scalar_proportionality(s, via) == 1
    assert normalize_modification(s.scaled(7), s) == s
    with pytest.raises(ScalarMismatchError):
        scalar_proportionality(s, s.perturbed("F1", 2))
    with pytest.raises(ScalarMismatchError):
        scalar_proportionality(s, build_s_modification(1, 3, 3))
    with pytest.raises(ScalarMismatchError):
        scalar_proportionality(s, s.scaled(0))


def test_composition_of_s_modifications():
    a = build_s_modification(1, 2, 2)
    b = build_s_modification(2, 1, 2)
    assert a.then(b) == identity_modification(1, 2)
    with pytest.raises(ModificationError):
        a.then(a)
    with pytest.raises(ValueError):
        build_s_modification(0, 1, 2)
    with pytest.raises(ValueError):
        build_s_modification(1, 2)


def test_transported_s_modification():
    P = SetPartition.from_blocks([[0], [1, 3], [2]])
    same = transported_s_modification(P, 1, 3)
    assert same == identity_modification(1, 2)
    other = transported_s_modification(P, 3, 2)
    assert other == build_s_modification(1, 2, 2)
    assert check_modification_axiom(other).ok


# ------------------------------------------------------------- χ invariant

@pytest.mark.parametrize("n", [1, 2, 3])
def test_chi_invariant_and_natural_transformations(n):
    A = build_star_quotient(n)
    for a in CHI_SAMPLE:
        F = DiagonalFunctor.with_chi(A, a)
        assert F.is_functor()[0]
        assert chi_invariant(F) == a
        for b in CHI_SAMPLE:
            sol = natural_transformations(F, DiagonalFunctor.with_chi(A, b))
            assert sol.invertible_exists == (a == b)
            if a == b:
                # [DERIVED] Nat(F, F) is the centre of A_n since F is an automorphism
                assert sol.dim == oracles.center_dim(n, star=True)


def test_chi_rejects_non_functor():
    A = build_star_quotient(2)
    # scaling a_1 and a_2 differently breaks a_1 b_1 = a_2 b_2
    F = DiagonalFunctor(A, {"a1": 2})
    assert not F.is_functor()[0]
    with pytest.raises(ValueError):
        chi_invariant(F)
    with pytest.raises(ValueError):
        chi_invariant(DiagonalFunctor.with_chi(A, 0))


def test_modification_suite_prime_field():
    rep = modification_suite(2, Field(101))
    assert rep["ok"]
    assert rep["perturbation"]["detected"]


# ------------------------------------------------------------- classification

@pytest.mark.parametrize("n", [1, 2, 3])
def test_classify_small(n):
    rep = classify(n)
    assert len(rep["classes"]) == rep["bell_number"] == oracles.bell(n)
    assert rep["pairwise_inequivalent"]
    labels = [c["label"] for c in rep["classes"]]
    assert labels == [str(P) for P in enumerate_partitions(n)]
    for c, P in zip(rep["classes"], enumerate_partitions(n)):
        assert c["simple_transitive"] and c["presentation_consistent"]
        assert c["base_algebra_rank"] == P.rank


def test_classify_parallel_matches_serial():
    assert classify(3, parallelism=2) == classify(3, parallelism=1)


def test_classify_without_presentation_check():
    rep = classify(2, check_presentation=False)
    assert all(c["presentation_consistent"] is None for c in rep["classes"])


def test_classification_error_carries_witness():
    err = ClassificationError("boom", ("x", 1))
    assert err.witness == ("x", 1)
    assert str(err) == "boom"


# ---------------------------------------------------------------- refinement

def test_refinement_identity_and_direct():
    P = SetPartition.discrete(3)
    Q = SetPartition.from_blocks([[0], [1, 2, 3]])
    r = refinement_transformation(P, P)
    assert r.well_defined and r.cone_compatible
    r = refinement_transformation(P, Q)
    assert r.well_defined and r.cone_compatible
    with pytest.raises(ValueError):
        refinement_transformation(Q, P)


def test_refinement_non_consecutive_pair():
    # {1,3} inside {1,2,3}: ξ_{1,3} goes to the composite through 2
    P = SetPartition.from_blocks([[0], [1, 3], [2]])
    Q = SetPartition.total(3)
    r = refinement_transformation(P, Q)
    assert r.well_defined and r.cone_compatible
    img = r.functor.images["xi1_3(A)"]
    assert list(img.terms) == [("xi2_3(A)", "xi1_2(A)")]


def test_coarsening_chains_count():
    # [DERIVED] brute-force count of triples P ≤ P' ≤ P'' over restricted growth strings
    def blocks(rgs):
        d = {}
        for k, b in enumerate(rgs, 1):
            d.setdefault(b, set()).add(k)
        return [frozenset(v) for v in d.values()]

    def coarsens(big, small):
        return all(any(s <= b for b in big) for s in small)

    for n in (2, 3):
        ps = [blocks(r) for r in oracles.restricted_growth_strings(n)]
        count = sum(1 for a in ps for b in ps for c in ps if coarsens(b, a) and coarsens(c, b))
        assert len(coarsening_chains(n)) == count


def test_refinement_chains_n3():
    cats = {}
    for P, P1, P2 in coarsening_chains(3):
        assert check_refinement_chain(P, P1, P2, cats=cats), (str(P), str(P1), str(P2))


# ---------------------------------------------------------------- naturality

def test_naturality_counterexample():
    # [PAPER] the square fails on the pair (b1a1b2, b2a2b2)
    v = naturality_counterexample()
    assert not v.passes
    assert v.witness == ("b1a1", "b1", "b1a1b2", "b2a2b2")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_star_leaf_swaps_pass(n):
    res = star_leaf_swaps(n)
    assert len(res) == n * (n - 1)
    assert all(v.passes for v in res.values())


def test_vertex_swap_renames_arrows():
    A = build_star_quotient(3)
    sw = vertex_swap(A, 1, 3)
    assert sw["a1"] == "a3" and sw["b3"] == "b1" and sw["a2"] == "a2"
    assert naturality_check(A, sw, 1, 3).passes
