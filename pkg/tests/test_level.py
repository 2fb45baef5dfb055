from fractions import Fraction

import pytest
from sympy import primerange

from levelraise.congruence import adjoint_map, congruence_module
from levelraise.exact import IntMatrix
from levelraise.exact.linalg import rank
from levelraise.level.eigen import EigenSystem, joint_eigensystems, semisimple_mod_ell
from levelraise.level.ihara import ihara_check
from levelraise.level.instance import (
    HypothesisViolation,
    LevelRaisingInstance,
    abelian_test,
    classes_for,
    classical_test,
    raise_level,
    star_criterion,
    two_places,
    valuation_bound_for_form,
)
from levelraise.level.structure import build_level_structure
from levelraise.quaternion.brandt import brandt_matrices

PAIRS = [(11, 2), (11, 3), (23, 2)]
_INSTANCES: dict = {}


def instance(p, q):
    if (p, q) not in _INSTANCES:
        _INSTANCES[(p, q)] = LevelRaisingInstance(p, q)
    return _INSTANCES[(p, q)]


def cusp_form(inst):
    (form,) = [f for f in inst.old_forms if not f.eisenstein]
    return form


# ---------------------------------------------------------------- double coset spaces

def test_p11_q2_edge_mass():
    X = build_level_structure(classes_for(11), 2)
    assert X.classes.h == 2
    assert sum(Fraction(1, w) for w in X.weights_J) == Fraction(15, 12)


@pytest.mark.parametrize("p, q", [(11, 2), (11, 3), (23, 2), (23, 3), (29, 5)])
def test_fibers_cover_all_lines(p, q):
    X = build_level_structure(classes_for(p), q)
    W = X.classes.weights
    for i in range(X.classes.h):
        fiber = [e for e in X.edges if e.base == i]
        assert sum(Fraction(W[i], e.stabilizer) for e in fiber) == q + 1
        assert sum(len(e.orbit) for e in fiber) == q + 1
    assert X.index_K == X.index_Kp == q + 1
    assert X.relative_index == 1


@pytest.mark.parametrize("p, q", [(11, 2), (11, 3), (23, 2), (23, 3)])
def test_line_counts_reproduce_brandt(p, q):
    classes = classes_for(p)
    X = build_level_structure(classes, q)
    assert X.line_counts() == brandt_matrices(classes, q)[q].tolist()


def test_level_structure_rejects_q_equal_p():
    with pytest.raises(ValueError):
        build_level_structure(classes_for(11), 11)


def test_hecke_at_q_refused():
    with pytest.raises(ValueError):
        instance(11, 2).X.hecke(2)


# ---------------------------------------------------------------- degeneracy data

@pytest.mark.parametrize("p, q", PAIRS)
def test_adjoint_block_identity(p, q):
    inst = instance(p, q)
    assert adjoint_map(inst.setup) @ inst.delta == inst.adjoint_blocks()


@pytest.mark.parametrize("p, q", PAIRS)
def test_setup_invariants(p, q):
    inst = instance(p, q)
    inst.setup.check()
    assert inst.setup.C == 1
    assert inst.setup.B_V == 1


@pytest.mark.parametrize("p, q", PAIRS)
def test_hecke_equivariance(p, q):
    inst = instance(p, q)
    for r in inst.labels_J:
        assert inst.delta @ inst.setup.hecke_U.ops[r] == inst.X.hecke(r) @ inst.delta


@pytest.mark.parametrize("p, q", PAIRS)
def test_kernel_dimension_two_ways(p, q):
    by_rank, by_components = instance(p, q).kernel_dimension()
    assert by_rank == by_components


@pytest.mark.parametrize("p, q", PAIRS)
def test_kernel_is_antidiagonal_constants(p, q):
    inst = instance(p, q)
    h = inst.h
    d = inst.delta.entries()
    for comp in inst.X.components():
        bases = {inst.X.edges[e].base for e in comp}
        targets = {inst.X.edges[e].target for e in comp}
        v = [int(i in bases) for i in range(h)] + [-int(j in targets) for j in range(h)]
        assert not any(sum(row[t] * v[t] for t in range(2 * h)) for row in d)


@pytest.mark.parametrize("p, q", PAIRS)
def test_averaging_operators(p, q):
    inst = instance(p, q)
    assert inst.e_K @ inst.e_K == inst.e_K
    assert inst.e_Kp @ inst.e_Kp == inst.e_Kp


@pytest.mark.xfail(strict=True, reason="e_{K,K'} acts as B(q)^2/(q+1), which is not integral; see decisions ledger")
@pytest.mark.parametrize("p, q", PAIRS)
def test_e_kk_prime_integral(p, q):
    assert instance(p, q).e_KKp.is_integral()


@pytest.mark.parametrize("p, q", PAIRS)
def test_e_kk_prime_is_brandt_square_over_q_plus_1(p, q):
    # (q+1) e_K e_K' e_K acts as B(q)^2 / (q+1) on level K
    inst = instance(p, q)
    Bq = inst.B[q]
    assert inst.e_KKp.scale(q + 1) == (Bq @ Bq)


# ---------------------------------------------------------------- Ihara decomposition

def test_ihara_zero():
    f, fp, _ = instance(11, 2).ihara_decompose([0] * instance(11, 2).X.size)
    assert not any(f) and not any(fp)


def test_ihara_image_of_constant():
    inst = instance(11, 3)
    g = inst.delta @ ([1] * inst.h + [0] * inst.h)
    f, fp, _ = inst.ihara_decompose(g)
    assert inst.delta @ (f + fp) == g


def test_ihara_rejects_vector_outside_image():
    inst = instance(23, 2)
    basis = [list(r) for r in inst.delta.entries()]
    g = [0] * inst.X.size
    for t in range(inst.X.size):
        g = [int(i == t) for i in range(inst.X.size)]
        if rank(list(map(list, zip(*basis))) + [g]) > rank(list(map(list, zip(*basis)))):
            break
    with pytest.raises((ValueError, ArithmeticError)):
        inst.ihara_decompose(g)


@pytest.mark.parametrize("p, q", PAIRS)
def test_ihara_random(p, q):
    out = ihara_check(instance(p, q), 50, seed=1)
    assert out["failed"] == 0 and out["passed"] == 50


# ---------------------------------------------------------------- criteria on old forms

def test_p11_cusp_form_eigenvalues():
    form = cusp_form(instance(11, 2))
    assert form.rational
    assert [form.eigenvalues[r] for r in (2, 3, 5, 7)] == [-2, -1, 1, -2]


def test_star_criterion_negative_control_11_2_5():
    inst = instance(11, 2)
    form = cusp_form(inst)
    (system,) = form.reductions(5)
    crit = star_criterion(inst, form, system)
    assert crit["holds"]
    assert crit["m"] == Fraction(4, 3) - 3  # a_2^2 / (q+1) - [K:J]
    assert classical_test(system, 2)
    assert abelian_test(system, 11) == (True, "trivial")
    with pytest.raises(HypothesisViolation, match="abelian mod 5: Eisenstein congruence detected"):
        raise_level(inst, form, system)


def test_abelian_false_mod_3():
    form = cusp_form(instance(11, 2))
    (system,) = form.reductions(3)
    assert abelian_test(system, 11) == (False, None)


def test_eisenstein_is_abelian_and_m_vanishes():
    for p, q in PAIRS:
        inst = instance(p, q)
        eis = next(f for f in inst.old_forms if f.eisenstein)
        for ell in (5, 7):
            (system,) = eis.reductions(ell)
            assert abelian_test(system, p)[0]
            assert star_criterion(inst, eis, system)["m"] == 0


@pytest.mark.parametrize("p, q", PAIRS + [(23, 3), (29, 2)])
def test_star_matches_classical(p, q):
    inst = instance(p, q)
    for ell in (3, 5, 7, 11, 13):
        if ell == q or (q + 1) % ell == 0:
            continue
        for form in inst.old_forms:
            for system in form.reductions(ell):
                crit = star_criterion(inst, form, system)
                if crit["holds"] is not None:
                    assert crit["holds"] == classical_test(system, q)


def test_star_rejects_ell_dividing_q():
    inst = instance(11, 3)
    form = cusp_form(inst)
    (system,) = form.reductions(3)
    with pytest.raises(HypothesisViolation):
        star_criterion(inst, form, system)


def test_cusp_forms_have_nonzero_m():
    for p, q in PAIRS:
        inst = instance(p, q)
        for form in inst.old_forms:
            if form.rational and not form.eisenstein:
                (system,) = form.reductions(5 if q != 5 else 7)
                assert star_criterion(inst, form, system)["m"] != 0


def test_two_places():
    assert two_places(11, 5) == [2, 3]
    # v(v^2 - 1) is divisible by 3 for every prime v
    assert two_places(11, 3) == []
    assert len(two_places(11, 7)) == 2


# ---------------------------------------------------------------- raising the level

def test_raise_level_11_5_7():
    inst = instance(11, 5)
    form = cusp_form(inst)
    (system,) = form.reductions(7)
    assert star_criterion(inst, form, system)["holds"]
    assert not abelian_test(system, 11)[0]
    rep = valuation_bound_for_form(inst, form, 7)
    assert rep.n0 >= 1
    res = raise_level(inst, form, system, rep.n0)
    assert res.congruent and res.verified
    for es, _ in res.congruent:
        assert es.congruent(system, inst.labels_J)
    assert res.verified_mod_power >= 1
    mod = congruence_module(inst.setup)
    assert any(x % 7 == 0 for x in mod.invariant_factors)


def test_raise_level_refuses_when_criterion_fails():
    inst = instance(11, 2)
    form = cusp_form(inst)
    (system,) = form.reductions(7)
    with pytest.raises(HypothesisViolation, match="does not hold"):
        raise_level(inst, form, system)


def test_raised_systems_are_new_eigensystems():
    inst = instance(11, 5)
    for es, dim in inst.new_eigensystems(7):
        assert dim >= 1
        assert es.ell == 7 and es.labels == inst.labels_J


# ---------------------------------------------------------------- semisimplicity

def test_level_11_semisimple_mod_7():
    B = instance(11, 2).B
    ok, nil, dim = semisimple_mod_ell([B[r] for r in primerange(2, 30) if r != 11], 7)
    assert ok and nil == 0 and dim == 2


def test_squarefree_char_poly_gives_semisimple():
    assert semisimple_mod_ell([IntMatrix([[1, 0], [0, 2]])], 5)[0]


def test_jordan_block_not_semisimple():
    assert semisimple_mod_ell([IntMatrix([[1, 1], [0, 1]])], 5) == (False, 1, 2)


def test_reduction_that_collapses_is_not_semisimple():
    # distinct eigenvalues 1, 6 over Q collide mod 5 and the reduction is a Jordan block
    assert semisimple_mod_ell([IntMatrix([[1, 1], [0, 6]])], 5)[:2] == (False, 1)


# ---------------------------------------------------------------- eigensystems

def test_joint_eigensystems_extension_field():
    # x^2 + 1 is irreducible mod 3, so the system lives in F_9
    (es, dim), = joint_eigensystems({"T": IntMatrix([[0, -1], [1, 0]])}, 3)
    assert es.k == 2 and dim == 1


def test_eigensystem_congruence_up_to_frobenius():
    (es, _), = joint_eigensystems({"T": IntMatrix([[0, -1], [1, 0]])}, 3)
    conj = es.frobenius()
    assert conj != es
    assert es.congruent(conj)


def test_exact_system_reduction():
    es = EigenSystem.exact({2: -2, 3: -1})
    assert es.reduce(5)[2] == es.reduce(5).field(3)
