from fractions import Fraction

import pytest
from sympy import primerange

from levelraise.local import (
    FiniteMatrixGroup,
    GroupTooLarge,
    SatakeParam,
    classical_order,
    classify,
    double_coset_count,
    family_sums,
    induced_fixed_dim,
    iwahori_rank1_characters,
    load_table,
    module_report,
    parahoric_indices,
    satake_congruence_check,
    shape,
    type_congruence,
    u3_unipotent_relation_solve,
    verify_golden,
    weyl_fixed_dim,
)
from levelraise.local.field import small_field
from levelraise.local.groups import is_closed
from levelraise.local.parahoric import hermitian_isotropic_lines, weyl_index
from levelraise.local.satake import SatakeError, closed_form, exhaustive_case_analysis, weyl_group

_GROUPS: dict = {}


def group(kind, q):
    if (kind, q) not in _GROUPS:
        _GROUPS[(kind, q)] = FiniteMatrixGroup(kind, q)
    return _GROUPS[(kind, q)]


# ---------------------------------------------------------------- fields and groups

@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_small_field_axioms(q):
    F = small_field(q)
    for a in range(q):
        assert F.add[a][F.neg[a]] == 0
        if a:
            assert F.mul[a][F.inv[a]] == 1
        for b in range(q):
            assert F.add[a][b] == F.add[b][a]
            for c in range(q):
                assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]


@pytest.mark.parametrize("kind, q", [("GL3", 2), ("GL3", 3), ("GL3", 4), ("GSp4", 2), ("GSp4", 3)])
def test_group_orders(kind, q):
    assert group(kind, q).order == classical_order(kind, q)


def test_classical_orders():
    assert classical_order("GL3", 2) == 168
    assert classical_order("GSp4", 2) == 720


def test_gsp4_q4_refused_with_estimate():
    with pytest.raises(GroupTooLarge, match=str(classical_order("GSp4", 4))):
        FiniteMatrixGroup("GSp4", 4)


def test_gsp4_generators_preserve_form():
    G = group("GSp4", 3)
    assert all(G.contains(g) for g in G.generators)


@pytest.mark.parametrize("kind, q", [("GL3", 2), ("GL3", 3), ("GSp4", 2), ("GSp4", 3)])
def test_shapes_are_subgroups(kind, q):
    G = group(kind, q)
    names = ["K", "J", "I"] if kind == "GL3" else ["K", "J", "J'", "I"]
    for name in names:
        assert is_closed(G, shape(kind, name))


# ---------------------------------------------------------------- double cosets and row I

@pytest.mark.parametrize("q", [2, 3, 4])
def test_gl3_bruhat_cells(q):
    G = group("GL3", q)
    B = shape("GL3", "I")
    assert double_coset_count(G, B, B) == 6
    assert double_coset_count(G, B, shape("GL3", "J")) == 3
    assert double_coset_count(G, B, shape("GL3", "K")) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_gsp4_row_one(q):
    G = group("GSp4", q)
    B = shape("GSp4", "I")
    dims = tuple(double_coset_count(G, B, shape("GSp4", c)) for c in ("K", "J", "J'", "I"))
    assert dims == (1, 4, 4, 8)


def test_row_one_weyl_counts():
    assert tuple(weyl_fixed_dim("GL3", c) for c in ("K", "J", "I")) == (1, 3, 6)
    assert tuple(weyl_fixed_dim("GSp4", c) for c in ("K", "K'", "J", "J'", "I")) == (1, 2, 4, 4, 8)


# ---------------------------------------------------------------- induced representations

@pytest.mark.parametrize("q", [2, 3])
def test_gl3_induced_rows(q):
    G = group("GL3", q)
    P = shape("GL3", "J")
    cols = [shape("GL3", c) for c in ("K", "J", "I")]
    assert tuple(induced_fixed_dim(G, P, "steinberg", H) for H in cols) == (0, 1, 3)
    assert tuple(induced_fixed_dim(G, P, "trivial", H) for H in cols) == (1, 2, 3)


def test_trivial_induced_from_borel():
    G = group("GL3", 2)
    B = shape("GL3", "I")
    assert induced_fixed_dim(G, B, "trivial", B) == 6
    assert induced_fixed_dim(G, B, "trivial", shape("GL3", "K")) == 1


def test_unsupported_tau():
    with pytest.raises(ValueError):
        induced_fixed_dim(group("GL3", 2), shape("GL3", "J"), "cuspidal", shape("GL3", "I"))


@pytest.mark.parametrize("kind, q", [("GL3", 2), ("GL3", 3), ("GSp4", 2), ("GSp4", 3)])
def test_verify_golden(kind, q):
    failed = [c.to_json() for c in verify_golden(kind, q) if not c.ok]
    assert failed == []


# ---------------------------------------------------------------- indices

@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_u3_indices(q):
    rep = parahoric_indices("U3", q)
    assert rep.closed == {"K:I": q ** 3 + 1, "K':I": q + 1, "K':I relative": 1}
    assert all(rep.agreement().values())


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl3_indices(q):
    rep = parahoric_indices("GL3", q)
    assert rep.closed["K:J"] == 1 + q + q * q
    assert rep.closed["K':J relative"] == 1
    assert all(rep.agreement().values())
    if q <= 4:
        assert rep.models["finite"]["K:J"] == 1 + q + q * q


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gsp4_indices_closed_forms(q):
    rep = parahoric_indices("GSp4", q)
    assert rep.closed == {"K:J": (q ** 4 - 1) // (q - 1), "K':J": q, "K':J relative": q}
    assert rep.models["weyl"]["K:J"] == (q ** 4 - 1) // (q - 1)
    if q <= 3:
        assert rep.models["finite"]["K:J"] == (q ** 4 - 1) // (q - 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gsp4_k_prime_index_from_affine_weyl_group(q):
    # the Poincare sums of the affine Weyl group give [K':J] = q + 1, not q
    assert weyl_index("GSp4", "K'", "J", q) == q + 1
    assert set(parahoric_indices("GSp4", q).conflicts()) == {"K':J [weyl]", "K':J relative [weyl]"}


def test_gsp4_q2_example():
    rep = parahoric_indices("GSp4", 2)
    assert (rep.closed["K:J"], rep.closed["K':J"], rep.closed["K':J relative"]) == (15, 2, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_hermitian_line_counts(q):
    assert hermitian_isotropic_lines(3, q) == q ** 3 + 1
    assert hermitian_isotropic_lines(2, q) == q + 1


# ---------------------------------------------------------------- tables and classification

def test_table_family_sums():
    for kind in ("GL3", "GSp4"):
        assert all(ok for _, _, ok in family_sums(kind))


def test_table_sizes():
    assert len(load_table("GL3")) == 7
    assert len(load_table("GSp4")) == 17


def test_gsp4_new_vector_query():
    assert classify("GSp4", new_vectors=True) == ["I", "IIa", "IIIa", "IVb", "IVc", "Va", "VIa"]


def test_gsp4_new_vector_query_unitary():
    assert classify("GSp4", require_unitary=True, new_vectors=True) == ["I", "IIa", "IIIa", "Va", "VIa"]


def test_gl3_new_vector_query_unitary():
    assert classify("GL3", require_unitary=True, new_vectors=True) == ["I", "IIa"]


def test_classify_by_dimensions():
    assert classify("GSp4", {"K": 0, "K'": 0, "J": 0, "J'": 0}) == ["IVa"]
    assert classify("GL3", {"K": 1, "J": 3, "I": 6}) == ["I"]
    assert classify("GL3", {"K": 7}) == []


# ---------------------------------------------------------------- Iwahori-Hecke algebra of U(3)

@pytest.mark.parametrize("q", [2, 3, 5])
def test_rank_one_characters(q):
    table = iwahori_rank1_characters(q)
    assert {n: (v["T_K"], v["T_K'"]) for n, v in table.items()} == {
        "trivial": (1 + q ** 3, 1 + q), "steinberg": (0, 0), "pi_x": (1 + q ** 3, 0), "pi_plus": (0, 1 + q)}
    assert all(v["relations"] for v in table.values())


def test_pi_x_at_q2():
    assert iwahori_rank1_characters(2)["pi_x"]["T_K"] == 9


def test_principal_series_at_q_squared():
    rep = module_report(3, 9)
    assert set(rep.tt_eigenvalues) == {81, 1}
    assert rep.relations and rep.reducible
    assert rep.sub_characters == ("steinberg",)
    assert rep.factors == ("steinberg", "trivial")


def test_principal_series_at_minus_q():
    rep = module_report(3, -3)
    assert rep.sub_characters == ("pi_x",)
    assert rep.factors == ("pi_plus", "pi_x")


@pytest.mark.parametrize("q", [2, 3, 5])
def test_reducibility_points(q):
    points = {Fraction(q * q), Fraction(1, q * q), Fraction(-q), Fraction(-1, q)}
    for a in [Fraction(x, y) for x in range(-30, 31) if x for y in (1, 2, 3, 4, 5, 9, 25)]:
        rep = module_report(q, a)
        assert rep.relations
        assert rep.tt_det == q ** 4
        assert rep.reducible == (a in points)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_unipotent_relation(q):
    sol = u3_unipotent_relation_solve(q)
    assert sol.status == "ok"
    assert set(sol.values) == {q * q, -q}
    assert "u = 1: any a" in sol.families


def test_unipotent_relation_even_q_flagged():
    assert u3_unipotent_relation_solve(2).status == "unhandled: even q"


# ---------------------------------------------------------------- Satake parameters

def test_weyl_group_orders():
    assert len(weyl_group("GSp4")) == 8
    assert len(weyl_group("GL3")) == 6


def test_pairing_invariant():
    assert SatakeParam("GSp4", (1, 2, 4, 8)).pairing_ok()
    assert not SatakeParam("GSp4", (1, 2, 3, 4)).pairing_ok()
    with pytest.raises(SatakeError):
        SatakeParam("GSp4", (1, 2, 3))


def test_param_congruent_to_itself():
    p = SatakeParam("GSp4", (3, -3, -9, 9), Fraction(3, 2))
    for ell in primerange(2, 30):
        assert satake_congruence_check(p, p, ell)


def test_twist_mismatch_rejected():
    with pytest.raises(SatakeError):
        satake_congruence_check(SatakeParam("GL3", (1, 2, 3)), SatakeParam("GL3", (1, 2, 3), Fraction(1)), 5)


def test_ell_dividing_q_rejected():
    with pytest.raises(SatakeError):
        type_congruence("Va", 3, 3)


def test_va_example():
    assert type_congruence("Va", 3, 5).solvable  # q^2 = -1 mod 5
    assert not type_congruence("Va", 3, 7).solvable


def test_via_example():
    assert type_congruence("VIa", 5, 3).solvable  # q^2 = 1 mod 3
    assert not type_congruence("VIa", 5, 7).solvable


def test_exhaustive_case_analysis():
    results = exhaustive_case_analysis(50, 20)
    assert len(results) == 224
    assert all(r.solvable == closed_form(r.type, r.q, r.ell) for r in results)
