from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import degrees
from posslog.errors import ConstraintError
from posslog.lpl import AndMin, Atom, Const, Not, OrMax, Param, TensorNorm, parse_lpl
from posslog.norms import LUKASIEWICZ, MINIMUM, NORMS, PRODUCT
from posslog.proofs import (
    ROBOT_BINDINGS,
    and_composition,
    excluded_middle,
    modus_ponens,
    node,
    robot_proof,
    shipped_proofs,
    tensor_composition,
)
from posslog.sequent import (
    Constraint,
    Derivation,
    Join,
    Residuum,
    Sequent,
    Times,
    Var,
    check_derivation,
    derivation_from_dict,
    derivation_to_dict,
    evaluate,
    extract_constraints,
    format_term,
    least_solution,
    sequent_holds,
    solve_min,
    target_of,
    unsound_nodes,
)
from posslog.sequent import Const as TConst

ALL = list(NORMS.values())
A, B = Atom("A"), Atom("B")


def leaf(rule, ant, succ):
    return Derivation(rule, Sequent.of(ant, succ))


def c(lhs, rhs):
    return Constraint(lhs, rhs)


def v(name):
    return Var(name)


def q(text):
    return TConst(Fr(text))


class TestLeaves:
    def test_identity(self):
        verdict = check_derivation(leaf("id", ["A & B"], "A & B"), MINIMUM)
        assert verdict.valid and not verdict.constraints
        assert not check_derivation(leaf("id", ["A"], "B"), MINIMUM).valid

    def test_order_leaf_symbolic(self):
        verdict = check_derivation(leaf("s'", ["$beta"], "$x"), MINIMUM)
        assert verdict.valid and verdict.constraints == {c(v("beta"), v("x"))}

    def test_order_leaf_ground(self):
        assert check_derivation(leaf("s'", ["0.3"], "0.5"), MINIMUM).valid
        verdict = check_derivation(leaf("s'", ["0.6"], "0.5"), MINIMUM)
        assert not verdict.valid and verdict.failures[0][0] == "root"

    def test_order_leaf_folds_antecedent(self):
        verdict = check_derivation(leaf("s", ["0.5", "0.4"], "0.2"), PRODUCT)
        assert verdict.valid
        assert not check_derivation(leaf("s'", ["0.5", "0.4"], "0.2"), MINIMUM).valid

    def test_definitions(self):
        assert check_derivation(leaf("tensor-def", ["0.5 (*) 0.4"], "0.2"), PRODUCT).valid
        assert not check_derivation(leaf("tensor-def", ["0.5 (*) 0.4"], "0.3"), PRODUCT).valid
        assert check_derivation(leaf("neg-def", ["0.3"], "!0.7"), LUKASIEWICZ).valid
        verdict = check_derivation(leaf("tensor-def", ["$a (*) $b"], "$x"), PRODUCT)
        assert verdict.constraints == {c(Times(v("a"), v("b")), v("x"))}
        assert not check_derivation(leaf("tensor-def", ["0.5 (+) 0.4"], "0.5"), PRODUCT).valid

    def test_constants_and_axioms(self):
        assert check_derivation(leaf("zero-L", ["A", "0"], "B"), MINIMUM).valid
        assert check_derivation(leaf("notnot", ["!!(A (+) !A)"], "A (+) !A"), MINIMUM).valid
        assert not check_derivation(leaf("notnot", ["!!(0.5 (+) A)"], "0.5 (+) A"), MINIMUM).valid
        assert check_derivation(leaf("distr-tensor-and", ["(A (*) C) & (B (*) C)"], "(A & B) (*) C"), MINIMUM).valid
        assert check_derivation(leaf("distr-plus-and", ["(A (+) C) & (B (+) C)"], "(A & B) (+) C"), MINIMUM).valid
        assert not check_derivation(leaf("distr-plus-and", ["(A (+) C) & (B (+) D)"], "(A & B) (+) C"), MINIMUM).valid

    def test_out_of_scope_and_unknown(self):
        for rule in ("forall-L", "CD", "distr-tensor-forall"):
            verdict = check_derivation(leaf(rule, ["A"], "A"), MINIMUM)
            assert "out-of-scope rule" in verdict.failures[0][1]
        assert "unknown rule" in check_derivation(leaf("magic", ["A"], "A"), MINIMUM).failures[0][1]


class TestRules:
    def test_and_right_needs_two_premises(self):
        d = node("and-R", [A, B], AndMin(A, B), node("weL", [A, B], A, node("id", [A], A)))
        verdict = check_derivation(d, MINIMUM)
        assert not verdict.valid
        assert verdict.failures == [("root", "arity mismatch: and-R expects 2 premises, got 1")]

    def test_failure_paths(self):
        good = node("id", [A], A)
        bad = node("id", [A], B)
        d = node("and-R", [A], AndMin(A, B), good, bad)
        failures = check_derivation(d, MINIMUM).failures
        assert [path for path, _ in failures] == ["root/1"]

    def test_exchange_is_free(self):
        inner = node("weL", [A, B], A, node("id", [A], A))
        assert check_derivation(node("weL", [B, A, Atom("C")], A, inner), MINIMUM).valid
        assert check_derivation(node("exL", [B, A], A, inner), MINIMUM).valid
        assert not check_derivation(node("exL", [B, B], A, inner), MINIMUM).valid

    def test_weakening_adds_exactly_one(self):
        d = node("weL", [A, B, B], A, node("id", [A], A))
        assert not check_derivation(d, MINIMUM).valid

    def test_cut_contexts(self):
        left = node("id", [A], A)
        right = node("plus-R", [A], OrMax(A, B), node("id", [A], A))
        assert check_derivation(node("cut", [A], OrMax(A, B), left, right), MINIMUM).valid
        assert not check_derivation(node("cut", [A, B], OrMax(A, B), left, right), MINIMUM).valid
        side = node("cut", [A], OrMax(A, B), left, right, cut=B)
        assert not check_derivation(side, MINIMUM).valid

    def test_l1_contraction_side_condition(self):
        major = node("weL", [A, A], A, node("id", [A], A))
        assert check_derivation(node("L1con", [A], A, major, node("id", [A], A)), MINIMUM).valid
        g = parse_lpl("0.5 (+) A")
        major = node("weL", [g, g], g, node("id", [g], g))
        verdict = check_derivation(node("L1con", [g], g, major, node("id", [g], g)), MINIMUM)
        assert "Boolean fragment" in verdict.failures[0][1]

    def test_tensor_rules(self):
        right = node("tensor-R", [A, B], TensorNorm(A, B), node("id", [A], A), node("id", [B], B))
        assert check_derivation(right, MINIMUM).valid
        swapped = node("tensor-R", [A, B], TensorNorm(B, A), node("id", [A], A), node("id", [B], B))
        assert not check_derivation(swapped, MINIMUM).valid
        left = node("tensor-L", [TensorNorm(A, B)], TensorNorm(A, B), right)
        assert check_derivation(left, MINIMUM).valid

    def test_implication_and_one(self):
        imp = parse_lpl("A -> B")
        mp = node("imp-L", [A, imp], B, node("id", [A], A), node("id", [B], B))
        assert check_derivation(mp, MINIMUM).valid
        assert check_derivation(node("imp-R", [imp], imp, mp), MINIMUM).valid
        one = node("one-L", [A, Const(Fr(1))], A, node("id", [A], A))
        assert check_derivation(one, MINIMUM).valid

    def test_aliases(self):
        d = node("(+)R", [A], OrMax(B, A), node("id", [A], A))
        assert check_derivation(d, MINIMUM).valid


class TestShippedProofs:
    def test_robot_constraints(self):
        cs = extract_constraints(robot_proof())
        assert cs == {
            c(Times(v("theta6"), v("xi2")), v("x")),
            c(v("alpha"), v("xi2")), c(v("beta"), v("xi2")),
            c(v("eta"), v("beta")), c(v("gamma"), v("beta")),
            c(v("theta1"), v("gamma")), c(v("theta2"), v("gamma")),
            c(v("theta4"), v("alpha")), c(v("theta5"), v("alpha")),
        }

    def test_robot_solution(self):
        d = robot_proof()
        verdict = check_derivation(d, PRODUCT)
        assert verdict.valid
        assert solve_min(verdict.constraints, "x", ROBOT_BINDINGS, PRODUCT) == Fr(6, 25)
        assert solve_min(verdict.constraints, "x", ROBOT_BINDINGS, MINIMUM) == Fr(2, 5)
        assert target_of(d) == "x"

    def test_lemma_constraints(self):
        proofs = shipped_proofs()
        assert extract_constraints(proofs["gm_proof"]) == {c(v("alpha"), v("x")), c(v("beta"), v("x"))}
        assert extract_constraints(proofs["tensor_comp_proof"]) == {c(Times(v("xi1"), v("xi2")), v("x"))}
        assert extract_constraints(proofs["and_comp_proof"]) == {c(v("alpha1"), v("x")), c(v("alpha2"), v("x"))}

    @pytest.mark.parametrize("n", ALL, ids=lambda n: n.name)
    def test_substituted_robot_proof_is_valid_and_sound(self, n):
        d = robot_proof()
        solution = least_solution(extract_constraints(d), ROBOT_BINDINGS, n)
        ground = d.substitute(solution)
        assert check_derivation(ground, n).valid
        assert extract_constraints(ground) == frozenset()
        assert unsound_nodes(ground, n) == []

    def test_ground_proof_with_too_small_x_is_rejected(self):
        d = robot_proof()
        solution = least_solution(extract_constraints(d), ROBOT_BINDINGS, PRODUCT)
        solution["x"] -= Fr(1, 100)
        verdict = check_derivation(d.substitute(solution), PRODUCT)
        assert not verdict.valid and len(verdict.failures) == 1

    def test_json_round_trip(self):
        for d in shipped_proofs().values():
            assert derivation_from_dict(derivation_to_dict(d)) == d


class TestSolver:
    def test_examples(self):
        assert solve_min([c(q("0.5"), v("x"))], "x", {}, MINIMUM) == Fr(1, 2)
        cs = [c(v("a"), v("x")), c(v("b"), v("x"))]
        assert solve_min(cs, "x", {"a": Fr(1, 4), "b": Fr(3, 4)}, MINIMUM) == Fr(3, 4)

    def test_compound_lower_bounds(self):
        cs = [c(Join(v("a"), Times(v("a"), v("b"))), v("x")), c(Residuum(q("0.5"), v("a")), v("y"))]
        sol = least_solution(cs, {"a": "0.4", "b": "0.5"}, PRODUCT)
        assert sol["x"] == Fr(2, 5) and sol["y"] == Fr(4, 5)

    def test_bound_checks(self):
        cs = [c(q("0.3"), v("x")), c(v("x"), q("0.5"))]
        assert solve_min(cs, "x", {}, MINIMUM) == Fr(3, 10)
        with pytest.raises(ConstraintError, match="unsatisfiable"):
            solve_min([c(q("0.7"), v("x")), c(v("x"), q("0.5"))], "x", {}, MINIMUM)

    @pytest.mark.parametrize("cs, message", [
        ([c(v("a"), v("x")), c(v("x"), v("a"))], "cyclic"),
        ([c(v("a"), v("x"))], "no lower bound"),
        ([c(q("0.5"), v("x")), c(v("x"), Join(v("y"), q("0.2")))], "not stratified"),
        ([c(q("0.5"), v("a")), c(Residuum(v("a"), q("0.1")), v("x"))], "residuum antecedent"),
    ])
    def test_rejected_systems(self, cs, message):
        with pytest.raises(ConstraintError, match=message):
            least_solution(cs, {}, MINIMUM)

    def test_target_checks(self):
        with pytest.raises(ConstraintError):
            solve_min([c(q("0.5"), v("x"))], "x", {"x": "0.5"}, MINIMUM)
        with pytest.raises(ConstraintError):
            solve_min([c(q("0.5"), v("x"))], "y", {}, MINIMUM)

    def test_formatting(self):
        assert str(c(Times(v("theta6"), Join(v("a"), v("b"))), v("x"))) == "theta6 × (a ∨ b) ≤ x"
        assert format_term(Residuum(q("0.5"), q("0"))) == "0.5 ⇒ 0"

    @pytest.mark.parametrize("n", ALL, ids=lambda n: n.name)
    def test_minimality_by_perturbation(self, n):
        cs = extract_constraints(robot_proof())
        sol = least_solution(cs, ROBOT_BINDINGS, n)
        assert all(k.holds(sol, n) for k in cs)
        for var in ("x", "xi2", "alpha", "beta", "gamma"):
            for eps in (Fr(1, 1000), Fr(1, 10)):
                lowered = dict(sol, **{var: sol[var] - eps})
                assert not all(k.holds(lowered, n) for k in cs)


# -- soundness of randomly instantiated derivations ---------------------------

boolean_formulas = st.sampled_from([
    Atom("L1"), Atom("L2"), Not(Atom("L1")), parse_lpl("L1 & L2"), parse_lpl("L1 (+) !L2"), parse_lpl("L1 -> L2"),
])
norms = st.sampled_from(ALL)


def lemma_instances():
    d = st.builds(Const, degrees)
    return st.one_of(
        st.builds(and_composition, d, boolean_formulas, d, boolean_formulas, d),
        st.builds(modus_ponens, d, boolean_formulas, boolean_formulas, d, d),
        st.builds(tensor_composition, boolean_formulas, boolean_formulas, boolean_formulas, d, d, d),
        st.builds(excluded_middle, boolean_formulas),
    )


@settings(max_examples=120, deadline=None)
@given(lemma_instances(), norms)
def test_accepted_ground_derivations_are_sound(d, n):
    verdict = check_derivation(d, n)
    assert not verdict.constraints
    if verdict.valid:
        assert unsound_nodes(d, n) == []


@settings(max_examples=60, deadline=None)
@given(degrees, degrees, degrees, norms)
def test_modus_ponens_valid_exactly_when_constraints_hold(alpha, beta, x, n):
    d = modus_ponens(Const(alpha), A, B, Const(beta), Const(x))
    assert check_derivation(d, n).valid == (max(alpha, beta) <= x)
    assert sequent_holds(d.conclusion, n) == (max(alpha, beta) <= x)


@settings(max_examples=60, deadline=None)
@given(degrees, degrees, degrees, norms)
def test_tensor_composition_valid_exactly_when_constraints_hold(xi1, xi2, x, n):
    d = tensor_composition(Atom("K"), Atom("G"), Atom("H"), Const(xi1), Const(xi2), Const(x))
    expected = n.tnorm(xi1, xi2) <= x
    assert check_derivation(d, n).valid == expected
    assert sequent_holds(d.conclusion, n) == expected


def test_symbolic_degrees_evaluate():
    assert evaluate(Times(v("a"), q("0.5")), {"a": Fr(1, 2)}, PRODUCT) == Fr(1, 4)
    with pytest.raises(ConstraintError):
        evaluate(v("a"), {}, PRODUCT)


def test_param_is_not_a_literal():
    assert Param("x") != Const(Fr(0))
