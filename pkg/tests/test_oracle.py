"""Bounded finite-model reasoning: entailment, equivalence, inseparability."""

import pytest

from sitcalc.forgetting import GroundAtom, forget_atom
from sitcalc.oracle import (
    Countermodel,
    EntailedFinite,
    EquivalentFinite,
    FiniteModel,
    InseparableFinite,
    NotEquivalent,
    OracleConfig,
    Sat,
    Separated,
    Unknown,
    UnsatFinite,
    check_cons_containment,
    check_expansion,
    check_inseparable,
    entails,
    equivalent,
    evaluate,
    is_positive,
    models,
    satisfiable,
    theory_holds,
)
from sitcalc.surface import parse_formula, render
from sitcalc.syntax import Signature, Theory

SIG = Signature(objects=frozenset({"c"}), statics=frozenset({("P", 1), ("R", 2)}))
CFG = OracleConfig(max_extra=1)
DELTA_P = Signature(statics=frozenset({("P", 1)}))
DELTA_R = Signature(statics=frozenset({("R", 2)}))


def f(text):
    return parse_formula(text, SIG, allow_free=True)


def t(*texts):
    return Theory(tuple(f(s) for s in texts))


class TestEvaluation:
    def test_evaluate_on_a_hand_built_model(self):
        m = FiniteModel(2, (("c", 0),), ((("P", ""), frozenset({(0,)})),))
        assert evaluate(m, f("P(c)"))
        assert not evaluate(m, f("forall x P(x)"))
        assert evaluate(m, f("exists x !P(x)"))
        assert theory_holds(m, t("P(c)", "exists x !P(x)"))

    def test_model_enumeration_counts(self):
        sig = Signature(objects=frozenset({"c"}), statics=frozenset({("P", 1)}))
        assert len(list(models(Theory(()), CFG, sig=sig))) == 6
        no_una = OracleConfig(max_extra=1, una=False)
        assert len(list(models(Theory(()), no_una, sig=sig))) == 10

    def test_unique_names_constrain_models(self):
        sig = Signature(objects=frozenset({"a", "b"}))
        with_una = list(models(Theory(()), CFG, sig=sig))
        assert all(m.const("a") != m.const("b") for m in with_una)
        without = list(models(Theory(()), OracleConfig(max_extra=1, una=False), sig=sig))
        assert any(m.const("a") == m.const("b") for m in without)


class TestEntailment:
    def test_universal_entails_instance(self):
        v = entails(t("forall x P(x)"), f("P(c)"), CFG)
        assert v == EntailedFinite(bound=2)

    def test_instance_does_not_entail_universal(self):
        v = entails(t("P(c)"), f("forall x P(x)"), CFG)
        assert isinstance(v, Countermodel)
        assert v.model.size == 2
        assert evaluate(v.model, f("P(c)"))
        assert not evaluate(v.model, f("forall x P(x)"))

    def test_extra_elements_matter(self):
        tight = OracleConfig(max_extra=0)
        v = entails(t("P(c)"), f("forall x P(x)"), tight)
        assert is_positive(v)

    def test_unique_names_matter(self):
        sig2 = Signature(objects=frozenset({"a", "b"}), statics=frozenset({("P", 1)}))
        t1 = Theory((parse_formula("P(a)", sig2),))
        q = parse_formula("!P(b)", sig2)
        no_una = OracleConfig(max_extra=0, una=False)
        assert not is_positive(entails(t1, q, no_una))


class TestEquivalenceAndSat:
    def test_different_presentations_are_equivalent(self):
        one = t("forall x (P(x) -> R(x, x))")
        other = t("forall x (!R(x, x) -> !P(x))")
        assert isinstance(equivalent(one, other, CFG), EquivalentFinite)

    def test_direction_of_inequivalence_is_reported(self):
        v = equivalent(t("forall x P(x)"), t("P(c)"), CFG)
        assert isinstance(v, NotEquivalent)
        assert v.direction == "2!=>1"

    def test_satisfiable_returns_a_model(self):
        v = satisfiable(t("exists x (P(x) & !P(c))"), CFG)
        assert isinstance(v, Sat)
        assert evaluate(v.model, f("exists x (P(x) & !P(c))"))

    def test_contradictions_are_unsat_at_every_size(self):
        v = satisfiable(t("P(c)", "!P(c)"), CFG)
        assert isinstance(v, UnsatFinite)


class TestInseparability:
    def test_identical_theories_are_inseparable(self):
        v = check_inseparable(t("P(c)"), t("P(c)"), DELTA_P, CFG)
        assert v == InseparableFinite(bound=2, reduct_counts=((1, 1, 1), (2, 2, 2)))

    def test_witness_separates_strict_strengthening(self):
        v = check_inseparable(t("forall x P(x)"), t("P(c)"), DELTA_P, CFG)
        assert isinstance(v, Separated)
        assert v.entailed_by == 1
        assert render(v.witness) == "forall v0 P(v0)"

    def test_depth_limit_yields_unknown_with_mismatch(self):
        one = t("forall x exists y R(x, y)", "c == c")
        two = t("c == c")
        v = check_inseparable(one, two, DELTA_R, CFG, depth=1)
        assert isinstance(v, Unknown)
        assert v.mismatch is not None
        v2 = check_inseparable(one, two, DELTA_R, CFG, depth=2)
        assert isinstance(v2, Separated)
        assert render(v2.witness) == "forall v0 exists v1 R(v0, v1)"
        assert v2.entailed_by == 1

    def test_budget_limit_yields_unknown(self):
        one = t("forall x exists y R(x, y)", "c == c")
        two = t("c == c")
        tiny = OracleConfig(max_extra=1, witness_budget=1)
        v = check_inseparable(one, two, DELTA_R, tiny, depth=3)
        assert isinstance(v, Unknown)


class TestConsequenceContainment:
    def test_strengthening_shrinks_the_reduct_set(self):
        one = t("forall x exists y R(x, y)", "c == c")
        two = t("c == c")
        cc = check_cons_containment(one, two, DELTA_R, CFG)
        assert cc.reducts_1_in_2 and not cc.reducts_2_in_1
        assert "subset" in cc.conclusion

    def test_equal_theories_have_equal_consequences(self):
        cc = check_cons_containment(t("P(c)"), t("P(c)"), DELTA_P, CFG)
        assert cc.reducts_1_in_2 and cc.reducts_2_in_1


class TestExpansion:
    def test_joint_consistency_of_chain_halves(self, chain, cfg1):
        sig, theory = chain
        rep = check_expansion(Theory(theory.axioms[:1]), Theory(theory.axioms[1:]), cfg1)
        assert rep.t1_expandable and rep.t2_expandable

    def test_expansion_detects_one_sided_dependence(self, insep_pair, cfg1):
        (sig1, one), (sig2, two) = insep_pair
        rep = check_expansion(one, two, cfg1)
        assert rep.t1_expandable
        assert not rep.t2_expandable

    def test_forgetting_breaks_plain_inseparability_but_separation_is_witnessed(
        self, insep_pair, cfg1
    ):
        (sig1, one), (sig2, two) = insep_pair
        delta = Signature(objects=frozenset({"c"}), statics=frozenset({("R", 2)}))
        g = GroundAtom("R", ("c", "c"), None)
        v = check_inseparable(forget_atom(one, g), forget_atom(two, g), delta, cfg1, depth=3)
        assert isinstance(v, Separated)
        assert v.entailed_by == 1
        want = Theory((parse_formula("forall x exists y R(x, y)", sig1),))
        assert is_positive(equivalent(Theory((v.witness,)), want, cfg1))
