"""Surface language: parsing, printing, round trips, error locations."""

import pytest

from sitcalc import corpus_path
from sitcalc.errors import ParseError
from sitcalc.surface import (
    parse_bat,
    parse_formula,
    parse_ground_action,
    parse_ground_atom,
    parse_theory,
    render,
    render_theory_file,
)
from sitcalc.syntax import Signature, Stage

SIG = Signature(
    objects=frozenset({"A", "B"}),
    statics=frozenset({("Block", 1), ("Z", 0)}),
    fluents=frozenset({("On", 2), ("Clear", 1), ("Q", 0)}),
    actions=frozenset({("move", 3), ("noop", 0)}),
)

ROUND_TRIPS = [
    "On(A, B)",
    "!Clear(A) & Clear(B) | Block(A)",
    "Block(A) -> Block(B) -> Z",
    "(Block(A) -> Block(B)) -> Z",
    "Z <-> Q",
    "forall x, y (On(x, y) -> Clear(x))",
    "forall x exists y On(x, y)",
    "exists x Block(x)",
    "A != B",
    "Clear'(A) & !Clear(A)",
    "forall x (x == A | x != B)",
]


class TestFormulaRoundTrips:
    @pytest.mark.parametrize("text", ROUND_TRIPS)
    def test_parse_then_render_is_stable(self, text):
        f = parse_formula(text, SIG, allow_free=True)
        assert render(f) == text

    def test_negated_equality_renders_with_disequality_sugar(self):
        f = parse_formula("!(A == B) & A == A", SIG)
        assert render(f) == "A != B & A == A"

    def test_implication_is_right_associative(self):
        f = parse_formula("Z -> Z -> Z", SIG)
        g = parse_formula("Z -> (Z -> Z)", SIG)
        assert f == g

    def test_and_binds_tighter_than_or_than_implies(self):
        f = parse_formula("Z & Q | Z -> Q", SIG)
        g = parse_formula("((Z & Q) | Z) -> Q", SIG)
        assert f == g

    def test_quantifier_body_is_tight(self):
        f = parse_formula("forall x Block(x) -> Z", SIG, allow_free=True)
        g = parse_formula("(forall x Block(x)) -> Z", SIG)
        assert f == g

    def test_primed_atom_is_next_stage(self):
        f = parse_formula("Clear'(A)", SIG)
        assert f.stage == Stage.NEXT
        assert render(f) == "Clear'(A)"

    def test_default_stage_is_configurable(self):
        f = parse_formula("Clear(A)", SIG, stage_default=Stage.NEXT)
        assert f.stage == Stage.NEXT


class TestGroundTerms:
    def test_ground_action_with_arguments(self):
        g = parse_ground_action("move(A, B, A)", SIG)
        assert g.fn == "move" and g.args == ("A", "B", "A")
        assert str(g) == "move(A, B, A)"

    def test_bare_nullary_action(self):
        g = parse_ground_action("noop", SIG)
        assert g.fn == "noop" and g.args == ()

    def test_ground_atom_stages(self):
        g = parse_ground_atom("On(A, B)", SIG)
        assert g.stage == Stage.NOW
        gn = parse_ground_atom("On'(A, B)", SIG)
        assert gn.stage == Stage.NEXT
        gs = parse_ground_atom("Block(A)", SIG)
        assert gs.stage is None

    def test_ground_atom_rejects_variables(self):
        with pytest.raises(ParseError):
            parse_ground_atom("On(A, x)", SIG)


class TestErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "On(A)",  # arity
            "On(A, B) &",  # dangling operator
            "forall On(A, B)",  # missing variable
            "Missing(A)",  # undeclared
            "On(A, B))",  # stray paren
            "move(A, B, A)",  # action term as formula
        ],
    )
    def test_errors_carry_source_spans(self, text):
        with pytest.raises(ParseError) as ei:
            parse_formula(text, SIG, allow_free=True)
        assert ei.value.span is not None
        assert ei.value.span.line == 1

    def test_reserved_words_cannot_be_declared(self):
        with pytest.raises(ParseError):
            parse_bat("object init;\n")

    def test_duplicate_declarations_are_rejected(self):
        with pytest.raises(ParseError):
            parse_bat("object A;\nobject A;\n")

    def test_init_block_must_be_current_stage(self):
        src = "object A;\nfluent F/1;\naction m/1;\nssa F(x) { pos: a == m(x); }\ninit { F'(A); }\n"
        with pytest.raises(ParseError) as ei:
            parse_bat(src)
        assert "next-stage" in str(ei.value)

    def test_bat_files_reject_theory_blocks_and_vice_versa(self):
        with pytest.raises(ParseError):
            parse_bat("static P/0;\ntheory { P; }\n")
        with pytest.raises(ParseError):
            parse_theory("static P/0;\ninit { P; }\n")

    def test_free_variables_rejected_unless_allowed(self):
        with pytest.raises(ParseError):
            parse_formula("Block(x)", SIG)
        f = parse_formula("Block(x)", SIG, allow_free=True)
        assert render(f) == "Block(x)"


class TestFileRoundTrips:
    @pytest.mark.parametrize(
        "name",
        [
            "bw_pipeline.bat",
            "blocks_world.bat",
            "blocks_stacks.bat",
            "blocks_stacks_raw.bat",
            "decomp_lost.bat",
            "insep_lost.bat",
            "split_lost.bat",
        ],
    )
    def test_bat_render_reparse_fixpoint(self, name):
        b = parse_bat(corpus_path(name).read_text(), name)
        text = render(b)
        b2 = parse_bat(text, name)
        assert render(b2) == text
        assert b2.sig == b.sig
        assert b2.init == b.init
        assert b2.ssas == b.ssas
        assert b2.preconditions == b.preconditions

    @pytest.mark.parametrize(
        "name",
        ["propositional_chain.bat", "insep_forgetting_t1.bat", "insep_forgetting_t2.bat"],
    )
    def test_theory_render_reparse_fixpoint(self, name):
        sig, t = parse_theory(corpus_path(name).read_text(), name)
        text = render_theory_file(sig, t)
        sig2, t2 = parse_theory(text, name)
        assert render_theory_file(sig2, t2) == text
        assert (sig2, t2) == (sig, t)

    def test_declarations_recorded_with_spans(self):
        b = parse_bat(corpus_path("blocks_stacks.bat").read_text(), "blocks_stacks.bat")
        span = b.span_of("ssa:Top")
        assert span is not None and span.path == "blocks_stacks.bat"
        assert b.span_of("poss:pop") is not None
        assert b.span_of("nothing:here") is None
