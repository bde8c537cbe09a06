import pytest

from genrabin.ltl import (
    FF,
    TT,
    FormulaSyntaxError,
    LassoWord,
    UnknownAtomError,
    UnsupportedOperatorError,
    always,
    atom,
    atoms,
    canonicalize,
    conj,
    disj,
    eval_lasso,
    eventually,
    is_infinitary,
    neg_atom,
    negate,
    nested_atoms,
    parse,
)


def w(prefix, cycle):
    return LassoWord(tuple(frozenset(x) for x in prefix), tuple(frozenset(x) for x in cycle))


class TestParse:
    def test_glued_prefixes(self):
        assert parse("GFa") == parse("G F a") == always(eventually(atom("a")))
        assert parse("FG!b") == eventually(always(neg_atom("b")))

    def test_precedence(self):
        assert parse("a | b & c") == parse("a | (b & c)")
        assert parse("!a & b") == conj(neg_atom("a"), atom("b"))

    def test_negation_pushed_to_atoms(self):
        assert parse("!(F a | G b)") == parse("G !a & F !b")
        assert parse("!!a") == atom("a")

    def test_constants(self):
        assert parse("true") is TT
        assert parse("a & false") is FF
        assert parse("F true") is TT

    def test_parse_is_canonical(self):
        assert parse("b & a") == parse("a & b")
        assert parse("a | a & b") == atom("a")

    @pytest.mark.parametrize("text", ["a U b", "X a", "a R b", "a W b", "a -> b", "a <-> b"])
    def test_unsupported(self, text):
        with pytest.raises(UnsupportedOperatorError):
            parse(text)

    @pytest.mark.parametrize("text,pos", [("a &", 3), ("(a | b", 6), ("a b", 2), (")", 0), ("", 0)])
    def test_syntax_error_position(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse(text)
        assert exc.value.position == pos

    def test_unknown_atom(self):
        assert parse("a & b", ap={"a", "b"}) == parse("a & b")
        with pytest.raises(UnknownAtomError):
            parse("a & z", ap={"a"})

    def test_text_round_trip(self):
        for text in ["F a | G b", "G (a | F b)", "F G a & G F !b", "!a"]:
            f = parse(text)
            assert parse(str(f)) == f


class TestStructure:
    def test_atoms(self):
        f = parse("F (a & G b) | c")
        assert atoms(f) == {"a", "b", "c"}
        assert nested_atoms(f) == {"b"}

    def test_infinitary(self):
        assert is_infinitary(parse("G F a & F G (b | c)"))
        assert not is_infinitary(parse("F a | G F b"))
        assert is_infinitary(TT)

    def test_temporal_idempotence(self):
        a = atom("a")
        assert eventually(eventually(a)) == eventually(a)
        assert always(always(a)) == always(a)
        assert eventually(always(eventually(a))) == always(eventually(a))
        assert always(eventually(always(a))) == eventually(always(a))

    def test_negate_is_involution(self):
        for text in ["F a | G b", "G (a | F (b & !c))", "true"]:
            f = parse(text)
            assert negate(negate(f)) == f


class TestCanonical:
    def test_consensus(self):
        assert parse("a & b | !a & b") == atom("b")

    def test_absorption_by_temporal_implication(self):
        assert parse("G a | F a") == parse("F a")
        assert parse("G F a | F G a") == parse("G F a")
        assert parse("G a & F G a") == parse("G a")

    def test_contradiction(self):
        assert parse("a & !a") is FF
        # beyond literals the form is incomplete; the language is still empty
        from genrabin.automata import build_dgrw, check_equiv_bounded

        f = parse("G a & F !a")
        assert check_equiv_bounded(build_dgrw(f), FF, 3) is None

    def test_idempotent(self):
        f = parse("(F G a | G F b) & (F G c | G F d)")
        assert canonicalize(f) == f


class TestLasso:
    def test_basic(self):
        assert eval_lasso(parse("G F a"), w([], [{"a"}, []]))
        assert not eval_lasso(parse("F G a"), w([], [{"a"}, []]))
        assert eval_lasso(parse("F G a"), w([[], []], [{"a"}]))
        assert eval_lasso(parse("a"), w([{"a"}], [[]]))
        assert not eval_lasso(parse("a"), w([], [[]]))

    def test_example_word(self):
        f = parse("F a | G b")
        assert eval_lasso(f, w([{"b"}], [{"b"}]))
        assert eval_lasso(f, w([[], []], [{"a"}]))
        assert not eval_lasso(f, w([{"b"}], [[]]))

    def test_empty_cycle_rejected(self):
        with pytest.raises(ValueError):
            LassoWord((), ())

    def test_disj_semantics(self):
        f = disj(always(atom("a")), eventually(neg_atom("a")))
        assert eval_lasso(f, w([], [[]])) and eval_lasso(f, w([], [{"a"}]))
