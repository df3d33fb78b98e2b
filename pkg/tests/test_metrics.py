import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cfakit.metrics import lcs_length, lexical_unit_scorer, rouge_l_f1, tokenize

words = st.lists(st.sampled_from(["a", "b", "c", "kind", "care"]), min_size=1, max_size=12)


class TestTokenize:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("Be kind, always.", ("be", "kind", "always")),
            ("", ()),
            ("A  B", ("a", "b")),
            ("\u00abHello\u00bb \u2014 world!", ("hello", "world")),
            ("don't stop", ("don't", "stop")),
            ("tab\tand nbsp", ("tab", "and", "nbsp")),
        ],
    )
    def test_rules(self, text, expected):
        assert tokenize(text) == expected


class TestRougeL:
    def test_identical(self):
        s = rouge_l_f1("be kind to others", "be kind to others")
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)

    def test_worked_example(self):
        s = rouge_l_f1("be kind to others", "you should be kind to others")
        assert oracles.lcs_brute(tokenize("be kind to others"), tokenize("you should be kind to others")) == 4
        assert s.precision == 1.0
        assert s.recall == 2 / 3
        assert s.f1 == pytest.approx(0.8, abs=1e-15)

    def test_disjoint(self):
        s = rouge_l_f1("alpha beta", "gamma delta")
        assert (s.precision, s.recall, s.f1) == (0.0, 0.0, 0.0)

    def test_empty(self):
        assert rouge_l_f1("", "something").f1 == 0.0
        assert rouge_l_f1("", "").f1 == 0.0

    @given(words, words)
    def test_symmetry_and_bounds(self, a, b):
        x, y = " ".join(a), " ".join(b)
        s, t = rouge_l_f1(x, y), rouge_l_f1(y, x)
        assert s.f1 == pytest.approx(t.f1, abs=1e-15)
        assert (s.precision, s.recall) == (t.recall, t.precision)
        assert 0.0 <= s.f1 <= 1.0
        assert s.f1 <= 2 * min(s.precision, s.recall) + 1e-15
        if s.precision + s.recall > 0:
            assert s.f1 == pytest.approx(2 * s.precision * s.recall / (s.precision + s.recall), abs=1e-15)

    @given(words)
    def test_self_is_perfect(self, a):
        s = rouge_l_f1(" ".join(a), " ".join(a))
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)

    def test_lcs_brute_force_small(self):
        seqs = [s for n in range(0, 5) for s in itertools.product("xyz", repeat=n)]
        for a in seqs:
            for b in seqs[::3]:
                assert lcs_length(a, b) == oracles.lcs_brute(a, b)


class TestLexicalScorer:
    def test_identical_profile(self):
        text = "care for the weak and the poor"
        assert lexical_unit_scorer(text, ["obey", text]) == [0.0, 1.0]

    def test_no_overlap(self):
        assert lexical_unit_scorer("care", ["obey authority"]) == [0.0]

    def test_worked_example(self):
        s = lexical_unit_scorer("care for children", ["care for the weak", "obey authority"])
        expected = oracles.tf_cosine(["care", "for", "children"], ["care", "for", "the", "weak"])
        assert s[0] == pytest.approx(expected, abs=1e-15)
        assert s[0] == pytest.approx(0.5773502691896258, abs=1e-15)
        assert s[1] == 0.0

    def test_empty(self):
        assert lexical_unit_scorer("", ["a b"]) == [0.0]
        assert lexical_unit_scorer("a", [""]) == [0.0]

    @given(words, st.lists(words, min_size=1, max_size=5))
    def test_matches_oracle(self, unit, profiles):
        got = lexical_unit_scorer(" ".join(unit), [" ".join(p) for p in profiles])
        assert len(got) == len(profiles)
        for g, p in zip(got, profiles):
            assert g == pytest.approx(oracles.tf_cosine(unit, p), abs=1e-12)
            assert 0.0 <= g <= 1.0
