import pytest
from hypothesis import given, strategies as st

from dialectmt.normalize.rules import (BUILTIN_RULES, RewriteRule, RuleError, RuleSet, apply_rules,
                                       check_rules, default_rules, load_rules, parse_rules,
                                       write_rules)


@pytest.mark.parametrize("source,expected", [(row[2], row[3]) for row in BUILTIN_RULES])
def test_table_rows(source, expected):
    assert apply_rules(source) == expected


def test_default_rule_order_matches_table():
    assert [r.pattern for r in default_rules()] == [row[0] for row in BUILTIN_RULES]
    assert len(default_rules()) == 10


@pytest.mark.parametrize("word", ["und", "Haus", "Bern", "Bäume"])
def test_untouched_words(word):
    assert apply_rules(word) == word


def test_every_match_replaced():
    assert apply_rules("Schtadtschtross") == "Stadtstross"


def test_case_follows_first_matched_character():
    assert apply_rules("SCHTADT") == "StADT"
    assert apply_rules("gschtande") == "gstande"
    assert RewriteRule("^ii.*", "^ein.*").apply("IIwohner") == "Einwohner"


def test_consonant_class_captures():
    rule = RewriteRule("CäC", "CeC")
    assert rule.apply("Präsidänt") == "President"
    # a vowel or h next to ä blocks the rule
    assert rule.apply("Bäume") == "Bäume"
    assert rule.apply("wählt") == "wählt"


def test_interior_wildcard_is_captured():
    assert RewriteRule("a.*b", "c.*d").apply("xaYYbx") == "xcYYdx"


def test_rules_chain_in_order():
    chain = RuleSet((RewriteRule("ab", "bc"), RewriteRule("bc", "x")))
    assert chain.apply("ab") == "x"
    reverse = RuleSet((RewriteRule("bc", "x"), RewriteRule("ab", "bc")))
    assert reverse.apply("ab") == "bc"


@pytest.mark.parametrize("pattern,replacement", [
    ("^gm.*", "^gem"),       # trailing context on one side only is fine...
    ("C.*C", "C.*"),         # ...but placeholder counts must agree
    ("", "x"),
    ("a^b", "ab"),
    ("^ab", "ab"),
])
def test_malformed_rules(pattern, replacement):
    if (pattern, replacement) == ("^gm.*", "^gem"):
        assert RewriteRule(pattern, replacement).apply("Gmeinde") == "Gemeinde"
        return
    with pytest.raises(RuleError):
        RewriteRule(pattern, replacement)


@given(st.text(alphabet="abcdeghinstuwäüAGS", min_size=1, max_size=12))
def test_deterministic_and_idempotent_on_clean_words(word):
    once = apply_rules(word)
    assert once == apply_rules(word)
    assert once


class TestRulesFile:
    def test_round_trip(self, tmp_path):
        write_rules(default_rules(), tmp_path / "rules.tsv")
        assert load_rules(tmp_path / "rules.tsv") == default_rules()

    def test_comments_and_blank_lines(self):
        rules = parse_rules(["# header", "", ".*scht.*\t.*st.*", "  # indented"])
        assert len(rules) == 1

    def test_errors_name_line(self):
        with pytest.raises(RuleError, match=":2:"):
            parse_rules(["a\tb", "only-one-column"])
        with pytest.raises(RuleError, match=":1:"):
            parse_rules(["C.*C\tC"])

    def test_check_rules(self):
        assert check_rules(default_rules()) == []
        broken = RuleSet(tuple(r for r in default_rules() if r.pattern != ".*ig$"))
        assert check_rules(broken) == [("Regierig", "Regierung", "Regierig")]
