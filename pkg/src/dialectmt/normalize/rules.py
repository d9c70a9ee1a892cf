"""Ordered spelling rewrite rules with ``^ $ .* C`` meta-characters."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .._validation import check_word

# 'h' is left out: after a vowel it marks length, so "wäh" must not count as CäC
CONSONANTS = "bcdfgjklmnpqrstvwxz"

# (pattern, replacement, example source, example target)
BUILTIN_RULES = (
    (".*scht.*", ".*st.*", "Angscht", "Angst"),
    (".*schp.*", ".*sp.*", "Schprache", "Sprache"),
    ("^gäge.*", "^gegen.*", "Gägesatz", "Gegensatz"),
    ("CäC", "CeC", "Präsident", "President"),
    ("^gm.*", "^gem.*", "Gmeinde", "Gemeinde"),
    ("^gf.*", "^gef.*", "gfunde", "gefunde"),
    ("^gw.*", "^gew.*", "gwählt", "gewählt"),
    ("^aa.*", "^an.*", "Aafang", "Anfang"),
    (".*ig$", ".*ung$", "Regierig", "Regierung"),
    ("^ii.*", "^ein.*", "Iiwohner", "Einwohner"),
)

_META = re.compile(r"\.\*|C|\^|\$|.", re.S)


class RuleError(ValueError):
    """Malformed rewrite rule or rules file."""


def _lex(text: str) -> list[str]:
    return _META.findall(text)


def _split(text: str) -> tuple[bool, bool, list[str]]:
    """Anchors plus the core elements, with edge ``.*`` context removed."""
    parts = _lex(text)
    start = bool(parts) and parts[0] == "^"
    if start:
        parts = parts[1:]
    end = bool(parts) and parts[-1] == "$"
    if end:
        parts = parts[:-1]
    if "^" in parts or "$" in parts:
        raise RuleError(f"anchors must sit at the edges of {text!r}")
    while parts and parts[0] == ".*":
        parts = parts[1:]
    while parts and parts[-1] == ".*":
        parts = parts[:-1]
    return start, end, parts


@dataclass(frozen=True)
class RewriteRule:
    """One pattern/replacement pair.

    A leading or trailing ``.*`` only says the match may sit anywhere in
    the word; interior ``.*`` and ``C`` capture text that the replacement
    reuses in the same order. Matching ignores case, and the first
    rewritten character takes the case of the first matched one.
    """

    pattern: str
    replacement: str
    _regex: re.Pattern = field(init=False, repr=False, compare=False)
    _template: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.pattern:
            raise RuleError("rule pattern must be non-empty")
        p_start, p_end, p_core = _split(self.pattern)
        r_start, r_end, r_core = _split(self.replacement)
        if (p_start, p_end) != (r_start, r_end):
            raise RuleError(f"anchors differ between {self.pattern!r} and {self.replacement!r}")
        holes_p = [x for x in p_core if x in (".*", "C")]
        holes_r = [x for x in r_core if x in (".*", "C")]
        if holes_p != holes_r:
            raise RuleError(
                f"placeholders of {self.pattern!r} and {self.replacement!r} do not correspond")
        if not p_core:
            raise RuleError(f"pattern {self.pattern!r} matches nothing concrete")
        regex = "^" if p_start else ""
        for x in p_core:
            if x == ".*":
                regex += "(.*?)"
            elif x == "C":
                regex += f"([{CONSONANTS}])"
            else:
                regex += re.escape(x)
        regex += "$" if p_end else ""
        template, group = [], 0
        for x in r_core:
            if x in (".*", "C"):
                group += 1
                template.append(group)
            else:
                template.append(x)
        object.__setattr__(self, "_regex", re.compile(regex, re.IGNORECASE))
        object.__setattr__(self, "_template", tuple(template))

    def _substitute(self, match: re.Match) -> str:
        out = "".join(match.group(x) if isinstance(x, int) else x for x in self._template)
        if out and self._template and not isinstance(self._template[0], int):
            first = match.group(0)[:1]
            if first.isupper():
                out = out[0].upper() + out[1:]
            elif first.islower():
                out = out[0].lower() + out[1:]
        return out

    def apply(self, word: str) -> str:
        return self._regex.sub(self._substitute, word)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[RewriteRule, ...]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def apply(self, word: str) -> str:
        for rule in self.rules:
            word = rule.apply(word)
        return word


@functools.lru_cache(maxsize=None)
def default_rules() -> RuleSet:
    return RuleSet(tuple(RewriteRule(p, r) for p, r, _, _ in BUILTIN_RULES))


def apply_rules(word: str, ruleset: RuleSet | None = None) -> str:
    """Run every rule in order; each one rewrites all of its matches."""
    check_word(word)
    return (ruleset or default_rules()).apply(word)


def parse_rules(lines: Iterable[str], source: str = "<rules>") -> RuleSet:
    rules = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise RuleError(f"{source}:{lineno}: expected pattern<TAB>replacement")
        try:
            rules.append(RewriteRule(cols[0].strip(), cols[1].strip()))
        except RuleError as exc:
            raise RuleError(f"{source}:{lineno}: {exc}") from None
    return RuleSet(tuple(rules))


def load_rules(path) -> RuleSet:
    return parse_rules(Path(path).read_text(encoding="utf-8").splitlines(), str(path))


def write_rules(ruleset: RuleSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# pattern\treplacement\n")
        for rule in ruleset:
            fh.write(f"{rule.pattern}\t{rule.replacement}\n")


def check_rules(ruleset: RuleSet) -> list[tuple[str, str, str]]:
    """Run the built-in example words; return (source, expected, got) failures."""
    failures = []
    for _, _, src, expected in BUILTIN_RULES:
        got = ruleset.apply(src)
        if got != expected:
            failures.append((src, expected, got))
    return failures
