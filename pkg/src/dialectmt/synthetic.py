"""Synthetic standard/dialect data for end-to-end checks.

Standard-language text is generated from sentence templates over a German
lexicon built from real stems and regular inflection. Pseudo-dialect text
comes from applying inverse spelling perturbations word by word, so every
generated sentence pair is aligned one-to-one. A letter-to-sound table
supplies a pronunciation dictionary for the same lexicon.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

VERB_STEMS = (
    "arbeit", "bau", "brauch", "dank", "deck", "fass", "folg", "frag", "führ", "füll",
    "glaub", "hol", "hör", "kauf", "kehr", "koch", "lach", "leb", "leg", "lehr", "lern",
    "lieb", "lob", "mach", "mal", "mein", "meld", "pack", "plan", "prüf", "putz", "red",
    "reis", "richt", "sag", "schau", "schick", "setz", "sorg", "spar", "spiel", "stell",
    "stimm", "stör", "stütz", "such", "tanz", "teil", "träum", "wähl", "warn", "wart",
    "weck", "wein", "wirk", "wohn", "wünsch", "zahl", "zähl", "zeig", "besteh", "bestell",
    "spür", "sperr", "spend", "spann", "stell", "steig", "stopp", "streik", "streu",
    "fehl", "feier", "fürcht", "fest", "mess", "melk", "merk", "wend", "werb", "wett",
    "wechsel", "wander", "sammel", "zweifel", "handel", "dien", "drück", "ernt", "fisch",
    "grüss", "heil", "hoff", "jag", "kämpf", "klopf", "kleb", "kost", "kratz", "lenk",
    "leist", "leucht", "lös", "nütz", "pfleg", "rett", "rühr", "schalt", "schätz",
    "schenk", "schmeck", "schütz", "segel", "sprung", "starr", "tausch", "trenn", "üb",
)

NOUNS = (
    "Angst", "Anfang", "Ansicht", "Anteil", "Antwort", "Anzahl", "Arbeit", "Ast", "Berg",
    "Bett", "Bild", "Brief", "Brot", "Bruder", "Buch", "Burg", "Dach", "Dorf", "Ecke",
    "Einwohner", "Eingang", "Einfluss", "Einladung", "Einkauf", "Ende", "Fest", "Fenster",
    "Feld", "Geld", "Gemeinde", "Gemüse", "Gefahr", "Gefühl", "Gewinn", "Gewitter",
    "Gegensatz", "Gegend", "Gegner", "Geschäft", "Gesetz", "Haus", "Hand", "Herbst",
    "Herz", "Himmel", "Hund", "Kind", "Kirche", "Kopf", "Kraft", "Land", "Leben", "Licht",
    "Luft", "Markt", "Meinung", "Mensch", "Messer", "Nacht", "Nest", "Osten", "Pferd",
    "Post", "Präsident", "Regierung", "Rest", "Schule", "Schwester", "Sprache", "Spiel",
    "Spital", "Sport", "Spur", "Stadt", "Stein", "Stelle", "Stern", "Stimme", "Strasse",
    "Stuhl", "Stunde", "Sturm", "Tisch", "Traum", "Vater", "Wahl", "Wald", "Wasser",
    "Weg", "Welt", "Wetter", "Winter", "Wohnung", "Zeitung", "Zeit", "Zug", "Bauer",
    "Baum", "Frau", "Maus", "Raum", "Schaum", "Zaun", "Auge", "Auto", "Bank", "Bach",
    "Zahlung", "Rechnung", "Ordnung", "Richtung", "Stellung", "Sammlung", "Leistung",
    "Lösung", "Hoffnung", "Heizung", "Werbung", "Wanderung", "Wetterstation",
    "Festung", "Prüfung", "Übung", "Stimmung", "Sitzung", "Störung", "Spende",
    "Spannung", "Sperre", "Ernte", "Nest", "Westen", "Kiste", "Liste", "Geste", "Küste",
    "Gast", "Last", "Mast", "Post", "Frost", "Kunst", "Wurst", "Durst", "Lust", "Brust",
    "Dienst", "Gespräch", "Gepäck", "Gebiet", "Gebäude", "Geburt", "Gedanke",
    "Getreide", "Gewerbe", "Gewicht", "Gemälde", "Gefängnis", "Geflügel",
    "Gemeinderat", "Stadtrat", "Bergweg", "Waldweg", "Hausdach", "Kirchturm",
    "Wasserfall", "Feldweg", "Marktplatz", "Spielplatz", "Sportplatz", "Sternbild",
    "Winterzeit", "Herbstwetter", "Weltkarte", "Zugstrecke", "Schulweg", "Steinbruch",
)

ADJ_STEMS = (
    "alt", "arm", "best", "billig", "bunt", "dick", "dünn", "echt", "einfach", "eng",
    "fest", "fett", "fremd", "froh", "ganz", "gern", "gleich", "grob", "gross", "gut",
    "hart", "hell", "hoch", "jung", "kalt", "klein", "klug", "krank", "kurz", "lang",
    "laut", "leer", "leicht", "lieb", "neu", "nett", "reich", "rein", "ruhig", "satt",
    "schnell", "schön", "schwer", "spät", "spitz", "stark", "steil", "still", "streng",
    "teuer", "tief", "treu", "warm", "weich", "weit", "wild", "zäh", "zart", "sonnig",
    "wichtig", "richtig", "fertig", "lustig", "günstig", "traurig", "ledig", "mutig",
)

ADVERBS = ("gern", "oft", "heute", "morgen", "immer", "selten", "bald", "jetzt", "schon",
           "sehr", "gestern", "wieder", "dann", "dort", "hier")

PREPOSITIONS = ("mit", "in", "auf", "aus", "für", "über", "gegen", "nach", "von", "bei")

# German function word -> fixed dialect spelling
FUNCTION_WORDS = {
    "ich": "i", "du": "du", "er": "er", "sie": "si", "wir": "mir", "ihr": "dir",
    "der": "de", "die": "d", "das": "s", "den": "de", "dem": "em", "ein": "e",
    "eine": "e", "einen": "en", "und": "und", "nicht": "nöd", "ist": "isch",
    "hat": "het", "habe": "ha", "haben": "händ", "hast": "häsch", "sind": "sind",
    "will": "wott", "kann": "cha", "muss": "mues", "soll": "söll", "auf": "uf",
    "aus": "us", "mit": "mit", "in": "i", "für": "für", "über": "über", "gegen": "gäge",
    "nach": "nach", "von": "vo", "bei": "bi", "auch": "au", "sehr": "sehr", "heute": "hüt",
    "morgen": "morn", "immer": "immer", "oft": "oft", "selten": "selte", "bald": "bald",
    "jetzt": "jetzt", "schon": "scho", "gestern": "geschter", "wieder": "wieder",
    "dann": "denn", "dort": "dört", "hier": "do", "gern": "gärn",
}

_CONS = "bcdfgjklmnpqrstvwxzß"


@dataclass(frozen=True)
class Perturbation:
    name: str
    pattern: str
    replacement: str
    invertible: bool  # inverse of one of the built-in rewrite rules


PERTURBATIONS = (
    Perturbation("st", r"st", "scht", True),
    Perturbation("sp", r"sp", "schp", True),
    Perturbation("gegen", r"^gegen", "gäge", True),
    Perturbation("e-umlaut", rf"(?<=[{_CONS}])e(?=[{_CONS}])", "ä", True),
    Perturbation("gem", r"^gem", "gm", True),
    Perturbation("gef", r"^gef", "gf", True),
    Perturbation("gew", r"^gew", "gw", True),
    Perturbation("an", r"^an", "aa", True),
    Perturbation("ung", r"ung$", "ig", True),
    Perturbation("ein", r"^ein", "ii", True),
    Perturbation("final-n", r"(?<=.[^e])en$", "e", False),
    Perturbation("au", r"au", "uu", False),
    Perturbation("ei", r"(?<=.)ei", "ii", False),
)


def _match_case(replacement: str, original: str) -> str:
    if original[:1].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def perturb_word(word: str, rng: random.Random, rate: float = 0.8,
                 rules_only: bool = False) -> str:
    """Dialect-like respelling: each applicable perturbation fires with ``rate``.

    Function words map to a fixed dialect form instead.
    """
    lower = word.lower()
    if lower in FUNCTION_WORDS and not rules_only:
        return _match_case(FUNCTION_WORDS[lower], word)
    out = word
    for pert in PERTURBATIONS:
        if rules_only and not pert.invertible:
            continue
        if pert.name == "e-umlaut":
            # one draw per occurrence
            def sub(m, rng=rng):
                return pert.replacement if rng.random() < rate * 0.5 else m.group(0)
            out = re.sub(pert.pattern, sub, out, flags=re.IGNORECASE)
            continue
        if not re.search(pert.pattern, out, flags=re.IGNORECASE):
            continue
        if rng.random() < rate:
            out = re.sub(pert.pattern, lambda m: _match_case(pert.replacement, m.group(0)),
                         out, flags=re.IGNORECASE)
    return out


def german_lexicon() -> dict[str, list[str]]:
    """Inflected forms by category."""
    verbs_inf = [s + ("n" if s.endswith(("el", "er")) else "en") for s in VERB_STEMS]
    verbs_3sg = [s + ("et" if s.endswith(("t", "d")) else "t") for s in VERB_STEMS]
    verbs_2sg = [s + ("est" if s.endswith(("t", "d", "s", "ss", "z")) else "st")
                 for s in VERB_STEMS]
    verbs_1sg = [s + "e" for s in VERB_STEMS]
    participles = []
    for s in VERB_STEMS:
        if s.startswith("be"):
            participles.append(s + "t")
        else:
            participles.append("ge" + s + ("et" if s.endswith(("t", "d")) else "t"))
    verbs_past = [s + ("ete" if s.endswith(("t", "d")) else "te") for s in VERB_STEMS]
    prefixed = ["an" + v for v in verbs_inf[::3]] + ["ein" + v for v in verbs_inf[1::3]]
    compounds = [a + b.lower() for a in NOUNS[:60] for b in NOUNS[60:78] if a != b]
    adjectives = list(ADJ_STEMS)
    adj_inflected = [a + suf for a in ADJ_STEMS for suf in ("e", "en", "er", "es")]
    plurals = []
    for n in NOUNS:
        if n.endswith("e"):
            plurals.append(n + "n")
        elif n.endswith("ung"):
            plurals.append(n + "en")
        else:
            plurals.append(n + "e")
    return {
        "verb_inf": _dedup(verbs_inf + prefixed),
        "verb_3sg": _dedup(verbs_3sg),
        "verb_2sg": _dedup(verbs_2sg),
        "verb_1sg": _dedup(verbs_1sg),
        "verb_past": _dedup(verbs_past),
        "participle": _dedup(participles),
        "noun": _dedup(list(NOUNS) + compounds),
        "noun_pl": _dedup(plurals),
        "adjective": _dedup(adjectives),
        "adj_inflected": _dedup(adj_inflected),
    }


def _dedup(items):
    return list(dict.fromkeys(items))


def german_words() -> list[str]:
    """Every distinct content-word form of the lexicon, in a stable order."""
    lex = german_lexicon()
    return _dedup(w for forms in lex.values() for w in forms)


_TEMPLATES = (
    ("PRON3", "verb_3sg", "DET", "noun", "ADV", "."),
    ("DET", "adj_inflected", "noun", "verb_3sg", "PREP", "DET", "noun", "."),
    ("ich", "habe", "DET", "noun", "participle", "."),
    ("wir", "haben", "DET", "noun_pl", "ADV", "participle", "."),
    ("DET", "noun", "verb_3sg", "nicht", "."),
    ("PRON3", "MODAL", "DET", "noun", "verb_inf", "."),
    ("du", "verb_2sg", "DET", "adj_inflected", "noun", "."),
    ("ich", "verb_1sg", "DET", "noun_pl", "PREP", "DET", "noun", "."),
    ("DET", "noun", "ist", "ADV", "adjective", "."),
    ("PRON3", "verb_past", "DET", "noun", "ADV", "."),
    ("PRON3", "hat", "DET", "noun", "PREP", "DET", "noun", "participle", "."),
)

_FILLERS = {
    "PRON3": ("er", "sie"),
    "DET": ("der", "die", "das", "den", "dem", "ein", "eine", "einen"),
    "MODAL": ("will", "kann", "muss", "soll"),
    "ADV": ADVERBS,
    "PREP": PREPOSITIONS,
}


def german_sentences(n: int, seed: int = 0) -> list[list[str]]:
    rng = random.Random(seed)
    lex = german_lexicon()
    out = []
    for _ in range(n):
        template = rng.choice(_TEMPLATES)
        sent = []
        for slot in template:
            if slot in lex:
                sent.append(rng.choice(lex[slot]))
            elif slot in _FILLERS:
                sent.append(rng.choice(_FILLERS[slot]))
            else:
                sent.append(slot)
        sent[0] = sent[0][:1].upper() + sent[0][1:]
        out.append(sent)
    return out


def dialect_sentence(sentence: list[str], rng: random.Random, rate: float = 0.8) -> list[str]:
    out = []
    for i, tok in enumerate(sentence):
        if not any(ch.isalpha() for ch in tok):
            out.append(tok)
            continue
        # sentence-initial capitals are not part of the word form
        base = tok[:1].lower() + tok[1:] if i == 0 and tok.lower() in FUNCTION_WORDS else tok
        new = perturb_word(base, rng, rate)
        if i == 0:
            new = new[:1].upper() + new[1:]
        out.append(new)
    return out


def word_pairs(words: list[str], seed: int = 0, rate: float = 0.8,
               rules_only: bool = True) -> list[tuple[str, str]]:
    """(perturbed, original) for each word."""
    rng = random.Random(seed)
    return [(perturb_word(w, rng, rate, rules_only=rules_only), w) for w in words]


# letter-to-sound rules, longest match first
_LTS = (
    ("sch", ("S",)), ("tsch", ("t", "S")), ("ch", ("x",)), ("ck", ("k",)), ("ng", ("N",)),
    ("nk", ("N", "k")), ("ph", ("f",)), ("qu", ("k", "v")), ("tz", ("ts",)),
    ("ei", ("aI",)), ("ie", ("i:",)), ("au", ("aU",)), ("eu", ("OY",)), ("äu", ("OY",)),
    ("aa", ("a:",)), ("ee", ("e:",)), ("oo", ("o:",)), ("ah", ("a:",)), ("eh", ("e:",)),
    ("oh", ("o:",)), ("uh", ("u:",)), ("äh", ("E:",)), ("öh", ("2:",)), ("üh", ("y:",)),
    ("ss", ("s",)), ("ß", ("s",)), ("ff", ("f",)), ("ll", ("l",)), ("mm", ("m",)),
    ("nn", ("n",)), ("pp", ("p",)), ("rr", ("r",)), ("tt", ("t",)), ("dd", ("d",)),
    ("bb", ("b",)), ("gg", ("g",)),
    ("a", ("a",)), ("e", ("E",)), ("i", ("I",)), ("o", ("O",)), ("u", ("U",)),
    ("ä", ("E",)), ("ö", ("9",)), ("ü", ("Y",)), ("y", ("Y",)),
    ("b", ("b",)), ("c", ("k",)), ("d", ("d",)), ("f", ("f",)), ("g", ("g",)),
    ("h", ("h",)), ("j", ("j",)), ("k", ("k",)), ("l", ("l",)), ("m", ("m",)),
    ("n", ("n",)), ("p", ("p",)), ("r", ("r",)), ("s", ("z",)), ("t", ("t",)),
    ("v", ("f",)), ("w", ("v",)), ("x", ("k", "s")), ("z", ("ts",)),
)


def pronounce(word: str) -> tuple[str, ...]:
    """Rough German pronunciation of ``word`` (SAMPA-like symbols)."""
    w = word.lower()
    phones: list[str] = []
    i = 0
    if w.startswith(("st", "sp")):
        phones.append("S")
        i = 1
    while i < len(w):
        if w[i:] in ("e", "en", "er") and i > 0:
            phones.extend({"e": ("@",), "en": ("@", "n"), "er": ("6",)}[w[i:]])
            break
        for graph, ph in _LTS:
            if w.startswith(graph, i):
                if graph == "s" and i + 1 < len(w) and w[i + 1] in _CONS:
                    ph = ("s",)
                if graph == "s" and i == len(w) - 1:
                    ph = ("s",)
                phones.extend(ph)
                i += len(graph)
                break
        else:
            i += 1
    return tuple(phones) or ("@",)


# extra dictionary words so every letter occurs in many contexts
PRONUNCIATION_EXTRAS = (
    "Mädchen", "Käse", "Bär", "Märchen", "Länder", "Äpfel", "spät", "hätte", "Ärger",
    "wählen", "Stärke", "älter", "Blätter", "Hände", "Gäste", "Plätze", "Sätze", "Säle",
    "Fähre", "Träne", "Nähe", "März", "Kälte", "Wärme", "Mächte", "Ställe", "Schätze",
    "Gelände", "Verständnis", "Geschäft", "Häfen", "Bäcker", "Gärten", "Väter", "Täter",
    "Öfen", "schön", "hören", "Töne", "Größe", "möglich", "König", "Köpfe", "Vögel",
    "Übung", "früh", "Tür", "Güte", "Mühe", "Brücke", "Bäume", "Häuser", "Mäuse",
    "Cafe", "Chor", "Yacht", "Quelle", "Xylofon", "Jäger", "Zähne", "Zwerg", "Pfanne",
)


def pronunciation_dictionary(words: list[str]) -> list[tuple[str, tuple[str, ...]]]:
    return [(w, pronounce(w)) for w in words]


@dataclass
class SyntheticData:
    train: list[tuple[list[str], list[str]]]
    dev: list[tuple[list[str], list[str]]]
    test: list[tuple[list[str], list[str]]]
    monolingual: list[list[str]]
    char_pairs: list[tuple[str, str]]
    pronunciations: list[tuple[str, tuple[str, ...]]]


def make_synthetic_data(n_pairs: int = 5000, n_test: int = 1000, n_dev: int = 200,
                        n_monolingual: int = 5000, rate: float = 0.8,
                        seed: int = 0) -> SyntheticData:
    """One half of a generated German corpus becomes pseudo-dialect parallel
    data; the other half is left as monolingual language-model text.

    Character-model pairs come from perturbing the monolingual vocabulary,
    so the perturbation patterns of the test set are seen in training.
    """
    german = german_sentences(n_pairs + n_dev + n_monolingual, seed=seed)
    rng = random.Random(seed + 1)
    parallel = [(dialect_sentence(s, rng, rate), s) for s in german[:n_pairs + n_dev]]
    train = parallel[:n_pairs - n_test]
    test = parallel[n_pairs - n_test:n_pairs]
    dev = parallel[n_pairs:]
    mono = german[n_pairs + n_dev:]

    char_rng = random.Random(seed + 2)
    mono_words = _dedup(w for s in mono for w in s if any(ch.isalpha() for ch in w)
                        and w.lower() not in FUNCTION_WORDS)
    char_pairs = []
    for _ in range(3):
        char_pairs.extend((perturb_word(w, char_rng, rate), w) for w in mono_words)
    for src, tgt in train:
        char_pairs.extend((s, t) for s, t in zip(src, tgt)
                          if any(ch.isalpha() for ch in t) and t.lower() not in FUNCTION_WORDS)
    char_pairs = _dedup(char_pairs)
    prons = pronunciation_dictionary(_dedup([*german_words(), *PRONUNCIATION_EXTRAS]))
    return SyntheticData(train, dev, test, mono, char_pairs, prons)


def write_synthetic_data(data: SyntheticData, directory) -> dict[str, str]:
    """Write the data set as plain-text files; return their paths by role."""
    from pathlib import Path

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = {}

    def write_lines(name, lines):
        p = d / name
        p.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        paths[name] = str(p)

    for split in ("train", "dev", "test"):
        pairs = getattr(data, split)
        write_lines(f"{split}.gsw", [" ".join(s) for s, _ in pairs])
        write_lines(f"{split}.de", [" ".join(t) for _, t in pairs])
    write_lines("mono.de", [" ".join(s) for s in data.monolingual])
    write_lines("char_pairs.tsv", [f"{s}\t{t}" for s, t in data.char_pairs])
    write_lines("pron.dict", [f"{w}\t{' '.join(p)}" for w, p in data.pronunciations])
    return paths
