"""Linguistic features of posts and per-user language profiles.

Category fractions work off a pluggable lexicon (``category<TAB>pattern``
lines, patterns ending in ``*`` match by prefix). The bundled lexicon is a
small open substitute for the usual proprietary category dictionaries.
Sentiment is valence-lexicon based.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .ingest import Corpus

SENTENCE_PUNCTUATION = frozenset(".,;:!?'\"-()")

_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")
_WORD = re.compile(r"(?:[^\W_]|')+")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")

ASSENT, NEGATION, DISSENT = "assent", "negate", "dissent"


@dataclass(frozen=True)
class CharCounts:
    """Counts over non-whitespace characters.

    ``alphanumeric + punctuation + special == total``; ``alphabetic`` and
    ``uppercase`` are subsets of ``alphanumeric``.
    """

    total: int = 0
    alphanumeric: int = 0
    alphabetic: int = 0
    uppercase: int = 0
    punctuation: int = 0
    special: int = 0

    def __add__(self, other: "CharCounts") -> "CharCounts":
        return CharCounts(*(a + b for a, b in zip(self.astuple(), other.astuple())))

    def astuple(self) -> tuple[int, ...]:
        return (self.total, self.alphanumeric, self.alphabetic, self.uppercase, self.punctuation, self.special)


@dataclass(frozen=True)
class TokenizedText:
    sentences: tuple[tuple[str, ...], ...]
    char_counts: CharCounts
    syllable_counts: tuple[int, ...]

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(w for s in self.sentences for w in s)

    @property
    def n_words(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)


def count_syllables(word: str) -> int:
    """Vowel-group count with a silent trailing ``e`` dropped; at least 1."""
    word = word.lower().strip("'")
    n = len(_VOWEL_GROUP.findall(word))
    if n > 1 and word.endswith("e") and not word.endswith(("le", "ee", "ye")):
        n -= 1
    return max(n, 1)


def count_chars(text: str) -> CharCounts:
    total = alnum = alpha = upper = punct = special = 0
    for ch in text:
        if ch.isspace():
            continue
        total += 1
        if ch.isalnum():
            alnum += 1
            if ch.isalpha():
                alpha += 1
                if ch.isupper():
                    upper += 1
        elif ch in SENTENCE_PUNCTUATION:
            punct += 1
        else:
            special += 1
    return CharCounts(total, alnum, alpha, upper, punct, special)


def _words(chunk: str) -> list[str]:
    out = []
    for match in _WORD.findall(chunk):
        word = match.strip("'")
        if word:
            out.append(word)
    return out


def tokenize(text: str) -> TokenizedText:
    """Split text into lowercased words grouped by sentence.

    Sentences end at ``.``, ``!`` or ``?`` followed by whitespace or the
    end of the text; chunks without words are dropped.
    """
    sentences = []
    for chunk in _SENTENCE_END.split(text):
        words = tuple(w.lower() for w in _words(chunk))
        if words:
            sentences.append(words)
    syllables = tuple(count_syllables(w) for s in sentences for w in s)
    return TokenizedText(tuple(sentences), count_chars(text), syllables)


# -- lexicons -----------------------------------------------------------------


@dataclass(frozen=True)
class Lexicon:
    categories: Mapping[str, frozenset[str]]
    valence: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, patterns in self.categories.items():
            for pat in patterns:
                if not pat or pat == "*":
                    raise ValueError(f"empty pattern in category {name!r}")
                if "*" in pat[:-1]:
                    raise ValueError(f"pattern {pat!r} may only end with a single '*'")
        literal = {}
        prefixes = {}
        for name, patterns in self.categories.items():
            literal[name] = frozenset(p for p in patterns if not p.endswith("*"))
            prefixes[name] = tuple(sorted(p[:-1] for p in patterns if p.endswith("*")))
        object.__setattr__(self, "_literal", literal)
        object.__setattr__(self, "_prefixes", prefixes)

    @property
    def category_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.categories))

    def matches(self, category: str, word: str) -> bool:
        if word in self._literal[category]:
            return True
        return any(word.startswith(p) for p in self._prefixes[category])

    def with_valence(self, valence: Mapping[str, float]) -> "Lexicon":
        return Lexicon(self.categories, dict(valence))


def _read_tsv(lines: Iterable[str]) -> list[tuple[str, str]]:
    rows = []
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {line_no}: expected two tab-separated fields")
        rows.append((parts[0].strip(), parts[1].strip()))
    return rows


def parse_lexicon(lines: Iterable[str]) -> dict[str, frozenset[str]]:
    cats: dict[str, set[str]] = {}
    for category, pattern in _read_tsv(lines):
        cats.setdefault(category, set()).add(pattern.lower())
    return {k: frozenset(v) for k, v in cats.items()}


def parse_valence(lines: Iterable[str]) -> dict[str, float]:
    return {word.lower(): float(score) for word, score in _read_tsv(lines)}


def load_lexicon(
    lexicon_path: Union[str, Path, None] = None,
    valence_path: Union[str, Path, None] = None,
) -> Lexicon:
    """Load category and valence files; ``None`` picks the bundled ones."""
    data = resources.files("sockpuppet") / "data"
    lex_src = Path(lexicon_path) if lexicon_path else data / "lexicon.tsv"
    val_src = Path(valence_path) if valence_path else data / "valence.tsv"
    with lex_src.open(encoding="utf-8") as fh:
        cats = parse_lexicon(fh)
    with val_src.open(encoding="utf-8") as fh:
        valence = parse_valence(fh)
    return Lexicon(cats, valence)


def default_lexicon() -> Lexicon:
    return load_lexicon()


# -- per-text measures --------------------------------------------------------


def _require_words(tokens: TokenizedText) -> None:
    if tokens.n_words == 0:
        raise ValueError("no words")


def _category_counts(words: Sequence[str], lexicon: Lexicon) -> dict[str, int]:
    counts = Counter(words)
    return {
        cat: sum(n for w, n in counts.items() if lexicon.matches(cat, w))
        for cat in lexicon.category_names
    }


def category_fractions(tokens: TokenizedText, lexicon: Lexicon) -> dict[str, float]:
    _require_words(tokens)
    n = tokens.n_words
    return {cat: c / n for cat, c in _category_counts(tokens.words, lexicon).items()}


def _ari(alnum: int, words: int, sentences: int) -> float:
    return 4.71 * (alnum / words) + 0.5 * (words / sentences) - 21.43


def readability_ari(tokens: TokenizedText) -> float:
    """Automated readability index."""
    if tokens.n_words == 0 or tokens.n_sentences == 0:
        raise ValueError("no words")
    return _ari(tokens.char_counts.alphanumeric, tokens.n_words, tokens.n_sentences)


def _valence_sums(words: Iterable[str], lexicon: Lexicon) -> tuple[float, float]:
    pos = neg = 0.0
    for w in words:
        v = lexicon.valence.get(w)
        if v is None:
            continue
        if v > 0:
            pos += v
        else:
            neg -= v
    return pos, neg


def sentiment(tokens: TokenizedText, lexicon: Lexicon) -> tuple[float, float, float]:
    """Return ``(positive, negative, compound)`` per word of text."""
    _require_words(tokens)
    pos, neg = _valence_sums(tokens.words, lexicon)
    n = tokens.n_words
    return pos / n, neg / n, (pos - neg) / n


def _agreement_from_words(words: Sequence[str], lexicon: Lexicon) -> float:
    n = len(words)
    assent = sum(1 for w in words if lexicon.matches(ASSENT, w))
    against = sum(1 for w in words if lexicon.matches(NEGATION, w) or lexicon.matches(DISSENT, w))
    return (assent - against) / n


def agreement_score(tokens: TokenizedText, lexicon: Lexicon) -> float:
    """Assent-word fraction minus negation-or-dissent-word fraction."""
    _require_words(tokens)
    for cat in (ASSENT, NEGATION, DISSENT):
        if cat not in lexicon.categories:
            raise ValueError(f"lexicon lacks category {cat!r}")
    return _agreement_from_words(tokens.words, lexicon)


def text_agreement(text: str, lexicon: Lexicon) -> float:
    """Agreement score of raw text; 0.0 for texts without words."""
    tokens = tokenize(text)
    if tokens.n_words == 0:
        return 0.0
    return agreement_score(tokens, lexicon)


# -- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class LanguageProfile:
    account_id: str
    features: Mapping[str, float]
    n_posts: int

    def names(self) -> tuple[str, ...]:
        return tuple(self.features)

    def vector(self) -> list[float]:
        return list(self.features.values())


_PROFILE_SCALARS = (
    "words_per_sentence",
    "syllables_per_word",
    "word_length",
    "ari",
    "sentiment_positive",
    "sentiment_negative",
    "sentiment_compound",
    "emotion_strength",
    "agreement",
    "frac_alphabetic",
    "frac_uppercase",
    "frac_punctuation",
    "frac_special",
    "post_length_words",
)


def profile_feature_names(lexicon: Lexicon) -> tuple[str, ...]:
    return tuple(f"lex_{c}" for c in lexicon.category_names) + _PROFILE_SCALARS


def profile_from_texts(texts: Iterable[str], lexicon: Lexicon, account_id: str = "") -> LanguageProfile:
    """Pool word-level counts over texts and derive profile features.

    Ratios (category fractions, words per sentence, ARI, character
    fractions, sentiment) are pooled over all words; post length is the
    plain mean over posts. Texts without words are skipped.
    """
    words: list[str] = []
    n_sentences = 0
    n_syllables = 0
    chars = CharCounts()
    post_lengths = []
    for text in texts:
        tokens = tokenize(text)
        if tokens.n_words == 0:
            continue
        words.extend(tokens.words)
        n_sentences += tokens.n_sentences
        n_syllables += sum(tokens.syllable_counts)
        chars = chars + tokens.char_counts
        post_lengths.append(tokens.n_words)
    if not post_lengths:
        raise ValueError(f"account {account_id!r} has no nonempty posts")

    n = len(words)
    features: dict[str, float] = {}
    for cat, count in _category_counts(words, lexicon).items():
        features[f"lex_{cat}"] = count / n
    features["words_per_sentence"] = n / n_sentences
    features["syllables_per_word"] = n_syllables / n
    features["word_length"] = sum(len(w) for w in words) / n
    features["ari"] = _ari(chars.alphanumeric, n, n_sentences)
    pos, neg = _valence_sums(words, lexicon)
    features["sentiment_positive"] = pos / n
    features["sentiment_negative"] = neg / n
    features["sentiment_compound"] = (pos - neg) / n
    features["emotion_strength"] = (pos + neg) / n
    has_agreement = all(c in lexicon.categories for c in (ASSENT, NEGATION, DISSENT))
    features["agreement"] = _agreement_from_words(words, lexicon) if has_agreement else 0.0
    total = chars.total or 1
    features["frac_alphabetic"] = chars.alphabetic / total
    features["frac_uppercase"] = chars.uppercase / total
    features["frac_punctuation"] = chars.punctuation / total
    features["frac_special"] = chars.special / total
    features["post_length_words"] = sum(post_lengths) / len(post_lengths)
    return LanguageProfile(account_id, features, len(post_lengths))


def user_profile(corpus: Corpus, account_id: str, lexicon: Lexicon) -> LanguageProfile:
    posts = corpus.posts_of(account_id)
    if not posts:
        raise ValueError(f"account {account_id!r} has no posts")
    return profile_from_texts((p.text for p in posts), lexicon, account_id)


def profile_similarity(p1: Union[LanguageProfile, Mapping[str, float]], p2: Union[LanguageProfile, Mapping[str, float]]) -> float:
    """Cosine similarity of two profiles' feature vectors (0 for a zero vector)."""
    f1 = p1.features if isinstance(p1, LanguageProfile) else p1
    f2 = p2.features if isinstance(p2, LanguageProfile) else p2
    if set(f1) != set(f2):
        raise ValueError("profiles have different feature sets")
    names = sorted(f1)
    a = [float(f1[k]) for k in names]
    b = [float(f2[k]) for k in names]
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0 or nb == 0:
        return 0.0
    cos = sum(x * y for x, y in zip(a, b)) / (na * nb)
    return max(-1.0, min(1.0, cos))


@dataclass
class DoubleLifeComparison:
    s1_s2: float
    s1_o: float
    s2_o: float

    @property
    def pair_most_similar(self) -> bool:
        return self.s1_s2 > max(self.s1_o, self.s2_o)


def compare_triple(s1: LanguageProfile, s2: LanguageProfile, ordinary: LanguageProfile) -> DoubleLifeComparison:
    return DoubleLifeComparison(
        profile_similarity(s1, s2), profile_similarity(s1, ordinary), profile_similarity(s2, ordinary)
    )
