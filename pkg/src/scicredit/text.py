"""Light-weight text machinery for acknowledgment statements.

Everything here is rule-based and dependency-free: a letter-run tokenizer,
an abbreviation-aware sentence segmenter, a plural-stripping lemmatizer
that covers the classification vocabulary, and a token-level person-name
matcher tolerant of initials.
"""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[A-Za-z]+")

# Trailing periods after these do not end a sentence.
_ABBREVIATIONS = {"dr", "prof", "mr", "ms", "mrs", "st"}

# Irregular plurals; suffix rules below would mangle these.
_LEMMA_EXCEPTIONS = {
    "analyses": "analysis",
    "databases": "database",
    "hypotheses": "hypothesis",
    "theses": "thesis",
    "series": "series",
    "species": "species",
}

_ES_STEMS = ("ss", "x", "z", "ch", "sh")


def tokenize(text: str) -> list[str]:
    """Return the letter runs of ``text`` with case preserved."""
    return _WORD_RE.findall(text)


def lemmatize(token: str) -> str:
    """Singularize a lowercase token with naive plural rules.

    Only plural endings are stripped (-s, -es, -ies); verbal inflections
    like -ing or -ed are left alone so that e.g. "writing" and "funding"
    survive as their own lemmas.
    """
    word = token.lower()
    if word in _LEMMA_EXCEPTIONS:
        return _LEMMA_EXCEPTIONS[word]
    if len(word) > 4 and word.endswith("ies"):
        return word[:-3] + "y"
    if len(word) > 3 and word.endswith("es") and word[:-2].endswith(_ES_STEMS):
        return word[:-2]
    if len(word) > 3 and word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def extract_lemmas(sentence: str) -> list[str]:
    """Lowercased, singularized tokens of one sentence."""
    return [lemmatize(tok) for tok in tokenize(sentence)]


def _is_guarded_period(text: str, i: int) -> bool:
    """True when the period at ``text[i]`` follows an initial or honorific."""
    j = i
    while j > 0 and text[j - 1].isalpha():
        j -= 1
    word = text[j:i]
    if not word:
        return False
    if len(word) == 1 and word.isupper():
        return True
    lowered = word.lower()
    if lowered in _ABBREVIATIONS:
        return True
    if lowered == "al":
        # "et al." only
        k = j
        while k > 0 and not text[k - 1].isalpha():
            k -= 1
        m = k
        while m > 0 and text[m - 1].isalpha():
            m -= 1
        return text[m:k].lower() == "et"
    return False


def segment_sentences(text: str) -> list[str]:
    """Split text on sentence-final punctuation.

    Periods after single-letter initials ("A. Smith"), honorifics
    ("Dr. Jones"), and "et al." do not terminate a sentence.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in "!?" or (ch == "." and not _is_guarded_period(text, i)):
            while i + 1 < n and text[i + 1] in ".!?":
                i += 1
            chunk = text[start : i + 1].strip()
            if chunk:
                sentences.append(chunk)
            start = i + 1
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_initial_token(token: str) -> bool:
    return len(token) == 1 and token.isalpha()


def name_mentioned(tokens: list[str], given_name: str, family_name: str) -> bool:
    """Token-level person mention test.

    The family name must appear as a capitalized token run; the given name
    is compatible when it appears in full just before it, as a matching
    initial, as full form before a middle initial, or not at all (bare
    family-name mentions count). A different capitalized word directly in
    front of the family name rejects the occurrence.
    """
    family_tokens = tokenize(family_name)
    given_tokens = tokenize(given_name)
    if not family_tokens:
        # single-token names may arrive in the given-name field
        family_tokens, given_tokens = given_tokens, []
    if not family_tokens:
        return False
    fam_folded = [t.casefold() for t in family_tokens]
    given_first = given_tokens[0] if given_tokens else ""

    width = len(fam_folded)
    for pos in range(len(tokens) - width + 1):
        window = tokens[pos : pos + width]
        if not window[-1][:1].isupper():
            continue
        if [t.casefold() for t in window] != fam_folded:
            continue
        if not given_first:
            return True
        prev1 = tokens[pos - 1] if pos >= 1 else None
        prev2 = tokens[pos - 2] if pos >= 2 else None
        if prev1 is None:
            return True
        if prev1.casefold() == given_first.casefold():
            return True
        if _is_initial_token(prev1):
            if prev1.casefold() == given_first[:1].casefold():
                return True
            # middle initial: "John A. Smith"
            if prev2 is not None and prev2.casefold() == given_first.casefold():
                return True
            continue
        if prev1[:1].isupper():
            # some other name in front of the family name
            continue
        return True
    return False
