from hypothesis import given
from hypothesis import strategies as st

from scicredit.text import (
    extract_lemmas,
    lemmatize,
    name_mentioned,
    segment_sentences,
    tokenize,
)


def test_segments_on_terminal_punctuation():
    text = "We thank A. Smith for help. We thank B for data."
    sentences = segment_sentences(text)
    assert sentences == ["We thank A. Smith for help.", "We thank B for data."]
    assert "A. Smith" in sentences[0]


def test_empty_text_gives_no_sentences():
    assert segment_sentences("") == []


def test_honorific_does_not_split():
    assert segment_sentences("We thank Dr. Jones for discussion.") == [
        "We thank Dr. Jones for discussion."
    ]


def test_et_al_and_question_marks():
    text = "Methods follow Li et al. as published. Did it work? Yes!"
    assert segment_sentences(text) == [
        "Methods follow Li et al. as published.",
        "Did it work?",
        "Yes!",
    ]


def test_trailing_text_without_punctuation_kept():
    assert segment_sentences("We thank A for help") == ["We thank A for help"]


# lemmatizer must normalize the whole classification vocabulary
VOCAB_PLURALS = [
    ("assistances", "assistance"),
    ("experiments", "experiment"),
    ("helps", "help"),
    ("measurements", "measurement"),
    ("analyses", "analysis"),
    ("analysis", "analysis"),
    ("collections", "collection"),
    ("designs", "design"),
    ("interpretations", "interpretation"),
    ("codes", "code"),
    ("data", "data"),
    ("works", "work"),
    ("preparations", "preparation"),
    ("accesses", "access"),
    ("access", "access"),
    ("writings", "writing"),
    ("writing", "writing"),
    ("discussions", "discussion"),
    ("reviews", "review"),
    ("foundations", "foundation"),
    ("funded", "funded"),
    ("funding", "funding"),
    ("grants", "grant"),
    ("databases", "database"),
    ("studies", "study"),
]


def test_lemmatizer_over_vocabulary():
    for word, lemma in VOCAB_PLURALS:
        assert lemmatize(word) == lemma, word


def test_extract_lemmas_lowers_and_singularizes():
    assert "discussion" in extract_lemmas("helpful Discussions")
    assert "analysis" in extract_lemmas("careful analyses")
    assert "writing" in extract_lemmas("the writing")


@given(st.text())
def test_extract_lemmas_never_raises(s):
    for lemma in extract_lemmas(s):
        assert lemma == lemma.lower()


def match(sentence, given, family):
    return name_mentioned(tokenize(sentence), given, family)


def test_name_matching_variants():
    assert match("We thank John Smith for help", "John", "Smith")
    assert match("We thank J. Smith for help", "John", "Smith")
    assert match("We thank Smith for help", "John", "Smith")
    assert match("We thank John A. Smith for help", "John", "Smith")
    assert not match("We thank Jane Smith for help", "John", "Smith")
    assert not match("We thank A. Smith for help", "John", "Jones")
    assert not match("he said so", "", "He")  # lowercase token is not a name


def test_single_token_names():
    assert match("We thank A for helpful discussion", "", "A")
    assert match("We thank A for helpful discussion", "A", "")


def test_multi_token_family():
    assert match("We thank Eva van Dam for help", "Eva", "van Dam")
    assert not match("We thank van for help", "Eva", "van Dam")
