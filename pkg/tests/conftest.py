import json

import pytest
from hypothesis import settings

from scicredit.corpus import load_corpus

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


def paper_dict(doi, authors, acknowledgees=(), ack_text="", year=2018, disciplines=("biology",)):
    return {
        "doi": doi,
        "year": year,
        "disciplines": list(disciplines),
        "authors": list(authors),
        "acknowledgees": list(acknowledgees),
        "ack_text": ack_text,
    }


def author(given, family, roles, gender="unknown", person_id=None):
    return {
        "given_name": given,
        "family_name": family,
        "credit_roles": list(roles),
        "gender": gender,
        "person_id": person_id,
    }


def ack(given, family, gender="unknown", person_id=None):
    return {
        "given_name": given,
        "family_name": family,
        "gender": gender,
        "person_id": person_id,
    }


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record))
            fh.write("\n")
    return path


@pytest.fixture
def corpus_file(tmp_path):
    def make(records, name="corpus.jsonl"):
        return write_jsonl(tmp_path / name, records)

    return make


@pytest.fixture
def tiny_corpus(corpus_file):
    records = [
        paper_dict(
            "10.1/a",
            authors=[
                author("Alice", "Fab", ["data curation"], "woman", "P1"),
                author("Boris", "Fac", ["writing – original draft preparation"], "man", "P2"),
            ],
            acknowledgees=[ack("Carla", "Fad", "woman", "P3")],
            ack_text="We thank Carla Fad for helpful discussion.",
        ),
        paper_dict(
            "10.1/b",
            authors=[author("Diana", "Fae", ["investigation", "software"], "woman", "P4")],
            acknowledgees=[ack("Emil", "Faf", "man", "P5")],
            ack_text="We thank Emil Faf for help with the experiments.",
        ),
    ]
    return load_corpus(corpus_file(records))
