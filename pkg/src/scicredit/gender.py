"""Given-name gender assignment.

Resolution order: a preset label in the input always wins; initials-only
given names are unresolvable and stay unknown; then a local dictionary,
then (optionally) an external name-to-gender HTTP service consulted through
a persistent line-delimited cache. Every lookup applies the same confidence
threshold. Network failures degrade to unknown, never abort a run.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
import unicodedata
from collections import Counter
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Optional

import requests

from .corpus import Corpus, GenderLabel

logger = logging.getLogger(__name__)

_INITIAL_SPLIT = re.compile(r"[.\s\-]+")


def is_initial_only(given_name: str) -> bool:
    """True when the given name is only initials ("J.", "J. K.", "J.-K.")."""
    parts = [p for p in _INITIAL_SPLIT.split(given_name) if p]
    return bool(parts) and all(len(p) == 1 for p in parts)


def normalize_name(name: str) -> str:
    """Lowercase and fold diacritics for dictionary/cache keys."""
    decomposed = unicodedata.normalize("NFKD", name.strip().casefold())
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


@dataclass(frozen=True)
class GenderDictionary:
    entries: Mapping[str, tuple[GenderLabel, float]]

    @classmethod
    def from_file(cls, path: str | Path) -> "GenderDictionary":
        """Parse ``name label[:confidence]`` lines; '#' starts a comment."""
        entries: dict[str, tuple[GenderLabel, float]] = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                name, spec = line.split()
            except ValueError:
                raise ValueError(f"bad dictionary line: {raw!r}") from None
            label_str, _, conf_str = spec.partition(":")
            label = GenderLabel(label_str)
            if label is GenderLabel.UNKNOWN:
                raise ValueError(f"dictionary may not contain 'unknown': {raw!r}")
            confidence = float(conf_str) if conf_str else 1.0
            entries[normalize_name(name)] = (label, confidence)
        return cls(entries=entries)

    def lookup(self, given_name: str) -> Optional[tuple[GenderLabel, float]]:
        return self.entries.get(normalize_name(given_name))


@dataclass(frozen=True)
class CacheEntry:
    label: GenderLabel
    confidence: float
    source: str
    timestamp: str


class GenderCache:
    """Append-only JSONL cache keyed by normalized name.

    A cached name is never re-queried, regardless of its stored confidence.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, CacheEntry] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                self._entries[rec["name"]] = CacheEntry(
                    label=GenderLabel(rec["label"]),
                    confidence=float(rec["confidence"]),
                    source=rec.get("source", ""),
                    timestamp=rec.get("timestamp", ""),
                )

    def get(self, name: str) -> Optional[CacheEntry]:
        return self._entries.get(normalize_name(name))

    def put(self, name: str, label: GenderLabel, confidence: float, source: str) -> None:
        key = normalize_name(name)
        entry = CacheEntry(
            label=label,
            confidence=confidence,
            source=source,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self._entries[key] = entry
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {
                            "name": key,
                            "label": label.value,
                            "confidence": confidence,
                            "source": source,
                            "timestamp": entry.timestamp,
                        },
                        sort_keys=True,
                    )
                )
                fh.write("\n")

    def __len__(self) -> int:
        return len(self._entries)


_GENDER_WORDS = {
    "female": GenderLabel.WOMAN,
    "woman": GenderLabel.WOMAN,
    "f": GenderLabel.WOMAN,
    "male": GenderLabel.MAN,
    "man": GenderLabel.MAN,
    "m": GenderLabel.MAN,
}


class GenderServiceClient:
    """Client for name-to-gender HTTP services.

    Issues ``GET url?name=<given>`` (plus an API key read from the
    environment) and expects a JSON body with a gender string and an
    accuracy/confidence number, either 0-1 or 0-100. Queries are serialized
    and answered through the cache when one is attached.
    """

    def __init__(
        self,
        url: str,
        api_key_env: str = "GENDER_API_KEY",
        cache: Optional[GenderCache] = None,
        timeout: float = 10.0,
        min_interval: float = 0.0,
        session: Optional[requests.Session] = None,
    ):
        self.url = url
        self.api_key = os.environ.get(api_key_env)
        self.cache = cache
        self.timeout = timeout
        self.min_interval = min_interval
        self.session = session or requests.Session()
        self._lock = threading.Lock()
        self._last_call = 0.0

    def _parse(self, payload: dict) -> tuple[GenderLabel, float]:
        label = _GENDER_WORDS.get(str(payload.get("gender", "")).lower(), GenderLabel.UNKNOWN)
        confidence = 0.0
        for key in ("accuracy", "probability", "confidence"):
            if key in payload:
                confidence = float(payload[key])
                break
        if confidence > 1.0:
            confidence /= 100.0
        return label, confidence

    def lookup(self, given_name: str) -> tuple[GenderLabel, float]:
        if self.cache is not None:
            hit = self.cache.get(given_name)
            if hit is not None:
                return hit.label, hit.confidence
        with self._lock:
            wait = self.min_interval - (time.monotonic() - self._last_call)
            if wait > 0:
                time.sleep(wait)
            try:
                params = {"name": given_name}
                if self.api_key:
                    params["key"] = self.api_key
                response = self.session.get(self.url, params=params, timeout=self.timeout)
                response.raise_for_status()
                label, confidence = self._parse(response.json())
            except Exception as exc:
                logger.warning("gender service lookup failed for %r: %s", given_name, exc)
                return GenderLabel.UNKNOWN, 0.0
            finally:
                self._last_call = time.monotonic()
        if self.cache is not None:
            self.cache.put(given_name, label, confidence, source=self.url)
        return label, confidence


def infer_gender(
    given_name: str,
    dictionary: GenderDictionary,
    client: Optional[GenderServiceClient] = None,
    threshold: float = 0.8,
) -> GenderLabel:
    """Dictionary first, then the service; below-threshold hits fall through."""
    if not given_name.strip():
        raise ValueError("given_name is empty")
    hit = dictionary.lookup(given_name)
    if hit is not None and hit[1] >= threshold:
        return hit[0]
    if client is not None:
        label, confidence = client.lookup(given_name)
        if label is not GenderLabel.UNKNOWN and confidence >= threshold:
            return label
    return GenderLabel.UNKNOWN


@dataclass(frozen=True)
class AnnotationResult:
    corpus: Corpus
    label_counts: Mapping[str, int]


def annotate_corpus(
    corpus: Corpus,
    dictionary: GenderDictionary,
    client: Optional[GenderServiceClient] = None,
    threshold: float = 0.8,
) -> AnnotationResult:
    """Fill missing gender labels on every contributor.

    Preset labels win; initials-only given names become unknown without any
    lookup. Idempotent, and with no client attached the result depends only
    on the dictionary and threshold.
    """

    def resolve(given_name: str, preset: GenderLabel) -> GenderLabel:
        if preset is not GenderLabel.UNKNOWN:
            return preset
        if not given_name.strip() or is_initial_only(given_name):
            return GenderLabel.UNKNOWN
        return infer_gender(given_name, dictionary, client, threshold)

    counts: Counter[str] = Counter()
    papers = []
    for paper in corpus.papers:
        authors = []
        for author in paper.authors:
            label = resolve(author.given_name, author.gender)
            counts[label.value] += 1
            authors.append(replace(author, gender=label))
        acks = []
        for ack in paper.acknowledgees:
            label = resolve(ack.given_name, ack.gender)
            counts[label.value] += 1
            acks.append(replace(ack, gender=label))
        papers.append(replace(paper, authors=tuple(authors), acknowledgees=tuple(acks)))
    scholars = {
        pid: profile for pid, profile in corpus.scholars.items()
    }
    annotated = replace(corpus, papers=tuple(papers), scholars=scholars)
    return AnnotationResult(corpus=annotated, label_counts=dict(counts))
