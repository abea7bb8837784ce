"""Contribution categories and the contributor-role mapping.

Authorship metadata arrives as raw role strings ("Writing – original draft
preparation"); those collapse onto six abstract categories. Acknowledgment
classification uses four categories, three of which are shared with
authorship. The mapping ships as JSON so alternative taxonomies can be
swapped in without code changes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, FrozenSet, Mapping

if TYPE_CHECKING:
    from .corpus import AuthorEntry


class Role(Enum):
    INVESTIGATION_ANALYSIS = "investigation_analysis"
    MATERIAL_RESOURCES = "material_resources"
    WRITING = "writing"
    FUNDING = "funding"
    ADMINISTRATION = "administration"
    CONCEPTUALIZATION = "conceptualization"
    PEER_COMMUNICATION = "peer_communication"


#: Categories an author's credit roles can map to.
AUTHORSHIP_ROLES = (
    Role.INVESTIGATION_ANALYSIS,
    Role.MATERIAL_RESOURCES,
    Role.WRITING,
    Role.FUNDING,
    Role.ADMINISTRATION,
    Role.CONCEPTUALIZATION,
)

#: Categories acknowledgment classification can emit.
ACK_ROLES = (
    Role.INVESTIGATION_ANALYSIS,
    Role.MATERIAL_RESOURCES,
    Role.WRITING,
    Role.PEER_COMMUNICATION,
)

#: Categories present on both credit routes.
SHARED_ROLES = (
    Role.INVESTIGATION_ANALYSIS,
    Role.MATERIAL_RESOURCES,
    Role.WRITING,
)


class UnmappedRoleError(Exception):
    """A credit role string outside the canonical vocabulary."""


_CANON_RE = re.compile(r"[^a-z0-9]+")


def canonicalize_credit(role: str) -> str:
    """Lowercase, replace punctuation/dashes with spaces, collapse runs.

    Publisher exports vary in dash style and spacing; canonical form makes
    "Writing – Original Draft Preparation" and "writing - original draft
    preparation" the same key.
    """
    return _CANON_RE.sub(" ", role.lower()).strip()


@dataclass(frozen=True)
class CreditMapping:
    """Total map from canonical credit-role strings to categories."""

    table: Mapping[str, Role]

    @classmethod
    def from_config(cls, config: Mapping[str, list[str]]) -> "CreditMapping":
        table: dict[str, Role] = {}
        for category, roles in config.items():
            if category.startswith("_"):
                continue
            role = Role(category)
            for raw in roles:
                key = canonicalize_credit(raw)
                if not key:
                    raise ValueError(f"empty role string under {category!r}")
                if key in table and table[key] is not role:
                    raise ValueError(f"role {raw!r} mapped to two categories")
                table[key] = role
        return cls(table=table)

    @classmethod
    def from_file(cls, path: str | Path) -> "CreditMapping":
        with open(path, encoding="utf-8") as fh:
            return cls.from_config(json.load(fh))

    @classmethod
    def default(cls) -> "CreditMapping":
        data = resources.files("scicredit.data").joinpath("credit_map.json").read_text("utf-8")
        return cls.from_config(json.loads(data))

    def knows(self, role: str) -> bool:
        return canonicalize_credit(role) in self.table

    def map(self, role: str) -> Role:
        key = canonicalize_credit(role)
        try:
            return self.table[key]
        except KeyError:
            raise UnmappedRoleError(f"unmapped credit role: {role!r}") from None

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.table)


def map_credit(role: str, mapping: CreditMapping | None = None) -> Role:
    """Map one canonical credit role string to its category."""
    if mapping is None:
        mapping = CreditMapping.default()
    return mapping.map(role)


def author_roles(author: "AuthorEntry", mapping: CreditMapping | None = None) -> FrozenSet[Role]:
    """Deduplicated category set of an author's credit roles.

    Empty credit-role lists yield an empty set; validation reports them.
    """
    if mapping is None:
        mapping = CreditMapping.default()
    return frozenset(mapping.map(role) for role in author.credit_roles)
