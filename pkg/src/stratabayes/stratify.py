"""Partition a corpus into strata with cheap objective rules.

Rules are key-phrase regular expressions and/or line-count thresholds,
evaluated in priority order with first match winning.  Strata are not
expected to be pure; the sampling stage corrects for impurity.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, Document

log = logging.getLogger(__name__)

FRACTION_TOLERANCE = 1e-12

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class StratificationRule:
    """One objective test: regex against text, line cap, or both (AND)."""

    rule_id: str
    target_stratum: str
    priority: int
    pattern: str | None = None
    max_lines: int | None = None

    def __post_init__(self):
        if self.pattern is None and self.max_lines is None:
            raise ValueError(f"rule {self.rule_id}: needs a pattern or max_lines")


@dataclass
class RuleSet:
    rules: list[StratificationRule]
    default_stratum: str
    # Patterns are tested against at most this many leading characters of
    # a document; None means the whole text.
    scan_limit: int | None = None
    _compiled: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        priorities = [r.priority for r in self.rules]
        if len(set(priorities)) != len(priorities):
            raise ValueError("rule priorities must be unique")
        self.rules = sorted(self.rules, key=lambda r: r.priority)
        # Compile eagerly: a bad regex fails at load time, never at
        # classify time.
        self._compiled = []
        for rule in self.rules:
            try:
                compiled = re.compile(rule.pattern) if rule.pattern else None
            except re.error as exc:
                raise ValueError(
                    f"rule {rule.rule_id}: invalid pattern {rule.pattern!r}: {exc}"
                ) from exc
            self._compiled.append(compiled)

    def stratum_labels(self) -> list[str]:
        """Rule targets in priority order, default last, no duplicates."""
        labels = []
        for rule in self.rules:
            if rule.target_stratum not in labels:
                labels.append(rule.target_stratum)
        if self.default_stratum not in labels:
            labels.append(self.default_stratum)
        return labels

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "default_stratum": self.default_stratum,
            "scan_limit": self.scan_limit,
            "rules": [
                {
                    "rule_id": r.rule_id,
                    "pattern": r.pattern,
                    "max_lines": r.max_lines,
                    "target_stratum": r.target_stratum,
                    "priority": r.priority,
                }
                for r in self.rules
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RuleSet":
        if "default_stratum" not in data:
            raise ValueError("rule set is missing default_stratum")
        return cls(
            rules=[
                StratificationRule(
                    rule_id=r["rule_id"],
                    pattern=r.get("pattern"),
                    max_lines=r.get("max_lines"),
                    target_stratum=r["target_stratum"],
                    priority=r["priority"],
                )
                for r in data.get("rules", [])
            ],
            default_stratum=data["default_stratum"],
            scan_limit=data.get("scan_limit"),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "RuleSet":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def classify(doc: Document, ruleset: RuleSet) -> str:
    """Stratum of the first matching rule in priority order, else default.

    Pure function of (text, line_count, rules): a rule matches when its
    pattern occurs in the scanned text and the line count is at or below
    its cap (whichever of the two it declares).
    """
    text = None
    for rule, compiled in zip(ruleset.rules, ruleset._compiled):
        if rule.max_lines is not None and doc.line_count > rule.max_lines:
            continue
        if compiled is not None:
            if text is None:
                text = doc.text
                if ruleset.scan_limit is not None:
                    text = text[: ruleset.scan_limit]
            if not compiled.search(text):
                continue
        return rule.target_stratum
    return ruleset.default_stratum


@dataclass
class StratumPartition:
    """Disjoint cover of the corpus: every doc_id in exactly one stratum."""

    strata: dict[str, list[str]]
    default_stratum: str
    total_count: int

    @property
    def counts(self) -> dict[str, int]:
        return {label: len(ids) for label, ids in self.strata.items()}

    @property
    def fractions(self) -> dict[str, float]:
        return {
            label: len(ids) / self.total_count for label, ids in self.strata.items()
        }

    @property
    def empty_strata(self) -> list[str]:
        return [label for label, ids in self.strata.items() if not ids]

    def validate(self) -> None:
        seen: set[str] = set()
        n = 0
        for ids in self.strata.values():
            n += len(ids)
            seen.update(ids)
        if n != self.total_count or len(seen) != n:
            raise ValueError(
                f"partition does not cover the corpus exactly: "
                f"{n} assignments, {len(seen)} distinct, {self.total_count} documents"
            )
        if abs(sum(self.fractions.values()) - 1.0) > FRACTION_TOLERANCE:
            raise ValueError("stratum fractions do not sum to 1")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "default_stratum": self.default_stratum,
            "total_count": self.total_count,
            "counts": self.counts,
            "fractions": self.fractions,
            "strata": self.strata,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "StratumPartition":
        return cls(
            strata={k: list(v) for k, v in data["strata"].items()},
            default_stratum=data["default_stratum"],
            total_count=data["total_count"],
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "StratumPartition":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def stratify_corpus(corpus: Corpus, ruleset: RuleSet) -> StratumPartition:
    """Classify every document; report counts and population fractions."""
    strata: dict[str, list[str]] = {label: [] for label in ruleset.stratum_labels()}
    for doc in corpus:
        strata[classify(doc, ruleset)].append(doc.doc_id)
    partition = StratumPartition(
        strata=strata,
        default_stratum=ruleset.default_stratum,
        total_count=corpus.total_count,
    )
    partition.validate()
    for label in partition.empty_strata:
        log.warning("stratum %r is empty and cannot be sampled", label)
    return partition
