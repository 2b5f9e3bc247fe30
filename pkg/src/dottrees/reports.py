"""Serializable records for counting runs."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .geometry import PointSet, format_point_set
from .trees import Tree, WeightedTree, format_tree

__all__ = ["CountReport", "digest_inputs", "point_set_digest", "tree_digest"]


def digest_inputs(*parts: str) -> str:
    """SHA-256 over canonical text serializations, joined unambiguously."""
    h = hashlib.sha256()
    for part in parts:
        h.update(str(len(part)).encode())
        h.update(b":")
        h.update(part.encode())
    return h.hexdigest()


def point_set_digest(ps: PointSet) -> str:
    return digest_inputs(format_point_set(ps))


def tree_digest(wt: WeightedTree | Tree) -> str:
    return digest_inputs(format_tree(wt))


@dataclass(frozen=True)
class CountReport:
    """One counting operation's inputs, outputs, and timing.

    ``elapsed_ms`` is None unless timings were explicitly requested, so that
    identical runs serialize to identical bytes.
    """

    operation: str
    parameters: dict
    input_digest: str
    counts: dict
    histograms: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    def to_dict(self) -> dict:
        return {
            "operation": self.operation,
            "parameters": self.parameters,
            "input_digest": self.input_digest,
            "counts": self.counts,
            "histograms": self.histograms,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"
