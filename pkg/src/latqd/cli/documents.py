"""
Result documents printed by the command line.

Every enumerate, degree and search invocation produces one ResultDocument.
JSON field order is fixed:

    schema_version, command, rule, d, engine, coefficients, degree,
    residual, search, timing

Absent optional fields are omitted rather than written as null, except that
the degree block's witness is always present. Integers are never written as
floats and floats use Python's shortest round-trip representation, so
parse(emit(x)) == x.

The CSV form flattens the same payload into (field, value) rows with dotted
paths, lists indexed by position ("coefficients.3", "rule.g.0").
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

from ..lattice.errors import InvariantViolation
from ..lattice.rule import LatticeRule, TrigDegree
from ..search.abstract_search import CandidateScore, SearchResult

SCHEMA_VERSION = "latqd/1"
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class Timing:
    """Wall-clock time of the engine call."""

    wall_ns: int
    engine: str

    def serialize(self) -> Dict[str, Any]:
        return {"wall_ns": self.wall_ns, "engine": self.engine}

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "Timing":
        return cls(wall_ns=int(data["wall_ns"]), engine=data["engine"])


@dataclass(frozen=True)
class ResultDocument:
    """
    One machine-readable result.

    Attributes:
        command: "enumerate", "degree" or "search"
        rule: Analysed rule, or the best rule of a search
        d: Box radius (enumerate) or d_max (degree); None for search
        engine: Engine or method name that produced the payload
        coefficients: Enumerator coefficients M(0..ds)
        degree: Trigonometric degree block
        residual: Largest pre-rounding residual of a floating point engine
        search: Search outcome; its best_rule and rho mirror rule and degree
        timing: Wall-clock measurement, omitted for reproducible output

    Exactly one of coefficients and degree is set.
    """

    command: str
    rule: LatticeRule
    engine: str
    d: Optional[int] = None
    coefficients: Optional[Tuple[int, ...]] = None
    degree: Optional[TrigDegree] = None
    residual: Optional[float] = None
    search: Optional[SearchResult] = None
    timing: Optional[Timing] = None
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version!r}")
        if (self.coefficients is None) == (self.degree is None):
            raise InvariantViolation("a result document carries coefficients or a degree block")
        if self.coefficients is not None:
            object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    # ─── JSON ─────────────────────────────────────────────────────────────

    def serialize(self) -> Dict[str, Any]:
        """Ordered plain-data payload."""
        payload: Dict[str, Any] = {
            "schema_version": self.schema_version,
            "command": self.command,
            "rule": self.rule.serialize(),
        }
        if self.d is not None:
            payload["d"] = self.d
        payload["engine"] = self.engine
        if self.coefficients is not None:
            payload["coefficients"] = list(self.coefficients)
        if self.degree is not None:
            payload["degree"] = self.degree.serialize()
        if self.residual is not None:
            payload["residual"] = self.residual
        if self.search is not None:
            payload["search"] = {
                "strategy": self.search.strategy,
                "tie_count": self.search.tie_count,
                "label": self.search.label,
                "visited": self.search.visited,
                "runner_ups": [score.serialize() for score in self.search.runner_ups],
            }
        if self.timing is not None:
            payload["timing"] = self.timing.serialize()
        return payload

    @classmethod
    def deserialize(cls, data: Dict[str, Any]) -> "ResultDocument":
        if "schema_version" not in data:
            raise ValueError("document has no schema_version")
        rule = LatticeRule.deserialize(data["rule"])
        degree = TrigDegree.deserialize(data["degree"]) if "degree" in data else None
        search = None
        if "search" in data:
            block = data["search"]
            search = SearchResult(
                strategy=block["strategy"],
                best_rule=rule,
                rho=degree,
                tie_count=block["tie_count"],
                runner_ups=tuple(CandidateScore.deserialize(s) for s in block["runner_ups"]),
                visited=block["visited"],
                label=block.get("label"),
            )
        return cls(
            command=data["command"],
            rule=rule,
            engine=data["engine"],
            d=data.get("d"),
            coefficients=data.get("coefficients"),
            degree=degree,
            residual=data.get("residual"),
            search=search,
            timing=Timing.deserialize(data["timing"]) if "timing" in data else None,
            schema_version=data["schema_version"],
        )

    def to_json(self) -> str:
        return json.dumps(self.serialize(), separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        return cls.deserialize(json.loads(text))

    # ─── CSV ──────────────────────────────────────────────────────────────

    def flatten(self) -> List[Tuple[str, Any]]:
        """(dotted field path, scalar value) pairs in JSON field order."""
        return list(_flatten(self.serialize(), ""))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["field", "value"])
        for field, value in self.flatten():
            writer.writerow([field, _csv_scalar(value)])
        return buffer.getvalue()

    def render(self, output_format: str) -> str:
        """Render in "json" or "csv"."""
        if output_format == "json":
            return self.to_json()
        if output_format == "csv":
            return self.to_csv()
        raise ValueError(f"format must be one of {FORMATS}, got {output_format!r}")


def _flatten(value: Any, prefix: str) -> Iterator[Tuple[str, Any]]:
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _flatten(item, f"{prefix}.{key}" if prefix else key)
    elif isinstance(value, list):
        for index, item in enumerate(value):
            yield from _flatten(item, f"{prefix}.{index}")
    else:
        yield prefix, value


def _csv_scalar(value: Any) -> str:
    """CSV text of a JSON scalar, spelled the way JSON spells it."""
    return json.dumps(value) if not isinstance(value, str) else value
