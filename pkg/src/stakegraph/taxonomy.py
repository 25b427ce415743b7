"""Structural variable registry and relation-type vocabulary.

A taxonomy bundles the variable definitions (grouped into the three
stakeholder dimensions), the surface-cue lexicons used by the annotator, and
the relation cue patterns used by the triple extractor. Everything here is
immutable after load and safe to share across workers.
"""
from __future__ import annotations

import enum
import json
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Union

from ._io import read_text_source


class TaxonomyError(Exception):
    """Raised when a taxonomy document cannot be parsed or validated."""


class Dimension(str, enum.Enum):
    SKILL = "Skill"
    INSTITUTIONAL = "Institutional"
    EMOTION = "Emotion"


class Measurement(str, enum.Enum):
    QUALITATIVE = "Qualitative"
    QUANTITATIVE = "Quantitative"


class RelationType(str, enum.Enum):
    CAUSAL = "Causal"
    DEPENDENCY = "Dependency"
    MODULATION = "Modulation"
    REINFORCEMENT = "Reinforcement"
    INHIBITION = "Inhibition"

    @property
    def sign(self) -> int:
        return _RELATION_SIGNS[self]


_RELATION_SIGNS = {
    RelationType.CAUSAL: 1,
    RelationType.DEPENDENCY: 1,
    RelationType.REINFORCEMENT: 1,
    RelationType.INHIBITION: -1,
    RelationType.MODULATION: 0,
}

#: Fixed enumeration order, used for deterministic reports and uniform draws.
RELATION_ORDER = (
    RelationType.CAUSAL,
    RelationType.DEPENDENCY,
    RelationType.MODULATION,
    RelationType.REINFORCEMENT,
    RelationType.INHIBITION,
)


def nfc(text: str) -> str:
    """NFC-normalize a string (all pattern matching happens in NFC space)."""
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class VariableDef:
    id: str
    name: str
    dimension: Dimension
    description: str = ""
    measurement: Measurement = Measurement.QUALITATIVE
    derived: bool = False
    lexicon: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "dimension": self.dimension.value,
            "description": self.description,
            "measurement": self.measurement.value,
            "derived": self.derived,
            "lexicon": list(self.lexicon),
        }


@dataclass(frozen=True)
class RelationCue:
    pattern: str
    relation: RelationType
    #: "subject-first" pairs the left-flanking variable as subject;
    #: "object-first" swaps the pair.
    directionality: str = "subject-first"

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "relation": self.relation.value,
            "directionality": self.directionality,
        }


@dataclass(frozen=True)
class Taxonomy:
    variables: Mapping[str, VariableDef]
    cues: tuple[RelationCue, ...]
    version: str = "0"

    def __contains__(self, variable_id: str) -> bool:
        return variable_id in self.variables

    def variable_ids(self) -> list[str]:
        return sorted(self.variables)

    def core_variables(self) -> list[VariableDef]:
        return [v for v in self.variables.values() if not v.derived]

    def derived_variables(self) -> list[VariableDef]:
        return [v for v in self.variables.values() if v.derived]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "variables": [self.variables[k].to_dict() for k in sorted(self.variables)],
            "cues": [c.to_dict() for c in self.cues],
        }


_DIRECTIONALITIES = ("subject-first", "object-first")


def _parse_variable(raw: dict) -> VariableDef:
    try:
        dimension = Dimension(raw["dimension"])
    except ValueError:
        raise TaxonomyError(f"unknown dimension {raw.get('dimension')!r} for variable {raw.get('id')!r}")
    except KeyError:
        raise TaxonomyError(f"variable {raw.get('id')!r} missing dimension")
    measurement = Measurement(raw.get("measurement", "Qualitative"))
    lexicon = tuple(nfc(p) for p in raw.get("lexicon", []))
    var_id = raw.get("id")
    if not var_id:
        raise TaxonomyError("variable with empty id")
    name = raw.get("name", "")
    if not name:
        raise TaxonomyError(f"variable {var_id!r} has empty name")
    return VariableDef(
        id=var_id,
        name=name,
        dimension=dimension,
        description=raw.get("description", ""),
        measurement=measurement,
        derived=bool(raw.get("derived", False)),
        lexicon=lexicon,
    )


def _parse_cue(raw: dict) -> RelationCue:
    try:
        relation = RelationType(raw["relation"])
    except ValueError:
        raise TaxonomyError(f"unknown relation {raw.get('relation')!r} for cue {raw.get('pattern')!r}")
    except KeyError:
        raise TaxonomyError(f"cue {raw.get('pattern')!r} missing relation")
    directionality = raw.get("directionality", "subject-first")
    if directionality not in _DIRECTIONALITIES:
        raise TaxonomyError(f"unknown directionality {directionality!r} for cue {raw.get('pattern')!r}")
    return RelationCue(pattern=nfc(raw.get("pattern", "")), relation=relation, directionality=directionality)


def load_taxonomy(source: Union[str, Path, dict]) -> Taxonomy:
    """Parse and validate a taxonomy document (path, JSON string, or dict).

    Raises TaxonomyError on parse failures, duplicate ids, empty names, or
    unknown dimension/relation strings.
    """
    if isinstance(source, dict):
        doc = source
    elif isinstance(source, (str, Path)):
        try:
            doc = json.loads(read_text_source(source))
        except json.JSONDecodeError as exc:
            raise TaxonomyError(f"taxonomy parse failure: {exc}") from exc
    else:
        raise TaxonomyError(f"unsupported taxonomy source {type(source).__name__}")

    variables: dict[str, VariableDef] = {}
    for raw in doc.get("variables", []):
        var = _parse_variable(raw)
        if var.id in variables:
            raise TaxonomyError(f"duplicate variable id {var.id!r}")
        variables[var.id] = var

    cues = []
    seen_cues = set()
    for raw in doc.get("cues", []):
        cue = _parse_cue(raw)
        key = (cue.pattern, cue.relation)
        if key in seen_cues:
            raise TaxonomyError(f"duplicate cue ({cue.pattern!r}, {cue.relation.value})")
        seen_cues.add(key)
        cues.append(cue)

    taxonomy = Taxonomy(variables=variables, cues=tuple(cues), version=str(doc.get("version", "0")))
    violations = validate_taxonomy(taxonomy)
    if violations:
        raise TaxonomyError("; ".join(violations))
    return taxonomy


def validate_taxonomy(taxonomy: Taxonomy) -> list[str]:
    """Return invariant violations as human-readable strings (empty = valid)."""
    violations: list[str] = []
    for var_id, var in taxonomy.variables.items():
        if var_id != var.id:
            violations.append(f"variable map key {var_id!r} does not match id {var.id!r}")
        if not var.name:
            violations.append(f"variable {var_id!r} has empty name")
        if not isinstance(var.dimension, Dimension):
            violations.append(f"variable {var_id!r} has dimension outside the enumeration")
        for pattern in var.lexicon:
            if not pattern:
                violations.append(f"variable {var_id!r} has an empty lexicon pattern")
    pattern_relations: dict[str, RelationType] = {}
    for cue in taxonomy.cues:
        if not cue.pattern:
            violations.append(f"cue with empty pattern (relation {cue.relation.value})")
            continue
        prior = pattern_relations.get(cue.pattern)
        if prior is not None and prior is not cue.relation:
            violations.append(f"cue pattern {cue.pattern!r} maps to more than one relation")
        pattern_relations[cue.pattern] = cue.relation
        if cue.directionality not in _DIRECTIONALITIES:
            violations.append(f"cue {cue.pattern!r} has unknown directionality {cue.directionality!r}")
    return violations


def serialize_taxonomy(taxonomy: Taxonomy) -> str:
    """Canonical JSON serialization; load_taxonomy(serialize_taxonomy(t)) == t."""
    return json.dumps(taxonomy.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def bundled_taxonomy_path() -> Path:
    return Path(str(resources.files("stakegraph").joinpath("data/taxonomy.json")))


def load_bundled_taxonomy() -> Taxonomy:
    """Load the taxonomy shipped with the package (30 core + derived variables)."""
    return load_taxonomy(bundled_taxonomy_path())
