import json

import pytest

from stakegraph.taxonomy import (
    Dimension,
    Measurement,
    RelationType,
    Taxonomy,
    TaxonomyError,
    load_taxonomy,
    serialize_taxonomy,
    validate_taxonomy,
)

# Dimension and measurement of every core variable, as fixed for the bundled
# registry (10 per dimension).
CORE_EXPECTATIONS = {
    "practical_skill_level": ("Skill", "Quantitative"),
    "theoretical_knowledge_depth": ("Skill", "Quantitative"),
    "cross_disciplinary_ability": ("Skill", "Qualitative"),
    "digital_literacy": ("Skill", "Quantitative"),
    "innovation_capability": ("Skill", "Qualitative"),
    "communication_skill": ("Skill", "Quantitative"),
    "adaptability": ("Skill", "Qualitative"),
    "team_collaboration": ("Skill", "Qualitative"),
    "internship_experience_quality": ("Skill", "Qualitative"),
    "learning_motivation": ("Skill", "Quantitative"),
    "curriculum_alignment": ("Institutional", "Quantitative"),
    "policy_support_intensity": ("Institutional", "Quantitative"),
    "teacher_industry_engagement": ("Institutional", "Quantitative"),
    "assessment_system_rigor": ("Institutional", "Quantitative"),
    "resource_allocation_efficiency": ("Institutional", "Quantitative"),
    "institutional_flexibility": ("Institutional", "Qualitative"),
    "accreditation_impact": ("Institutional", "Quantitative"),
    "cross_sector_partnership_density": ("Institutional", "Quantitative"),
    "digital_infrastructure_readiness": ("Institutional", "Quantitative"),
    "career_service_support": ("Institutional", "Qualitative"),
    "student_satisfaction": ("Emotion", "Quantitative"),
    "stress_level": ("Emotion", "Quantitative"),
    "role_identity_clarity": ("Emotion", "Qualitative"),
    "peer_relationship_strength": ("Emotion", "Qualitative"),
    "teacher_support_perception": ("Emotion", "Qualitative"),
    "sense_of_belonging": ("Emotion", "Quantitative"),
    "frustration_tolerance": ("Emotion", "Qualitative"),
    "future_confidence": ("Emotion", "Quantitative"),
    "emotion_regulation_skill": ("Emotion", "Qualitative"),
    "burnout_risk": ("Emotion", "Quantitative"),
}


def test_bundled_taxonomy_has_30_core_variables(taxonomy):
    core = taxonomy.core_variables()
    assert len(core) == 30
    per_dimension = {}
    for var in core:
        per_dimension[var.dimension] = per_dimension.get(var.dimension, 0) + 1
    assert per_dimension == {
        Dimension.SKILL: 10,
        Dimension.INSTITUTIONAL: 10,
        Dimension.EMOTION: 10,
    }


def test_bundled_core_rows_match_fixed_registry(taxonomy):
    core = {v.id: v for v in taxonomy.core_variables()}
    assert set(core) == set(CORE_EXPECTATIONS)
    for var_id, (dimension, measurement) in CORE_EXPECTATIONS.items():
        assert core[var_id].dimension.value == dimension, var_id
        assert core[var_id].measurement.value == measurement, var_id
        assert core[var_id].lexicon, f"{var_id} must be auto-annotatable"


def test_bundled_derived_variables_flagged(taxonomy):
    derived = taxonomy.derived_variables()
    assert derived
    assert all(v.derived for v in derived)
    derived_ids = {v.id for v in derived}
    for required in ("system_mismatch", "skill_gap", "policy_gaps", "emotion_frustration"):
        assert required in derived_ids


def test_relation_sign_mapping_is_total():
    expected = {
        RelationType.CAUSAL: 1,
        RelationType.DEPENDENCY: 1,
        RelationType.REINFORCEMENT: 1,
        RelationType.INHIBITION: -1,
        RelationType.MODULATION: 0,
    }
    for relation in RelationType:
        assert relation.sign == expected[relation]


def test_bundled_taxonomy_validates(taxonomy):
    assert validate_taxonomy(taxonomy) == []


def test_round_trip_identity(taxonomy):
    text = serialize_taxonomy(taxonomy)
    again = load_taxonomy(text)
    assert serialize_taxonomy(again) == text
    assert again.variables == dict(taxonomy.variables)
    assert again.cues == taxonomy.cues


def test_empty_variable_list_is_legal():
    taxonomy = load_taxonomy({"version": "x", "variables": [], "cues": []})
    assert taxonomy.variables == {}
    assert validate_taxonomy(taxonomy) == []


def test_duplicate_id_rejected():
    doc = {
        "variables": [
            {"id": "skill_gap", "name": "Skill Gap", "dimension": "Skill"},
            {"id": "skill_gap", "name": "Skill Gap 2", "dimension": "Skill"},
        ],
        "cues": [],
    }
    with pytest.raises(TaxonomyError, match="duplicate variable id"):
        load_taxonomy(doc)


def test_unknown_dimension_rejected():
    doc = {"variables": [{"id": "x", "name": "X", "dimension": "Vibes"}], "cues": []}
    with pytest.raises(TaxonomyError, match="unknown dimension"):
        load_taxonomy(doc)


def test_unknown_relation_rejected():
    doc = {"variables": [], "cues": [{"pattern": "zaps", "relation": "Zap"}]}
    with pytest.raises(TaxonomyError, match="unknown relation"):
        load_taxonomy(doc)


def test_empty_name_rejected():
    doc = {"variables": [{"id": "x", "name": "", "dimension": "Skill"}], "cues": []}
    with pytest.raises(TaxonomyError, match="empty name"):
        load_taxonomy(doc)


def test_parse_failure_reported():
    with pytest.raises(TaxonomyError, match="parse failure"):
        load_taxonomy("{not json")


def test_validate_names_offending_cue():
    from stakegraph.taxonomy import RelationCue, VariableDef

    bad = Taxonomy(
        variables={"x": VariableDef(id="x", name="X", dimension=Dimension.SKILL)},
        cues=(RelationCue(pattern="", relation=RelationType.CAUSAL),),
    )
    violations = validate_taxonomy(bad)
    assert len(violations) == 1
    assert "empty pattern" in violations[0]


def test_validate_reports_dimension_outside_enumeration(taxonomy):
    from stakegraph.taxonomy import VariableDef

    weird = VariableDef(id="w", name="W", dimension="Mystery")  # type: ignore[arg-type]
    broken = Taxonomy(variables={"w": weird}, cues=())
    violations = validate_taxonomy(broken)
    assert any("outside the enumeration" in v for v in violations)


def test_duplicate_cue_pair_rejected(data_dir):
    doc = json.loads((data_dir / "taxonomy.json").read_text(encoding="utf-8"))
    doc["cues"].append(dict(doc["cues"][0]))
    with pytest.raises(TaxonomyError, match="duplicate cue"):
        load_taxonomy(doc)
