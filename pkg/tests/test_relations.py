import json

import pytest

from stakegraph.annotator import Annotation, annotate
from stakegraph.corpus import ingest_corpus
from stakegraph.relations import (
    CooccurrenceMatrix,
    ExtractionError,
    Triple,
    cooccurrence,
    extract_triples,
    load_triples,
    merge_triples,
    serialize_triples,
    triple_stats,
)
from stakegraph.taxonomy import RelationType

EXPECTED_FIXTURE_TRIPLES = {
    ("curriculum_disjointed", "Causal", "skill_misunderstanding"),
    ("policy_gaps", "Inhibition", "institutional_synergies"),
    ("skill_mismatch", "Reinforcement", "emotional_stress"),
    ("employment_pressure", "Causal", "emotional_stress"),
    ("curriculum_reform", "Reinforcement", "enterprise_collaboration"),
    ("information_lag", "Inhibition", "course_adaptation"),
    ("enterprise_feedback", "Reinforcement", "programme_design"),
    ("academic_orientation", "Inhibition", "practical_ability"),
}


def _corpus_of(*texts, role="Student"):
    lines = [
        json.dumps({"dialogue_id": "d1", "turn_index": i, "role": role, "text": t})
        for i, t in enumerate(texts)
    ]
    return ingest_corpus("\n".join(lines))


def test_fixture_extraction_recovers_expected_triples(triples):
    assert {t.key for t in triples} == EXPECTED_FIXTURE_TRIPLES
    for triple in triples:
        assert triple.weight == 1.0
        assert len(triple.evidence) == 1


def test_causal_row_extraction(corpus, taxonomy):
    annotations = annotate(corpus, taxonomy)
    triples = extract_triples(corpus, annotations, taxonomy)
    by_key = {t.key: t for t in triples}
    causal = by_key[("curriculum_disjointed", "Causal", "skill_misunderstanding")]
    assert causal.evidence[0].cue == "lead to"
    inhibitory = by_key[("policy_gaps", "Inhibition", "institutional_synergies")]
    assert inhibitory.evidence[0].cue == "inhibit"


def test_evidence_resolves_to_utterance_containing_cue(corpus, triples):
    for triple in triples:
        for item in triple.evidence:
            text = corpus.get_utterance(item.dialogue_id, item.turn_index).text
            assert item.cue.lower() in text.lower()


def test_cue_with_single_flanking_variable_yields_nothing(taxonomy):
    corpus = _corpus_of("This could lead to skill misunderstanding later on.")
    annotations = annotate(corpus, taxonomy)
    assert [a.variable_id for a in annotations] == ["skill_misunderstanding"]
    assert extract_triples(corpus, annotations, taxonomy) == []


def test_subject_equals_object_suppressed(taxonomy):
    corpus = _corpus_of("A skill gap can lead to another skills gap downstream.")
    annotations = annotate(corpus, taxonomy)
    assert extract_triples(corpus, annotations, taxonomy) == []


def test_object_first_cue_swaps_pair(taxonomy):
    corpus = _corpus_of("Their emotional stress is caused by employment pressure this term.")
    annotations = annotate(corpus, taxonomy)
    triples = extract_triples(corpus, annotations, taxonomy)
    assert [t.key for t in triples] == [("employment_pressure", "Causal", "emotional_stress")]


def test_duplicate_sentences_merge_with_weight(taxonomy):
    corpus = _corpus_of(
        "Policy gaps inhibit institutional synergies.",
        "Policy gaps inhibit institutional synergies.",
    )
    annotations = annotate(corpus, taxonomy)
    triples = extract_triples(corpus, annotations, taxonomy)
    assert len(triples) == 1
    assert triples[0].weight == 2.0
    assert len(triples[0].evidence) == 2


def test_merge_is_associative_over_dialogues(corpus, annotations, taxonomy):
    whole = extract_triples(corpus, annotations, taxonomy)
    per_dialogue = []
    for dialogue_id in corpus.dialogues:
        sub_corpus = ingest_corpus(
            "\n".join(
                json.dumps(u.to_record())
                for u in corpus.dialogues[dialogue_id].utterances
            )
        )
        sub_annotations = [a for a in annotations if a.dialogue_id == dialogue_id]
        per_dialogue.extend(extract_triples(sub_corpus, sub_annotations, taxonomy))
    merged = merge_triples(per_dialogue)
    assert [t.to_record() for t in merged] == [t.to_record() for t in whole]


def test_triples_file_round_trip(triples):
    text = serialize_triples(triples)
    again = load_triples(text)
    assert [t.to_record() for t in again] == [t.to_record() for t in triples]


def test_triple_stats_fixture_mix(triples):
    stats = triple_stats(triples)
    assert stats.total == 8
    assert stats.relation_counts == {"Causal": 2, "Reinforcement": 3, "Inhibition": 3}
    assert stats.relation_fractions == {
        "Causal": 2 / 8,
        "Reinforcement": 3 / 8,
        "Inhibition": 3 / 8,
    }
    assert abs(sum(stats.relation_fractions.values()) - 1.0) < 1e-12
    assert stats.in_degree["emotional_stress"] == 2


def test_triple_stats_empty():
    stats = triple_stats([])
    assert stats.total == 0
    assert stats.relation_fractions == {}


def test_triple_stats_single():
    stats = triple_stats([Triple("a", RelationType.CAUSAL, "b")])
    assert stats.relation_fractions == {"Causal": 1.0}


def test_self_relation_rejected_on_load():
    record = json.dumps({"subject": "a", "relation": "Causal", "object": "a", "weight": 1.0})
    with pytest.raises(ExtractionError, match="self-relation"):
        load_triples(record)


def _ann(turn, var):
    return Annotation("d1", turn, var, (0, 1))


def test_cooccurrence_same_utterance():
    corpus = _corpus_of("one", "two")
    matrix = cooccurrence(corpus, [_ann(0, "A"), _ann(0, "B")], "same-utterance")
    assert matrix.count("A", "B") == 1
    assert matrix.count("B", "A") == 1
    assert matrix.count("A", "A") == 0


def test_cooccurrence_single_variable_all_zero():
    corpus = _corpus_of("one")
    matrix = cooccurrence(corpus, [_ann(0, "A")], "same-utterance")
    assert matrix.counts == {}


def test_cooccurrence_adjacent_vs_same_policy():
    corpus = _corpus_of("one", "two")
    annotations = [_ann(0, "A"), _ann(1, "B")]
    adjacent = cooccurrence(corpus, annotations, "adjacent-utterances")
    same = cooccurrence(corpus, annotations, "same-utterance")
    assert adjacent.count("A", "B") == 1
    assert same.count("A", "B") == 0


def test_cooccurrence_unknown_policy():
    with pytest.raises(ExtractionError, match="unknown co-occurrence policy"):
        cooccurrence(_corpus_of("x"), [], "whole-corpus")


def test_cooccurrence_symmetric_zero_diagonal(corpus, annotations):
    for policy in ("same-utterance", "adjacent-utterances"):
        matrix = cooccurrence(corpus, annotations, policy)
        for (a, b), count in matrix.counts.items():
            assert a < b
            assert count > 0
            assert matrix.count(a, b) == matrix.count(b, a) == count
        for var in matrix.variables():
            assert matrix.count(var, var) == 0


def test_cooccurrence_counts_per_window():
    corpus = _corpus_of("one", "two", "three")
    annotations = [_ann(0, "A"), _ann(0, "B"), _ann(1, "A"), _ann(1, "B")]
    same = cooccurrence(corpus, annotations, "same-utterance")
    assert same.count("A", "B") == 2
    adjacent = cooccurrence(corpus, annotations, "adjacent-utterances")
    # windows (0,1) and (1,2) both contain A and B
    assert adjacent.count("A", "B") == 2
