#!/usr/bin/env python3
"""Regenerate the bundled data fixtures from their single source of truth.

Writes taxonomy, polarity cues, templates, plan, replay responses, the
generated corpus + traces + log, and the structural gold triples into
src/stakegraph/data/, then re-derives and prints the golden values frozen in
the test suite. Run from the repository root after changing fixture content.
"""
from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "stakegraph" / "data"

sys.path.insert(0, str(ROOT / "src"))

from stakegraph import annotator as annotate_mod  # noqa: E402
from stakegraph import corpus as corpus_mod  # noqa: E402
from stakegraph import generation as generation_mod  # noqa: E402
from stakegraph import graph as graph_mod  # noqa: E402
from stakegraph import relations as relations_mod  # noqa: E402
from stakegraph import taxonomy as taxonomy_mod  # noqa: E402

# ---------------------------------------------------------------------------
# taxonomy: 30 core variables (10 per dimension) + derived extraction set

CORE_VARIABLES = [
    # (id, name, dimension, description, measurement, lexicon)
    ("practical_skill_level", "Practical Skill Level", "Skill",
     "Level of real-world task proficiency", "Quantitative",
     ["practical skill", "hands-on skill", "实操能力"]),
    ("theoretical_knowledge_depth", "Theoretical Knowledge Depth", "Skill",
     "Depth of foundational academic knowledge", "Quantitative",
     ["theoretical knowledge", "理论知识"]),
    ("cross_disciplinary_ability", "Cross-Disciplinary Ability", "Skill",
     "Ability to integrate knowledge from multiple fields", "Qualitative",
     ["cross-disciplinary", "interdisciplinary", "跨学科"]),
    ("digital_literacy", "Digital Literacy", "Skill",
     "Proficiency in using digital tools and platforms", "Quantitative",
     ["digital literacy", "digital mindset", "数字素养"]),
    ("innovation_capability", "Innovation Capability", "Skill",
     "Capacity to propose novel ideas and approaches", "Qualitative",
     ["innovation capability", "novel ideas", "创新能力"]),
    ("communication_skill", "Communication Skill", "Skill",
     "Clarity and effectiveness in interaction", "Quantitative",
     ["communication skill", "沟通能力"]),
    ("adaptability", "Adaptability", "Skill",
     "Ability to adjust to different learning or work environments", "Qualitative",
     ["adaptability", "适应能力"]),
    ("team_collaboration", "Team Collaboration", "Skill",
     "Effectiveness in group or team-based tasks", "Qualitative",
     ["team collaboration", "teamwork", "团队协作"]),
    ("internship_experience_quality", "Internship Experience Quality", "Skill",
     "Depth and relevance of internship experiences", "Qualitative",
     ["internship experience", "实习经历"]),
    ("learning_motivation", "Learning Motivation", "Skill",
     "Intensity and consistency of motivation to learn", "Quantitative",
     ["learning motivation", "学习动力"]),
    ("curriculum_alignment", "Curriculum Alignment", "Institutional",
     "Degree of alignment between education content and industry needs", "Quantitative",
     ["curriculum alignment", "course alignment", "课程匹配"]),
    ("policy_support_intensity", "Policy Support Intensity", "Institutional",
     "Government or institutional support for collaboration", "Quantitative",
     ["policy support", "政策支持"]),
    ("teacher_industry_engagement", "Teacher-Industry Engagement", "Institutional",
     "Instructors' involvement with industry practices", "Quantitative",
     ["teacher-industry engagement", "双师型"]),
    ("assessment_system_rigor", "Assessment System Rigor", "Institutional",
     "Fairness and robustness of student evaluation systems", "Quantitative",
     ["assessment system", "考核机制"]),
    ("resource_allocation_efficiency", "Resource Allocation Efficiency", "Institutional",
     "Efficient distribution of institutional resources", "Quantitative",
     ["resource allocation", "shared training centre", "资源配置"]),
    ("institutional_flexibility", "Institutional Flexibility", "Institutional",
     "Ability to reform structure and adapt curricula", "Qualitative",
     ["institutional flexibility", "flexible credit", "弹性学制"]),
    ("accreditation_impact", "Accreditation Impact", "Institutional",
     "Effect of certification or accreditation on educational outcomes", "Quantitative",
     ["accreditation", "certification", "行业认证"]),
    ("cross_sector_partnership_density", "Cross-Sector Partnership Density", "Institutional",
     "Number and depth of external collaborations", "Quantitative",
     ["cross-sector partnership", "school-enterprise cooperation", "校企合作"]),
    ("digital_infrastructure_readiness", "Digital Infrastructure Readiness", "Institutional",
     "Availability and quality of technical infrastructure", "Quantitative",
     ["digital infrastructure", "MES system", "ERP system"]),
    ("career_service_support", "Career Service Support", "Institutional",
     "Quality and accessibility of career development services", "Qualitative",
     ["career service", "就业指导"]),
    ("student_satisfaction", "Student Satisfaction", "Emotion",
     "Perceived value of learning experiences", "Quantitative",
     ["student satisfaction", "学生满意度"]),
    ("stress_level", "Stress Level", "Emotion",
     "Emotional strain due to workload or expectations", "Quantitative",
     ["stress level", "stressful", "overtime", "压力很大"]),
    ("role_identity_clarity", "Role Identity Clarity", "Emotion",
     "Confidence in personal academic or career role", "Qualitative",
     ["role identity", "doubting whether", "角色认同"]),
    ("peer_relationship_strength", "Peer Relationship Strength", "Emotion",
     "Degree of mutual support among peers", "Qualitative",
     ["peer relationship", "peer support", "同伴支持"]),
    ("teacher_support_perception", "Teacher Support Perception", "Emotion",
     "Students' perception of mentorship or help", "Qualitative",
     ["teacher support", "mentor support", "business mentor", "导师帮助"]),
    ("sense_of_belonging", "Sense of Belonging", "Emotion",
     "Emotional integration into educational environment", "Quantitative",
     ["sense of belonging", "归属感"]),
    ("frustration_tolerance", "Frustration Tolerance", "Emotion",
     "Resilience in facing failure or difficulty", "Qualitative",
     ["frustration tolerance", "抗挫折"]),
    ("future_confidence", "Future Confidence", "Emotion",
     "Optimism about career and academic outcomes", "Quantitative",
     ["future confidence", "confident about", "未来信心"]),
    ("emotion_regulation_skill", "Emotion Regulation Skill", "Emotion",
     "Capacity to manage emotions under stress", "Qualitative",
     ["emotion regulation", "manage emotions", "情绪管理"]),
    ("burnout_risk", "Burnout Risk", "Emotion",
     "Likelihood of disengagement due to chronic stress", "Quantitative",
     ["burnout", "职业倦怠"]),
]

DERIVED_VARIABLES = [
    ("curriculum_disjointed", "Curriculum Disjointed", "Institutional",
     "Course content detached from current industry practice", "Qualitative",
     ["curriculum disjointed", "课程脱节"]),
    ("skill_misunderstanding", "Skill Misunderstanding", "Skill",
     "Mistaken picture of what a job actually demands", "Qualitative",
     ["skill misunderstanding"]),
    ("policy_gaps", "Policy Gaps", "Institutional",
     "Missing or inconsistent policy coverage for cooperation", "Qualitative",
     ["policy gap", "政策缺口"]),
    ("institutional_synergies", "Institutional Synergies", "Institutional",
     "Effective joint operation across organizations", "Qualitative",
     ["institutional synergies", "institutional synergy"]),
    ("skill_mismatch", "Skill Mismatch", "Skill",
     "Gap between trained skills and demanded skills", "Quantitative",
     ["skill mismatch", "skills mismatch", "技能错配"]),
    ("emotional_stress", "Emotional Stress", "Emotion",
     "Acute strain provoked by structural pressure", "Quantitative",
     ["emotional stress", "情绪紧张"]),
    ("employment_pressure", "Employment Pressure", "Emotion",
     "Anxiety tied to job seeking and placement", "Quantitative",
     ["employment pressure", "employment anxiety", "就业压力"]),
    ("curriculum_reform", "Curriculum Reform", "Institutional",
     "Active revision of course structure and content", "Qualitative",
     ["curriculum reform", "课程改革"]),
    ("enterprise_collaboration", "Enterprise Collaboration", "Institutional",
     "Working partnership between school and firm", "Qualitative",
     ["enterprise collaboration", "enterprise cooperation project"]),
    ("information_lag", "Information Lag", "Institutional",
     "Delay before industry signals reach educators", "Quantitative",
     ["information lag", "信息滞后"]),
    ("course_adaptation", "Course Adaptation", "Institutional",
     "Speed of updating courses to new requirements", "Qualitative",
     ["course adaptation"]),
    ("enterprise_feedback", "Enterprise Feedback", "Institutional",
     "Structured input from firms back to programmes", "Qualitative",
     ["enterprise feedback"]),
    ("programme_design", "Programme Design", "Institutional",
     "Shape and sequencing of a degree programme", "Qualitative",
     ["programme design", "program design"]),
    ("academic_orientation", "Academic Orientation", "Institutional",
     "Weighting of theory and publication over practice", "Qualitative",
     ["academic orientation", "paper-oriented teaching"]),
    ("practical_ability", "Practical Ability", "Skill",
     "Capacity to execute real production tasks", "Quantitative",
     ["practical ability", "实践能力"]),
    ("system_mismatch", "System Mismatch", "Institutional",
     "Structural misfit between institutional arrangements and needs", "Qualitative",
     ["system mismatch", "制度失配"]),
    ("emotion_frustration", "Emotion Frustration", "Emotion",
     "Frustration accumulated from blocked participation", "Quantitative",
     ["emotional frustration", "emotion frustration"]),
    ("engagement_drop", "Engagement Drop", "Emotion",
     "Decline in active participation", "Quantitative",
     ["engagement drop", "participation decline"]),
    ("skill_gap", "Skill Gap", "Skill",
     "Shortfall between held and required competence", "Quantitative",
     ["skill gap", "skills gap", "技能差距"]),
    ("job_knowledge_gap", "Job Knowledge Gap", "Skill",
     "Missing picture of a position's full scope", "Qualitative",
     ["insufficient job knowledge", "job knowledge"]),
]

RELATION_CUES = [
    ("lead to", "Causal", "subject-first"),
    ("leads to", "Causal", "subject-first"),
    ("results in", "Causal", "subject-first"),
    ("导致", "Causal", "subject-first"),
    ("is caused by", "Causal", "object-first"),
    ("depends on", "Dependency", "subject-first"),
    ("depend on", "Dependency", "subject-first"),
    ("requires", "Dependency", "subject-first"),
    ("依赖", "Dependency", "subject-first"),
    ("moderates", "Modulation", "subject-first"),
    ("modulates", "Modulation", "subject-first"),
    ("intensify", "Reinforcement", "subject-first"),
    ("intensifies", "Reinforcement", "subject-first"),
    ("reinforces", "Reinforcement", "subject-first"),
    ("加剧", "Reinforcement", "subject-first"),
    ("inhibit", "Inhibition", "subject-first"),
    ("suppresses", "Inhibition", "subject-first"),
    ("抑制", "Inhibition", "subject-first"),
]

POLARITY_CUES = {
    "negative": [
        "lack", "insufficient", "inadequate", "not enough", "cannot", "could not",
        "difficult", "difficulty", "shortage", "missing", "fragmented",
        "难", "不足", "缺乏", "跟不上",
    ],
    "positive": [
        "improve", "improved", "enhance", "increase", "sufficient", "helpful",
        "提升", "改善", "充足",
    ],
}


def build_taxonomy_doc() -> dict:
    variables = []
    for var_id, name, dim, desc, measurement, lexicon in CORE_VARIABLES:
        variables.append({
            "id": var_id, "name": name, "dimension": dim, "description": desc,
            "measurement": measurement, "derived": False, "lexicon": lexicon,
        })
    for var_id, name, dim, desc, measurement, lexicon in DERIVED_VARIABLES:
        variables.append({
            "id": var_id, "name": name, "dimension": dim, "description": desc,
            "measurement": measurement, "derived": True, "lexicon": lexicon,
        })
    cues = [{"pattern": p, "relation": r, "directionality": d} for p, r, d in RELATION_CUES]
    return {"version": "1.0.0", "variables": variables, "cues": cues}


# ---------------------------------------------------------------------------
# generation fixtures: templates, plan, and the canned dialogue bodies

TEMPLATES = [
    {
        "template_id": "tmpl-student",
        "role": "Student",
        "persona": "a final-year engineering student who just finished an industry internship",
        "body": ("You are {persona}.\nTheme: {theme}\nScenario: {scenario}\n"
                 "Target variables: {variable_targets}\n"
                 "Speak in first person about your experience, in three short paragraphs."),
    },
    {
        "template_id": "tmpl-enterprise",
        "role": "Enterprise",
        "persona": "an operations director at a mid-sized manufacturing firm that hosts student interns",
        "body": ("You are {persona}.\nTheme: {theme}\nScenario: {scenario}\n"
                 "Target variables: {variable_targets}\n"
                 "Speak in first person about your experience, in three short paragraphs."),
    },
    {
        "template_id": "tmpl-university",
        "role": "University",
        "persona": "a dean of a polytechnic faculty running joint programmes with industry partners",
        "body": ("You are {persona}.\nTheme: {theme}\nScenario: {scenario}\n"
                 "Target variables: {variable_targets}\n"
                 "Speak in first person about your experience, in three short paragraphs."),
    },
]

# One entry per task: (template_id, theme, scenario, targets, seed, utterance texts).
DIALOGUES = [
    ("tmpl-student", "skill matching", "internship placement",
     ["skill_gap", "practical_skill_level", "job_knowledge_gap"], 0, [
        "On the first day of my internship I was asked to configure the MES system, and I had "
        "only seen screenshots of it in class. The skill gap between coursework and the "
        "production floor felt huge.",
        "I spent the first two weeks copying settings from a manual. My hands-on skill improved "
        "fast, but it was really stressful and I worked overtime almost every night. "
        "那段时间我的压力很大。",
        "The internship experience still taught me more in a month than a semester of lectures, "
        "even though the tasks were fragmented and I ended up with insufficient job knowledge "
        "about the full production line.",
     ]),
    ("tmpl-student", "skill matching", "skills certification",
     ["skill_mismatch", "emotional_stress"], 1, [
        "Our class took a certification exam written by an industry association, and half of us "
        "discovered that what we practise in the lab is not what the certificate tests.",
        "Skill mismatch intensifies emotional stress for people about to graduate; I watched "
        "classmates panic when their toolchain knowledge did not match the job postings.",
        "I am also doubting whether four years of theoretical knowledge will transfer; my "
        "learning motivation comes back only when a task has a visible outcome.",
     ]),
    ("tmpl-student", "emotional fluctuations", "mentor guidance",
     ["teacher_support_perception", "sense_of_belonging", "emotion_regulation_skill"], 2, [
        "I came from an interdisciplinary background, moving from journalism into an AI "
        "programme, and during the internship I could not finish the coding tickets alone. My "
        "business mentor walked me through them step by step.",
        "A weekly check-in keeps my sense of belonging to the team; without it I think my "
        "participation would quietly sink.",
        "Emotion regulation is something nobody teaches; I manage emotions by going for a run "
        "before the morning standup.",
     ]),
    ("tmpl-student", "emotional fluctuations", "campus recruitment",
     ["employment_pressure", "emotional_stress", "future_confidence"], 3, [
        "During campus recruitment season everyone compares offers in the dormitory group chat. "
        "Employment pressure can lead to emotional stress long before graduation day.",
        "My employment anxiety eased after two mock interviews; peer support in our dorm "
        "mattered more than any lecture.",
        "I still feel confident about the direction I chose. 未来还是有机会的。",
     ]),
    ("tmpl-student", "institutional barriers", "credit recognition",
     ["institutional_flexibility", "policy_support_intensity", "burnout_risk"], 4, [
        "The placement company offered me a six-month rotation, but there is no flexible credit "
        "model at our school, so I had to choose between the rotation and graduating on time.",
        "Students hear about policy support for work-integrated learning, yet somewhere between "
        "the school office and the company HR it evaporates.",
        "My roommate quit her placement because dorm rules and factory shift times clashed; the "
        "burnout risk is real when institutions never talk to each other.",
        "Classmates under employment pressure accepted the first offer they got; it was a "
        "stressful season for everyone.",
     ]),
    ("tmpl-enterprise", "skill matching", "enterprise training",
     ["digital_literacy", "adaptability"], 5, [
        "We rolled out an intelligent assembly line last spring and most operators needed "
        "retraining within a week. New hires with digital literacy ramp up in days; the rest "
        "need a full training cycle.",
        "What we miss is not headcount, it is people who combine machine maintenance with a "
        "digital mindset. Our internal rotation covers the basics, but adaptability is what "
        "separates the keepers.",
        "If colleges put our control software into coursework, graduates could start on real "
        "tickets in their first month.",
     ]),
    ("tmpl-enterprise", "institutional barriers", "curriculum co-design",
     ["curriculum_reform", "enterprise_collaboration", "resource_allocation_efficiency"], 6, [
        "We sit on a programme advisory board twice a year. Curriculum reform intensifies "
        "enterprise collaboration, because once the syllabus tracks our roadmap both sides "
        "invest more.",
        "Approval chains are the real cost: from proposal to signature took half a year, and "
        "the equipment generation changed in the meantime.",
        "We budget for a shared training centre with two universities; resource allocation on "
        "their side is split across three different offices.",
     ]),
    ("tmpl-enterprise", "skill matching", "campus recruitment",
     ["team_collaboration", "practical_ability", "communication_skill"], 7, [
        "At job fairs we test for team collaboration with a twenty-minute group task; grades "
        "tell us little about who can hand over a shift cleanly.",
        "Candidates from dual-training tracks show stronger practical ability than those from "
        "purely lecture-based programmes.",
        "We stopped asking for paper certificates nobody can verify; a portfolio plus plain "
        "communication skill beats them.",
     ]),
    ("tmpl-enterprise", "institutional barriers", "pilot cooperation",
     ["academic_orientation", "practical_ability", "cross_sector_partnership_density"], 8, [
        "Our pilot line with the polytechnic stalled after one semester because student "
        "practice hours dropped and the faculty liaison rotated out.",
        "Academic orientation inhibits practical ability in several partner programmes; lab "
        "reports replace machine time whenever the term gets busy.",
        "We would co-fund a digital infrastructure upgrade if the school-enterprise cooperation "
        "agreement survived staff turnover.",
     ]),
    ("tmpl-enterprise", "emotional fluctuations", "enterprise training",
     ["frustration_tolerance", "burnout_risk"], 9, [
        "New operators are anxious in their first month; we pair them with veterans so "
        "frustration tolerance builds before the night shifts start.",
        "An ERP system rollout is as much an emotional project as a technical one. "
        "真正明白系统的人不多。",
        "When a line slows down we now check workload first; burnout shows up in the quality "
        "metrics weeks before anyone resigns.",
        "Veterans coach practical ability and adaptability on the line faster than any "
        "classroom could.",
     ]),
    ("tmpl-university", "institutional barriers", "policy matching",
     ["policy_gaps", "institutional_synergies", "policy_support_intensity"], 10, [
        "When we update a syllabus we ask partner firms what skills they expect next year; few "
        "can answer in a form a committee can use.",
        "Policy gaps inhibit institutional synergies between colleges and industry parks, and "
        "every provincial adjustment resets our paperwork.",
        "Policy support intensity varies by district; the same proposal passes in one park and "
        "dies in the next.",
     ]),
    ("tmpl-university", "skill matching", "curriculum co-design",
     ["curriculum_disjointed", "skill_misunderstanding", "curriculum_alignment"], 11, [
        "In joint course design the two sides carry different pictures of a competent graduate, "
        "which makes course alignment difficult for both.",
        "A curriculum disjointed from plant practice can lead to skill misunderstanding that "
        "surfaces only at the first job.",
        "Our teacher-industry engagement hours doubled once co-taught modules counted toward "
        "promotion.",
     ]),
    ("tmpl-university", "institutional barriers", "internship placement",
     ["information_lag", "course_adaptation", "assessment_system_rigor"], 12, [
        "Scheduling is our weak point: firms confirm placement slots in June, after our "
        "timetable is frozen.",
        "Information lag inhibits course adaptation on our side; by the time a new toolchain "
        "reaches the committee, the industry has moved again.",
        "An assessment system built around written finals cannot credit a semester spent on a "
        "production line.",
     ]),
    ("tmpl-university", "emotional fluctuations", "mentor guidance",
     ["emotion_regulation_skill", "student_satisfaction", "sense_of_belonging"], 13, [
        "Teachers in dual roles carry classes and plant hours; the ones who last are those with "
        "strong emotion regulation and a patient department head.",
        "Student satisfaction with mentored placements is consistently higher than with "
        "self-found ones.",
        "We train faculty to watch for a sense of belonging in project teams; it predicts "
        "completion better than grades do.",
     ]),
    ("tmpl-university", "skill matching", "enterprise training",
     ["enterprise_feedback", "programme_design", "innovation_capability"], 14, [
        "Enterprise feedback intensifies programme design work in a healthy way: each review "
        "cycle retires one stale module.",
        "Our innovation capability showcase now includes enterprise judges, and the student "
        "teams visibly raise their game.",
        "Cross-sector partnership density sounds bureaucratic, but counting active agreements "
        "per department told us which faculties are isolated.",
        "Course alignment reviews now run every term, and student satisfaction follows them "
        "closely.",
     ]),
]

EXPECTED_TRIPLES = {
    ("curriculum_disjointed", "Causal", "skill_misunderstanding"),
    ("policy_gaps", "Inhibition", "institutional_synergies"),
    ("skill_mismatch", "Reinforcement", "emotional_stress"),
    ("employment_pressure", "Causal", "emotional_stress"),
    ("curriculum_reform", "Reinforcement", "enterprise_collaboration"),
    ("information_lag", "Inhibition", "course_adaptation"),
    ("enterprise_feedback", "Reinforcement", "programme_design"),
    ("academic_orientation", "Inhibition", "practical_ability"),
}


def build_generation_fixtures(taxonomy):
    templates = {t["template_id"]: generation_mod.PromptTemplate(
        template_id=t["template_id"], role=t["role"], body=t["body"], persona=t["persona"]
    ) for t in TEMPLATES}
    for template in templates.values():
        template.validate()

    tasks = []
    responses = {}
    role_by_template = {t["template_id"]: t["role"] for t in TEMPLATES}
    for template_id, theme, scenario, targets, seed, texts in DIALOGUES:
        task = generation_mod.GenerationTask(
            template_id=template_id,
            role=role_by_template[template_id],
            theme=theme,
            scenario=scenario,
            variable_targets=tuple(targets),
            seed=seed,
        )
        tasks.append(task)
        responses[generation_mod.prompt_id_for(task)] = {
            "utterances": [{"role": task.role, "text": text} for text in texts]
        }
    plan = generation_mod.GenerationPlan(tasks=tasks)
    matrix = generation_mod.build_coverage_matrix()
    plan.validate(matrix)
    return templates, plan, responses


# ---------------------------------------------------------------------------
# structural gold triples: 41 variables, weakly connected, exactly one cycle

LOOP_EDGES = [
    ("system_mismatch", "Causal", "emotion_frustration", 3.0),
    ("emotion_frustration", "Causal", "engagement_drop", 2.0),
    ("engagement_drop", "Causal", "skill_gap", 2.0),
    ("skill_gap", "Causal", "system_mismatch", 2.0),
]

# Upstream institutional drivers feed the loop; downstream skill and emotion
# variables hang off it. Everything except the four loop edges is acyclic.
GOLD_EXTRA_EDGES = [
    ("policy_gaps", "Causal", "system_mismatch", 2.0),
    ("policy_gaps", "Inhibition", "institutional_synergies", 1.0),
    ("institutional_synergies", "Reinforcement", "system_mismatch", 1.0),
    ("curriculum_disjointed", "Causal", "skill_gap", 2.0),
    ("curriculum_disjointed", "Causal", "skill_misunderstanding", 1.0),
    ("curriculum_alignment", "Inhibition", "skill_gap", 2.0),
    ("policy_support_intensity", "Inhibition", "policy_gaps", 1.0),
    ("policy_support_intensity", "Reinforcement", "cross_sector_partnership_density", 1.0),
    ("cross_sector_partnership_density", "Reinforcement", "curriculum_alignment", 1.0),
    ("teacher_industry_engagement", "Reinforcement", "curriculum_alignment", 2.0),
    ("teacher_industry_engagement", "Causal", "internship_experience_quality", 1.0),
    ("institutional_flexibility", "Reinforcement", "curriculum_alignment", 1.0),
    ("accreditation_impact", "Modulation", "curriculum_alignment", 1.0),
    ("assessment_system_rigor", "Modulation", "skill_gap", 1.0),
    ("resource_allocation_efficiency", "Dependency", "policy_support_intensity", 1.0),
    ("digital_infrastructure_readiness", "Dependency", "resource_allocation_efficiency", 1.0),
    ("employment_pressure", "Causal", "emotion_frustration", 1.0),
    ("employment_pressure", "Causal", "emotional_stress", 2.0),
    ("system_mismatch", "Causal", "emotional_stress", 2.0),
    ("system_mismatch", "Causal", "skill_mismatch", 2.0),
    ("skill_mismatch", "Reinforcement", "emotional_stress", 1.0),
    ("skill_mismatch", "Causal", "skill_misunderstanding", 1.0),
    ("emotional_stress", "Causal", "stress_level", 2.0),
    ("emotional_stress", "Reinforcement", "burnout_risk", 2.0),
    ("engagement_drop", "Causal", "burnout_risk", 1.0),
    ("engagement_drop", "Inhibition", "learning_motivation", 2.0),
    ("engagement_drop", "Inhibition", "team_collaboration", 1.0),
    ("emotion_frustration", "Inhibition", "future_confidence", 2.0),
    ("emotion_frustration", "Inhibition", "student_satisfaction", 1.0),
    ("emotion_regulation_skill", "Inhibition", "stress_level", 1.0),
    ("frustration_tolerance", "Inhibition", "burnout_risk", 1.0),
    ("peer_relationship_strength", "Reinforcement", "sense_of_belonging", 1.0),
    ("teacher_support_perception", "Reinforcement", "sense_of_belonging", 2.0),
    ("teacher_support_perception", "Modulation", "emotion_frustration", 1.0),
    ("sense_of_belonging", "Reinforcement", "student_satisfaction", 1.0),
    ("skill_gap", "Inhibition", "practical_skill_level", 2.0),
    ("theoretical_knowledge_depth", "Dependency", "learning_motivation", 1.0),
    ("cross_disciplinary_ability", "Reinforcement", "innovation_capability", 1.0),
    ("innovation_capability", "Reinforcement", "future_confidence", 1.0),
    ("digital_literacy", "Reinforcement", "practical_skill_level", 1.0),
    ("digital_literacy", "Dependency", "digital_infrastructure_readiness", 1.0),
    ("adaptability", "Reinforcement", "practical_skill_level", 1.0),
    ("communication_skill", "Reinforcement", "team_collaboration", 1.0),
    ("internship_experience_quality", "Reinforcement", "practical_skill_level", 2.0),
    ("internship_experience_quality", "Reinforcement", "role_identity_clarity", 1.0),
    ("career_service_support", "Inhibition", "employment_pressure", 1.0),
]


def build_gold_triples() -> list[relations_mod.Triple]:
    return [
        relations_mod.Triple(
            subject=subject,
            relation=taxonomy_mod.RelationType(relation),
            object=obj,
            weight=weight,
        )
        for subject, relation, obj, weight in LOOP_EDGES + GOLD_EXTRA_EDGES
    ]


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    taxonomy_doc = build_taxonomy_doc()
    (DATA / "taxonomy.json").write_text(
        json.dumps(taxonomy_doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    (DATA / "polarity_cues.json").write_text(
        json.dumps(POLARITY_CUES, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    taxonomy = taxonomy_mod.load_taxonomy(DATA / "taxonomy.json")
    core = taxonomy.core_variables()
    assert len(core) == 30, f"core variable count {len(core)}"

    templates, plan, responses = build_generation_fixtures(taxonomy)
    (DATA / "templates.json").write_text(
        json.dumps(TEMPLATES, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    (DATA / "plan.json").write_text(
        generation_mod.serialize_plan(plan), encoding="utf-8"
    )
    (DATA / "replay_responses.json").write_text(
        json.dumps({"responses": responses}, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    provider = generation_mod.ReplayProvider(responses)
    corpus, traces, log = generation_mod.run_generation(plan, templates, provider)
    assert len(corpus.dialogues) == 15
    (DATA / "corpus.jsonl").write_text(corpus_mod.serialize_corpus(corpus), encoding="utf-8")
    (DATA / "traces.json").write_text(corpus_mod.serialize_traces(traces), encoding="utf-8")
    (DATA / "generation_log.jsonl").write_text(
        generation_mod.serialize_log(log), encoding="utf-8"
    )

    annotations = annotate_mod.annotate(corpus, taxonomy)
    triples = relations_mod.extract_triples(corpus, annotations, taxonomy)
    extracted = {t.key for t in triples}
    missing = EXPECTED_TRIPLES - extracted
    extra = extracted - EXPECTED_TRIPLES
    assert not missing, f"missing triples: {missing}"
    assert not extra, f"unexpected triples: {extra}"
    print(f"corpus fixture OK: {len(corpus.dialogues)} dialogues, "
          f"{len(annotations)} annotations, {len(triples)} triples")

    stats = corpus_mod.corpus_stats(corpus)
    for role, block in stats["roles"].items():
        print(f"  {role}: paragraphs={block['paragraph_count']} tokens={block['token_total']} "
              f"mean={block['mean_paragraph_length']}")

    gold = build_gold_triples()
    gold_graph = graph_mod.build_graph(gold, taxonomy=None)
    nodes = gold_graph.node_ids()
    assert len(nodes) == 41, f"gold node count {len(nodes)}: {nodes}"
    metrics = graph_mod.graph_metrics(gold_graph)
    assert metrics.weakly_connected_components == 1, metrics
    cycles = graph_mod.find_cycles(gold_graph)
    assert cycles == [["emotion_frustration", "engagement_drop", "skill_gap", "system_mismatch"]], cycles
    (DATA / "mechanism_triples.jsonl").write_text(
        relations_mod.serialize_triples(gold), encoding="utf-8"
    )
    print(f"gold fixture OK: 41 nodes, {len(gold)} triples, 1 component, 1 cycle")


if __name__ == "__main__":
    main()
