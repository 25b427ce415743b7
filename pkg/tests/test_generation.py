import json

import httpx
import pytest

from stakegraph.generation import (
    GenerationError,
    GenerationPlan,
    GenerationTask,
    HttpChatProvider,
    LOG_EPOCH,
    PromptTemplate,
    ProviderError,
    ReplayProvider,
    append_log,
    build_coverage_matrix,
    load_log,
    load_plan,
    load_templates,
    parse_role_lines,
    plan_from_matrix,
    prompt_id_for,
    render_prompt,
    run_generation,
    serialize_log,
)


def test_default_matrix_has_27_cells():
    matrix = build_coverage_matrix()
    assert len(matrix.themes) == 3
    assert len(matrix.scenarios) == 9
    assert len(matrix.cells) == 27
    assert matrix.cell_keys() == {(t, s) for t in matrix.themes for s in matrix.scenarios}


def test_single_cell_matrix():
    matrix = build_coverage_matrix(["t"], ["s"], per_cell=2)
    assert len(matrix.cells) == 1
    assert matrix.cells[0].fill == 2


def test_duplicate_scenario_rejected():
    with pytest.raises(GenerationError, match="duplicate scenario"):
        build_coverage_matrix(["t"], ["s", "s"])


def test_duplicate_theme_rejected():
    with pytest.raises(GenerationError, match="duplicate theme"):
        build_coverage_matrix(["t", "t"], ["s"])


def test_empty_axes_rejected():
    with pytest.raises(GenerationError):
        build_coverage_matrix([], ["s"])


TEMPLATE = PromptTemplate(
    template_id="tmpl-x",
    role="Student",
    persona="a test persona",
    body="You are {persona}. Theme {theme}, scenario {scenario}, targets {variable_targets}.",
)

TASK = GenerationTask(
    template_id="tmpl-x",
    role="Student",
    theme="skill matching",
    scenario="pilot cooperation",
    variable_targets=("skill_gap",),
    seed=7,
)


def test_render_prompt_golden():
    text, prompt_id = render_prompt(TEMPLATE, TASK)
    assert text == (
        "You are a test persona. Theme skill matching, scenario pilot cooperation, "
        "targets skill_gap."
    )
    assert prompt_id == prompt_id_for(TASK)
    assert len(prompt_id) == 64 and prompt_id == prompt_id.lower()


def test_render_prompt_deterministic():
    first = render_prompt(TEMPLATE, TASK)
    second = render_prompt(TEMPLATE, TASK)
    assert first == second


def test_prompt_id_distinct_per_seed():
    other = GenerationTask.from_dict({**TASK.to_dict(), "seed": 8})
    assert prompt_id_for(other) != prompt_id_for(TASK)


def test_prompt_id_ignores_target_order():
    a = GenerationTask.from_dict({**TASK.to_dict(), "variable_targets": ["a", "b"]})
    b = GenerationTask.from_dict({**TASK.to_dict(), "variable_targets": ["b", "a"]})
    assert prompt_id_for(a) == prompt_id_for(b)


def test_render_rejects_foreign_template():
    stray = GenerationTask.from_dict({**TASK.to_dict(), "template_id": "elsewhere"})
    with pytest.raises(GenerationError, match="references template"):
        render_prompt(TEMPLATE, stray)


def test_template_placeholder_validation():
    broken = PromptTemplate(
        template_id="b", role="Student", persona="p",
        body="no placeholders at all",
    )
    with pytest.raises(GenerationError, match="exactly once"):
        broken.validate()
    doubled = PromptTemplate(
        template_id="b", role="Student", persona="p",
        body="{theme} {theme} {scenario} {variable_targets} {persona}",
    )
    with pytest.raises(GenerationError, match="exactly once"):
        doubled.validate()


def test_plan_requires_distinct_seeds():
    plan = GenerationPlan(tasks=[TASK, GenerationTask.from_dict(TASK.to_dict())])
    with pytest.raises(GenerationError, match="distinct"):
        plan.validate()


def test_plan_cells_must_exist():
    matrix = build_coverage_matrix(["other theme"], ["other scenario"])
    plan = GenerationPlan(tasks=[TASK])
    with pytest.raises(GenerationError, match="not a matrix cell"):
        plan.validate(matrix)


def test_plan_from_matrix_counts():
    matrix = build_coverage_matrix(["t1", "t2"], ["s1", "s2", "s3"], per_cell=2)
    templates = {"tmpl-x": TEMPLATE}
    plan = plan_from_matrix(matrix, templates)
    assert len(plan.tasks) == 12
    plan.validate(matrix)


def test_run_generation_fixture_round_trip(data_dir):
    templates = load_templates(data_dir / "templates.json")
    plan = load_plan(data_dir / "plan.json")
    provider = ReplayProvider(data_dir / "replay_responses.json")
    corpus, traces, log = run_generation(plan, templates, provider)
    assert len(corpus.dialogues) == 15
    assert len(traces) == 15
    assert len(log) == 15
    assert all(entry.status == "ok" for entry in log)
    for utterance in corpus.utterances():
        assert utterance.prompt_id
        assert utterance.theme and utterance.scenario
    # trace chain reconstructs the rendered prompt exactly
    for trace in traces:
        template = templates[trace.template_id]
        task = GenerationTask(
            template_id=trace.template_id,
            role=trace.role,
            theme=trace.theme,
            scenario=trace.scenario,
            variable_targets=trace.variable_targets,
            seed=trace.seed,
        )
        text, prompt_id = render_prompt(template, task)
        assert prompt_id == trace.prompt_id
        entry = next(e for e in log if e.prompt_id == prompt_id)
        assert entry.rendered_prompt == text


def test_run_generation_parallel_matches_sequential(data_dir):
    templates = load_templates(data_dir / "templates.json")
    plan = load_plan(data_dir / "plan.json")
    sequential = run_generation(plan, templates, ReplayProvider(data_dir / "replay_responses.json"))
    parallel = run_generation(
        plan, templates, ReplayProvider(data_dir / "replay_responses.json"), max_workers=4
    )
    from stakegraph.corpus import serialize_corpus

    assert serialize_corpus(sequential[0]) == serialize_corpus(parallel[0])
    assert serialize_log(sequential[2]) == serialize_log(parallel[2])


def test_empty_plan():
    corpus, traces, log = run_generation(GenerationPlan(), {}, ReplayProvider([]))
    assert len(corpus.dialogues) == 0
    assert traces == [] and log == []


def test_malformed_record_logged_as_schema_error():
    provider = ReplayProvider([{"utterances": [{"role": "Student"}]}])  # missing text
    corpus, traces, log = run_generation(GenerationPlan(tasks=[TASK]), {"tmpl-x": TEMPLATE}, provider)
    assert len(corpus.dialogues) == 0
    assert traces == []
    assert len(log) == 1
    assert log[0].status == "schema_error"
    assert log[0].output_digest == ""


def test_transport_failure_does_not_abort():
    task2 = GenerationTask.from_dict({**TASK.to_dict(), "seed": 8})
    provider = ReplayProvider({prompt_id_for(task2): {"utterances": [{"role": "Student", "text": "ok"}]}})
    corpus, traces, log = run_generation(
        GenerationPlan(tasks=[TASK, task2]), {"tmpl-x": TEMPLATE}, provider
    )
    assert [e.status for e in log] == ["transport_error", "ok"]
    assert len(corpus.dialogues) == 1


def test_log_timestamps_are_deterministic(data_dir):
    templates = load_templates(data_dir / "templates.json")
    plan = load_plan(data_dir / "plan.json")
    _, _, log = run_generation(plan, templates, ReplayProvider(data_dir / "replay_responses.json"))
    assert log[0].timestamp == LOG_EPOCH.strftime("%Y-%m-%dT%H:%M:%SZ")
    assert log[3].timestamp.endswith("00:00:03Z")


def test_append_log_preserves_prior_entries(tmp_path, data_dir):
    templates = load_templates(data_dir / "templates.json")
    plan = load_plan(data_dir / "plan.json")
    _, _, log = run_generation(plan, templates, ReplayProvider(data_dir / "replay_responses.json"))
    path = tmp_path / "log.jsonl"
    append_log(path, log[:3])
    before = path.read_text(encoding="utf-8")
    append_log(path, log[3:6])
    after = path.read_text(encoding="utf-8")
    assert after.startswith(before)
    assert len(load_log(path)) == 6


def test_parse_role_lines_fallback():
    parsed = parse_role_lines("Student: hello there\n\nnot a line\nEnterprise: hi\n")
    assert parsed == [
        {"role": "Student", "text": "hello there"},
        {"role": "Enterprise", "text": "hi"},
    ]


def test_http_provider_contract():
    def handler(request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content)
        assert payload["prompt"].startswith("You are")
        assert payload["seed"] == 7
        return httpx.Response(200, json={"utterances": [{"role": "Student", "text": "reply"}]})

    provider = HttpChatProvider(
        endpoint="https://example.test/v1/dialogue",
        transport=httpx.MockTransport(handler),
    )
    text, _ = render_prompt(TEMPLATE, TASK)
    assert provider.generate(text, TASK) == [{"role": "Student", "text": "reply"}]


def test_http_provider_transport_error():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(500, text="boom")

    provider = HttpChatProvider(
        endpoint="https://example.test/v1/dialogue",
        transport=httpx.MockTransport(handler),
    )
    with pytest.raises(ProviderError):
        provider.generate("x", TASK)


def test_http_provider_content_fallback():
    def handler(request: httpx.Request) -> httpx.Response:
        return httpx.Response(200, json={"content": "Student: parsed line"})

    provider = HttpChatProvider(
        endpoint="https://example.test/v1/dialogue",
        transport=httpx.MockTransport(handler),
    )
    assert provider.generate("x", TASK) == [{"role": "Student", "text": "parsed line"}]


def test_coverage_completeness_every_cell_resolved():
    """Plans derived from a matrix leave no cell silent: each cell ends in a
    successful dialogue or a logged failure."""
    matrix = build_coverage_matrix(["t1"], ["s1", "s2"], per_cell=1)
    plan = plan_from_matrix(matrix, {"tmpl-x": TEMPLATE})
    responses = {
        prompt_id_for(plan.tasks[0]): {"utterances": [{"role": "Student", "text": "ok"}]}
    }
    corpus, traces, log = run_generation(plan, {"tmpl-x": TEMPLATE}, ReplayProvider(responses))
    covered = {}
    for entry in log:
        key = (entry.task.theme, entry.task.scenario)
        covered[key] = entry.status
    assert set(covered) == matrix.cell_keys()
    assert covered[("t1", "s1")] == "ok"
    assert covered[("t1", "s2")] == "transport_error"
