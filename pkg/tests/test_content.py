import copy
import json
import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srlsession.content import (
    DanglingRefError,
    SchemaError,
    check_answer,
    effective_dependencies,
    load_pack,
    parse_pack_document,
    serialize_pack,
    session_subtask_order,
    task_order,
    validate_pack,
)

from oracles import (
    is_topological,
    load_fixture_json,
    reference_effective_deps,
)
from packlab import synth_pack_doc


@pytest.fixture(scope="module")
def schema():
    return load_fixture_json("packs/pack.schema.json")


@pytest.fixture(scope="module")
def full_doc():
    return load_fixture_json("packs/full.json")


@pytest.fixture(scope="module")
def minimal_doc():
    return load_fixture_json("packs/minimal.json")


# ---------------------------------------------------------------------------
# schema oracle agreement


def test_fixture_packs_satisfy_schema(schema, full_doc, minimal_doc):
    jsonschema.validate(full_doc, schema)
    jsonschema.validate(minimal_doc, schema)


def test_fixture_packs_pass_package_validation(full_doc, minimal_doc):
    assert validate_pack(parse_pack_document(full_doc)).ok
    assert validate_pack(parse_pack_document(minimal_doc)).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_synth_packs_satisfy_schema_and_validation(seed):
    doc = synth_pack_doc(random.Random(seed))
    jsonschema.validate(doc, load_fixture_json("packs/pack.schema.json"))
    assert validate_pack(parse_pack_document(doc)).ok


def _corruptions(doc):
    """Yield (name, corrupted-doc) pairs; each one must fail validation."""
    base = lambda: copy.deepcopy(doc)  # noqa: E731

    d = base()
    del d["questions"]
    yield "missing top-level key", d

    d = base()
    d["stages"] = ["introduction", "task_process", "planning", "review"]
    yield "reordered stages", d

    d = base()
    d["unexpected"] = 1
    yield "unknown top-level key", d

    d = base()
    d["tasks"][0]["subtasks"][0]["completion"] = {"rule": "min_words", "n": 10}
    yield "rule not allowed for kind", d

    d = base()
    d["tasks"][-1]["subtasks"][-1]["completion"] = {"rule": "min_words"}
    yield "missing n for thresholded rule", d

    d = base()
    d["tasks"][0]["subtasks"][0]["completion"] = {"rule": "summary_submitted", "n": 3}
    yield "n forbidden for unthresholded rule", d

    d = base()
    d["tasks"][0]["subtasks"][0]["content_ref"] = "no-such-paper"
    yield "dangling content_ref", d

    d = base()
    d["tasks"][0]["depends_on"] = [d["tasks"][0]["id"]]
    yield "self task dependency", d

    d = base()
    d["tasks"][0]["subtasks"][0]["depends_on"] = [d["tasks"][0]["subtasks"][1]["id"]]
    yield "subtask dependency cycle", d

    d = base()
    d["tasks"][0]["subtasks"][1]["id"] = d["tasks"][0]["subtasks"][0]["id"]
    yield "duplicate subtask id", d

    d = base()
    d["prompts"]["quiz_tutor"]["reply_word_limit"] = 25
    yield "wrong reply word limit", d

    d = base()
    d["prompts"]["chatting"]["system"] += "\n{undeclared thing}"
    yield "undeclared placeholder", d

    d = base()
    d["tasks"][0]["subtasks"][0]["estimated_minutes"] = 0
    yield "non-positive minutes", d

    d = base()
    d["enhancement"]["quiz_hint_policy"] = "always"
    yield "unknown hint policy", d


def test_corrupted_packs_are_rejected(full_doc):
    for name, doc in _corruptions(full_doc):
        try:
            pack = parse_pack_document(doc)
        except SchemaError:
            continue  # parse-time rejection is fine too
        findings = validate_pack(pack).findings
        assert findings, f"corruption not caught: {name}"


def test_load_pack_raises_typed_errors(tmp_path, full_doc):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(full_doc), encoding="utf-8")
    load_pack(good)  # should not raise

    dangling = copy.deepcopy(full_doc)
    dangling["tasks"][0]["subtasks"][0]["content_ref"] = "missing-paper"
    bad = tmp_path / "dangling.json"
    bad.write_text(json.dumps(dangling), encoding="utf-8")
    with pytest.raises(DanglingRefError):
        load_pack(bad)

    broken = copy.deepcopy(full_doc)
    broken["tasks"][0]["subtasks"][0]["estimated_minutes"] = -5
    bad2 = tmp_path / "broken.json"
    bad2.write_text(json.dumps(broken), encoding="utf-8")
    with pytest.raises(SchemaError):
        load_pack(bad2)


# ---------------------------------------------------------------------------
# ordering properties


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_session_order_is_topological(seed):
    rng = random.Random(seed)
    doc = synth_pack_doc(rng)
    pack = parse_pack_document(doc)

    order = session_subtask_order(pack)
    assert sorted(order) == sorted(s.subtask_id for s in pack.all_subtasks())
    deps = {sid: reference_effective_deps(doc, sid) for sid in order}
    assert is_topological(order, deps)

    tasks = task_order(pack)
    task_deps = {t["id"]: set(t.get("depends_on", [])) for t in doc["tasks"]}
    assert is_topological(tasks, task_deps)


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_effective_dependencies_match_reference(seed):
    rng = random.Random(seed)
    doc = synth_pack_doc(rng)
    pack = parse_pack_document(doc)
    for sub in pack.all_subtasks():
        assert effective_dependencies(pack, sub.subtask_id) == reference_effective_deps(
            doc, sub.subtask_id
        )


def test_declaration_order_breaks_ties(full_pack):
    # independent tasks keep their declared relative order
    tasks = task_order(full_pack)
    assert tasks == ["t-foundations", "t-literature", "t-seminar", "t-synthesis"]
    order = session_subtask_order(full_pack)
    assert order.index("st-read-primer") < order.index("st-concept-quiz")
    assert order.index("st-read-paper") < order.index("st-office-hours")


# ---------------------------------------------------------------------------
# round trip


def test_serialize_then_load_round_trips(full_doc):
    pack = parse_pack_document(full_doc)
    again = parse_pack_document(serialize_pack(pack))
    assert serialize_pack(again) == serialize_pack(pack)
    assert validate_pack(again).ok


# ---------------------------------------------------------------------------
# answer checking


def test_check_answer_matrix(full_pack):
    match = full_pack.question("q-match")
    assert check_answer(match, {"observe": "gather state", "plan": "choose action", "act": "apply action"})
    assert not check_answer(match, {"observe": "choose action", "plan": "gather state", "act": "apply action"})
    assert not check_answer(match, {"observe": "gather state"})

    mc = full_pack.question("q-mc")
    assert check_answer(mc, 0)
    assert not check_answer(mc, 1)
    assert not check_answer(mc, True)  # booleans are not option indices

    ordering = full_pack.question("q-order")
    assert check_answer(ordering, list(ordering.items))
    assert not check_answer(ordering, list(reversed(ordering.items)))
    assert not check_answer(ordering, ordering.items[:-1])

    tf = full_pack.question("q-tf")
    assert check_answer(tf, True)
    assert not check_answer(tf, False)
    assert not check_answer(tf, 1)  # ints are not truth values


def test_quiz_questions_lookup(full_pack):
    ids = [q.question_id for q in full_pack.quiz_questions("st-concept-quiz")]
    assert ids == ["q-match", "q-mc", "q-order", "q-tf"]
    with pytest.raises(KeyError):
        full_pack.subtask("nope")


def test_question_privacy_fields_exist(full_pack):
    # sanity on fixture coverage: all four question forms are present
    forms = {q.form for q in full_pack.questions_for_tag("llm-agent-basics")}
    assert forms == {"matching", "multiple_choice", "ordering", "true_false"}
