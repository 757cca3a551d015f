import json

import pytest

from kbounds.bounds import Family
from kbounds.scenario import ScenarioError, load_scenario, parse_scenario
from kbounds.tails import Side


def minimal(**extra):
    doc = {
        "format_version": 1,
        "variables": [{"a": -1, "b": 1}],
    }
    doc.update(extra)
    return doc


class TestParsing:
    def test_minimal_document(self):
        scenario = parse_scenario(minimal())
        assert scenario.auto
        assert scenario.variables[0].a == -1.0
        assert scenario.query.side is Side.UPPER

    def test_explicit_choices(self):
        doc = minimal(choices=[{"family": "order_k", "k": 2}])
        scenario = parse_scenario(doc)
        assert not scenario.auto
        assert scenario.choices[0].family is Family.ORDER_K
        assert scenario.choices[0].k == 2
        scenario.sum_scenario()

    def test_full_query(self):
        doc = minimal(
            query={"t": [1.0, 2.0], "side": "two_sided", "samples": 5000, "seed": 3}
        )
        q = parse_scenario(doc).query
        assert q.ts == (1.0, 2.0)
        assert q.side is Side.TWO_SIDED
        assert (q.samples, q.seed) == (5000, 3)

    def test_t_range(self):
        doc = minimal(query={"t_range": {"min": 0.5, "max": 2.0, "count": 4}})
        ts = parse_scenario(doc).query.resolve_ts()
        assert ts == (0.5, 1.0, 1.5, 2.0)

    def test_moment_fields(self):
        doc = minimal(
            variables=[{"a": -5, "b": 5, "m2": 5, "m4": 60, "odd_moments_zero": True}]
        )
        v = parse_scenario(doc).variables[0]
        assert (v.m2, v.m4, v.odd_moments_zero) == (5.0, 60.0, True)


class TestStrictSchema:
    def test_unknown_top_level_key(self):
        with pytest.raises(ScenarioError, match="unknown key"):
            parse_scenario(minimal(notes="hello"))

    def test_unknown_variable_key(self):
        doc = minimal(variables=[{"a": -1, "b": 1, "m3": 0.0}])
        with pytest.raises(ScenarioError, match="m3"):
            parse_scenario(doc)

    def test_unknown_query_key(self):
        with pytest.raises(ScenarioError, match="tmax"):
            parse_scenario(minimal(query={"tmax": 2.0}))

    def test_missing_format_version(self):
        with pytest.raises(ScenarioError, match="format_version"):
            parse_scenario({"variables": [{"a": -1, "b": 1}]})

    def test_wrong_format_version(self):
        doc = minimal()
        doc["format_version"] = 2
        with pytest.raises(ScenarioError, match="format_version"):
            parse_scenario(doc)

    def test_bad_interval_reported_with_location(self):
        doc = minimal(variables=[{"a": 1, "b": 2}])
        with pytest.raises(ScenarioError, match=r"variables\[0\]"):
            parse_scenario(doc)

    def test_choices_length_mismatch(self):
        doc = minimal(
            variables=[{"a": -1, "b": 1}, {"a": -2, "b": 2}],
            choices=[{"family": "hertz"}],
        )
        with pytest.raises(ScenarioError, match="choices"):
            parse_scenario(doc)

    def test_unknown_family(self):
        doc = minimal(choices=[{"family": "bernstein"}])
        with pytest.raises(ScenarioError, match="family"):
            parse_scenario(doc)

    def test_choice_precondition_failure_is_input_error(self):
        doc = minimal(choices=[{"family": "order2_moment"}])
        with pytest.raises(ScenarioError, match="m2"):
            parse_scenario(doc)

    def test_both_t_and_t_range(self):
        doc = minimal(query={"t": 1.0, "t_range": {"min": 1, "max": 2, "count": 3}})
        with pytest.raises(ScenarioError, match="both"):
            parse_scenario(doc)

    def test_nonpositive_t(self):
        with pytest.raises(ScenarioError, match="positive"):
            parse_scenario(minimal(query={"t": [-1.0]}))

    def test_boolean_is_not_a_number(self):
        doc = minimal(variables=[{"a": True, "b": 1}])
        with pytest.raises(ScenarioError):
            parse_scenario(doc)


class TestFixtures:
    @pytest.mark.parametrize("name", [f"example{i}.json" for i in range(1, 6)])
    def test_shipped_fixtures_parse(self, fixtures_dir, name):
        scenario = load_scenario(fixtures_dir / name)
        assert scenario.auto
        assert scenario.query.t_range is not None

    def test_example5_contents(self, fixtures_dir):
        scenario = load_scenario(fixtures_dir / "example5.json")
        assert len(scenario.variables) == 4
        assert scenario.variables[1].m2 == 5.0
        assert scenario.query.samples == 10 ** 6

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read"):
            load_scenario(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ScenarioError, match="JSON"):
            load_scenario(bad)

    def test_round_trip_through_disk(self, tmp_path):
        doc = minimal(query={"t": 2.0})
        path = tmp_path / "s.json"
        path.write_text(json.dumps(doc))
        assert load_scenario(path).query.ts == (2.0,)
