"""Scenario files: the JSON documents the CLI consumes.

Strict schema, version-gated by ``format_version: 1``.  Unknown keys are
rejected everywhere so that a typo ("m3", "tmax") fails loudly instead of
being silently ignored.

Example::

    {
      "format_version": 1,
      "variables": [
        {"a": -1, "b": 1},
        {"a": -5, "b": 5, "m2": 5}
      ],
      "choices": "auto",
      "query": {"t_range": {"min": 0.1, "max": 12, "count": 1000}, "seed": 0}
    }

``choices`` is either the string "auto" or a list of per-variable objects
{"family": ..., "k": ...} with family one of classic, hertz, order_k,
order2_moment, order4_moment, symmetric_order4 (order_k requires "k").
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import BoundedSupport, Family, FamilyTag
from .tails import Side, SumScenario


class ScenarioError(ValueError):
    """Malformed or schema-violating scenario document."""


_VARIABLE_KEYS = {"a", "b", "m2", "m4", "odd_moments_zero"}
_QUERY_KEYS = {"t", "t_range", "side", "samples", "seed"}
_RANGE_KEYS = {"min", "max", "count"}
_TOP_KEYS = {"format_version", "variables", "choices", "query"}


@dataclass(frozen=True)
class Query:
    ts: tuple[float, ...] | None = None
    t_range: tuple[float, float, int] | None = None
    side: Side = Side.UPPER
    samples: int = 10 ** 6
    seed: int = 0

    def resolve_ts(self) -> tuple[float, ...]:
        if self.ts is not None:
            return self.ts
        if self.t_range is not None:
            lo, hi, count = self.t_range
            return tuple(float(t) for t in np.linspace(lo, hi, count))
        raise ScenarioError("no t values: give query.t, query.t_range or --t")


@dataclass(frozen=True)
class Scenario:
    variables: tuple[BoundedSupport, ...]
    choices: tuple[FamilyTag, ...] | None  # None means "auto"
    query: Query

    @property
    def auto(self) -> bool:
        return self.choices is None

    def sum_scenario(self) -> SumScenario:
        if self.choices is None:
            raise ScenarioError("scenario has choices: auto; select ks first")
        return SumScenario(self.variables, self.choices)


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) {sorted(unknown)} in {where}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where} must be a number, got {value!r}")
    return float(value)


def _parse_variable(obj, index: int) -> BoundedSupport:
    where = f"variables[{index}]"
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where} must be an object")
    _reject_unknown(obj, _VARIABLE_KEYS, where)
    for req in ("a", "b"):
        if req not in obj:
            raise ScenarioError(f"{where} missing required key '{req}'")
    odd = obj.get("odd_moments_zero", False)
    if not isinstance(odd, bool):
        raise ScenarioError(f"{where}.odd_moments_zero must be a boolean")
    try:
        return BoundedSupport(
            a=_number(obj["a"], f"{where}.a"),
            b=_number(obj["b"], f"{where}.b"),
            m2=None if "m2" not in obj else _number(obj["m2"], f"{where}.m2"),
            m4=None if "m4" not in obj else _number(obj["m4"], f"{where}.m4"),
            odd_moments_zero=odd,
        )
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def parse_family_tag(obj, where: str = "choice") -> FamilyTag:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where} must be an object with a 'family' key")
    _reject_unknown(obj, {"family", "k"}, where)
    name = obj.get("family")
    try:
        family = Family(name)
    except ValueError:
        valid = ", ".join(f.value for f in Family)
        raise ScenarioError(f"{where}.family must be one of: {valid}") from None
    k = obj.get("k")
    if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
        raise ScenarioError(f"{where}.k must be an integer")
    try:
        return FamilyTag(family, k)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _parse_query(obj) -> Query:
    if obj is None:
        return Query()
    if not isinstance(obj, dict):
        raise ScenarioError("query must be an object")
    _reject_unknown(obj, _QUERY_KEYS, "query")
    if "t" in obj and "t_range" in obj:
        raise ScenarioError("query has both t and t_range; give one")
    ts = None
    if "t" in obj:
        raw = obj["t"] if isinstance(obj["t"], list) else [obj["t"]]
        ts = tuple(_number(v, "query.t") for v in raw)
        if not ts or any(t <= 0.0 for t in ts):
            raise ScenarioError("query.t values must be positive")
    t_range = None
    if "t_range" in obj:
        rng = obj["t_range"]
        if not isinstance(rng, dict):
            raise ScenarioError("query.t_range must be an object {min,max,count}")
        _reject_unknown(rng, _RANGE_KEYS, "query.t_range")
        for req in _RANGE_KEYS:
            if req not in rng:
                raise ScenarioError(f"query.t_range missing '{req}'")
        lo = _number(rng["min"], "t_range.min")
        hi = _number(rng["max"], "t_range.max")
        count = rng["count"]
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ScenarioError("t_range.count must be an integer >= 2")
        if not 0.0 < lo < hi:
            raise ScenarioError("t_range requires 0 < min < max")
        t_range = (lo, hi, count)
    side = Side.UPPER
    if "side" in obj:
        try:
            side = Side(obj["side"])
        except ValueError:
            valid = ", ".join(s.value for s in Side)
            raise ScenarioError(f"query.side must be one of: {valid}") from None
    samples = obj.get("samples", 10 ** 6)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise ScenarioError("query.samples must be a positive integer")
    seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ScenarioError("query.seed must be a nonnegative integer")
    return Query(ts=ts, t_range=t_range, side=side, samples=samples, seed=seed)


def parse_scenario(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "scenario")
    if doc.get("format_version") != 1:
        raise ScenarioError("scenario requires format_version: 1")
    raw_vars = doc.get("variables")
    if not isinstance(raw_vars, list) or not raw_vars:
        raise ScenarioError("variables must be a non-empty list")
    variables = tuple(_parse_variable(v, i) for i, v in enumerate(raw_vars))

    raw_choices = doc.get("choices", "auto")
    if raw_choices == "auto":
        choices = None
    elif isinstance(raw_choices, list):
        if len(raw_choices) != len(variables):
            raise ScenarioError(
                f"{len(raw_choices)} choices for {len(variables)} variables"
            )
        choices = tuple(
            parse_family_tag(c, f"choices[{i}]") for i, c in enumerate(raw_choices)
        )
    else:
        raise ScenarioError("choices must be \"auto\" or a list of choice objects")

    scenario = Scenario(variables, choices, _parse_query(doc.get("query")))
    if choices is not None:
        try:
            scenario.sum_scenario()
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    return parse_scenario(doc)
