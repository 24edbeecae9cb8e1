"""Scenario runner: JSON in, growth tables and entropy verdicts out.

A scenario document declares one ambient group, one endomorphism, named
finitely generated subgroups, and a list of tasks over them:

.. code-block:: json

    {
      "name": "paper-example",
      "ambient": {"kind": "torsion_sum", "modulus": 2},
      "endomorphism": {"kind": "right_shift"},
      "subgroups": {"H": [{"0": 1}], "Hp": [{"0": 1}, {"1": 1}]},
      "tasks": [
        {"op": "growth", "subgroup": "H", "k": 2, "max_n": 8},
        {"op": "counterexample"}
      ]
    }

Rational elements are arrays of exact strings (``["3/2", "0"]``); torsion
elements are sparse ``{"index": residue}`` objects. Endomorphisms:
``{"kind": "matrix", "entries": [["3/2"]]}``, ``{"kind": "right_shift"}``,
``{"kind": "left_shift"}``, or
``{"kind": "stencil", "taps": [{"offset": 1, "coeff": 1}]}``.

Task ops: ``inert``, ``growth``, ``entropy``, ``entropy_on_trajectory``,
``entropy_power_on_trajectory``, ``log_law``, ``trajectory_invariance``,
``trajectory_identity``, ``counterexample``. Option precedence per task:
task field, then command-line flag, then scenario ``options``, then defaults
(``max_n`` 64, ``stability_window`` 4, ``max_m`` 32). The environment
variable ``ENTROPY_LAB_MAX_N`` caps ``max_n`` globally.

Every entropy figure reported here is the entropy of the map restricted to
the trajectory generated by a declared seed subgroup (or with respect to a
declared inert subgroup). The supremum over *all* inert subgroups is not
computed; it is not algorithmically attainable in general.

Exit codes: 0 means every task ran and every asserted equality held; 1 means
some task failed or errored; 2 means usage, file, or scenario-validation error.
JSON reports are byte-identical across runs of the same scenario text except
for ``elapsed_ms`` timing fields.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import entropy as ent_mod
from . import groups, oracle
from .endomorphisms import (
    Endo,
    MatrixEndo,
    StencilEndo,
    left_shift,
    power,
    right_shift,
)
from .entropy import (
    EntropyOptions,
    ExactLog,
    GrowthTrace,
    find_inert_trajectory_level,
    growth_trace,
    inert_certificate,
    log_law_report,
    partial_trajectory,
    trajectory_identity_check,
    trajectory_invariance_report,
)
from .errors import (
    EntropyLabError,
    InertLevelNotFoundError,
    InternalInvariantViolation,
    OracleMismatchError,
    ScenarioError,
)
from .groups import Ambient, Element, FgSubgroup, Rational, TorsionSum
from .linalg import Cardinality, RatMatrix

__all__ = [
    "Scenario",
    "TaskSpec",
    "TaskRecord",
    "Report",
    "parse_scenario",
    "builtin_scenario",
    "run",
    "render",
    "main",
    "ENV_MAX_N",
    "BUILTIN_USAGE",
]

ENV_MAX_N = "ENTROPY_LAB_MAX_N"

_DEFAULT_MAX_N = 64
_DEFAULT_WINDOW = 4
_DEFAULT_MAX_M = 32

_RANGES = {
    "max_n": (1, 10000),
    "stability_window": (1, 10000),
    "k": (1, 64),
    "max_m": (1, 256),
    "m": (1, 256),
    "n": (1, 10000),
}

_OPS: dict[str, dict[str, Any]] = {
    "inert": {"required": ["subgroup"], "optional": ["k"]},
    "growth": {"required": ["subgroup"], "optional": ["k", "max_n"]},
    "entropy": {"required": ["subgroup"], "optional": ["k", "max_n", "stability_window"]},
    "entropy_on_trajectory": {
        "required": ["subgroup"],
        "optional": ["max_n", "stability_window", "max_m"],
    },
    "entropy_power_on_trajectory": {
        "required": ["subgroup", "k"],
        "optional": ["max_n", "stability_window", "max_m"],
    },
    "log_law": {"required": ["subgroup", "k"], "optional": ["max_n", "stability_window", "max_m"]},
    "trajectory_invariance": {
        "required": ["subgroup", "k"],
        "optional": ["max_n", "stability_window"],
    },
    "trajectory_identity": {"required": ["subgroup", "k", "m", "n"], "optional": []},
    "counterexample": {"required": [], "optional": []},
}


@dataclass(frozen=True)
class TaskSpec:
    """One validated task, with only its explicitly given options."""

    index: int
    op: str
    subgroup: Optional[str] = None
    k: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    max_n: Optional[int] = None
    stability_window: Optional[int] = None
    max_m: Optional[int] = None


@dataclass(frozen=True)
class Scenario:
    """A validated scenario document."""

    name: str
    ambient: Ambient
    endo: Endo
    subgroups: dict[str, FgSubgroup]
    tasks: tuple[TaskSpec, ...]
    options: dict[str, int] = field(default_factory=dict)


@dataclass
class TaskRecord:
    index: int
    op: str
    inputs: dict[str, Any]
    result: Optional[dict[str, Any]]
    verdict: Optional[bool]
    error: Optional[str]
    elapsed_ms: float


@dataclass
class Report:
    scenario: str
    tasks: list[TaskRecord]

    @property
    def all_ok(self) -> bool:
        return all(t.error is None and t.verdict is not False for t in self.tasks)


# ---------------------------------------------------------------------------
# scenario validation


def _fail(path: str, msg: str) -> None:
    raise ScenarioError(f"{path}: {msg}")


def _expect_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        _fail(path, f"expected an array, got {type(value).__name__}")
    return value


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        _fail(path, f"expected a string, got {type(value).__name__}")
    return value


def _expect_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {type(value).__name__}")
    return value


def _expect_range(value, name: str, path: str) -> int:
    v = _expect_int(value, path)
    lo, hi = _RANGES[name]
    if not lo <= v <= hi:
        _fail(path, f"{name} must be in [{lo}, {hi}], got {v}")
    return v


def _no_extra_keys(doc: dict, allowed: set[str], path: str) -> None:
    extra = sorted(set(doc) - allowed)
    if extra:
        _fail(path, f"unknown key(s): {', '.join(extra)}")


def _parse_fraction(value, path: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        _fail(path, "expected an exact value: integer or string like \"3/2\"")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            _fail(path, f"not a rational number: {e}")
    _fail(path, f"expected an integer or string, got {type(value).__name__}")
    raise AssertionError("unreachable")


def _parse_ambient(doc, path: str) -> Ambient:
    doc = _expect_object(doc, path)
    kind = _expect_str(doc.get("kind"), f"{path}.kind") if "kind" in doc else _fail(path, "missing key: kind")
    if kind == "rational":
        _no_extra_keys(doc, {"kind", "rank"}, path)
        if "rank" not in doc:
            _fail(path, "missing key: rank")
        rank = _expect_int(doc["rank"], f"{path}.rank")
        if rank < 1:
            _fail(f"{path}.rank", f"rank must be >= 1, got {rank}")
        return Rational(rank)
    if kind == "torsion_sum":
        _no_extra_keys(doc, {"kind", "modulus"}, path)
        if "modulus" not in doc:
            _fail(path, "missing key: modulus")
        modulus = _expect_int(doc["modulus"], f"{path}.modulus")
        if modulus < 2:
            _fail(f"{path}.modulus", f"modulus must be >= 2, got {modulus}")
        return TorsionSum(modulus)
    _fail(f"{path}.kind", f"unknown ambient kind {kind!r}; expected rational or torsion_sum")
    raise AssertionError("unreachable")


def _parse_endo(doc, ambient: Ambient, path: str) -> Endo:
    doc = _expect_object(doc, path)
    if "kind" not in doc:
        _fail(path, "missing key: kind")
    kind = _expect_str(doc["kind"], f"{path}.kind")
    if kind == "matrix":
        if not isinstance(ambient, Rational):
            _fail(f"{path}.kind", "matrix endomorphisms require a rational ambient")
        _no_extra_keys(doc, {"kind", "entries"}, path)
        if "entries" not in doc:
            _fail(path, "missing key: entries")
        rows = _expect_list(doc["entries"], f"{path}.entries")
        n = ambient.rank
        if len(rows) != n:
            _fail(f"{path}.entries", f"expected {n} rows, got {len(rows)}")
        ents = []
        for i, row in enumerate(rows):
            row = _expect_list(row, f"{path}.entries[{i}]")
            if len(row) != n:
                _fail(f"{path}.entries[{i}]", f"expected {n} entries, got {len(row)}")
            for j, e in enumerate(row):
                ents.append(_parse_fraction(e, f"{path}.entries[{i}][{j}]"))
        return MatrixEndo(ambient, RatMatrix(n, n, ents))
    if kind in ("right_shift", "left_shift"):
        if not isinstance(ambient, TorsionSum):
            _fail(f"{path}.kind", f"{kind} requires a torsion_sum ambient")
        _no_extra_keys(doc, {"kind"}, path)
        return right_shift(ambient) if kind == "right_shift" else left_shift(ambient)
    if kind == "stencil":
        if not isinstance(ambient, TorsionSum):
            _fail(f"{path}.kind", "stencil endomorphisms require a torsion_sum ambient")
        _no_extra_keys(doc, {"kind", "taps"}, path)
        if "taps" not in doc:
            _fail(path, "missing key: taps")
        taps_doc = _expect_list(doc["taps"], f"{path}.taps")
        if not taps_doc:
            _fail(f"{path}.taps", "a stencil needs at least one tap")
        taps = []
        seen: set[int] = set()
        for i, tap in enumerate(taps_doc):
            tap = _expect_object(tap, f"{path}.taps[{i}]")
            _no_extra_keys(tap, {"offset", "coeff"}, f"{path}.taps[{i}]")
            for key in ("offset", "coeff"):
                if key not in tap:
                    _fail(f"{path}.taps[{i}]", f"missing key: {key}")
            off = _expect_int(tap["offset"], f"{path}.taps[{i}].offset")
            coeff = _expect_int(tap["coeff"], f"{path}.taps[{i}].coeff")
            if off in seen:
                _fail(f"{path}.taps[{i}].offset", f"duplicate offset {off}")
            seen.add(off)
            if coeff % ambient.modulus == 0:
                _fail(f"{path}.taps[{i}].coeff", f"coefficient is zero mod {ambient.modulus}")
            taps.append((off, coeff))
        return StencilEndo(ambient, taps)
    _fail(f"{path}.kind", f"unknown endomorphism kind {kind!r}")
    raise AssertionError("unreachable")


def _parse_element(doc, ambient: Ambient, path: str) -> Element:
    if isinstance(ambient, Rational):
        arr = _expect_list(doc, path)
        if len(arr) != ambient.rank:
            _fail(path, f"expected {ambient.rank} coordinates, got {len(arr)}")
        return ambient.element([_parse_fraction(v, f"{path}[{i}]") for i, v in enumerate(arr)])
    obj = _expect_object(doc, path)
    pairs = []
    for key, value in obj.items():
        if not key.isdigit():
            _fail(path, f"coordinate key {key!r} is not a non-negative integer")
        pairs.append((int(key), _expect_int(value, f"{path}.{key}")))
    return ambient.element(pairs)


def _parse_task(doc, index: int, names: set[str], path: str) -> TaskSpec:
    doc = _expect_object(doc, path)
    if "op" not in doc:
        _fail(path, "missing key: op")
    op = _expect_str(doc["op"], f"{path}.op")
    if op not in _OPS:
        _fail(f"{path}.op", f"unknown op {op!r}; expected one of {', '.join(sorted(_OPS))}")
    spec = _OPS[op]
    allowed = {"op", *spec["required"], *spec["optional"]}
    _no_extra_keys(doc, allowed, path)
    for key in spec["required"]:
        if key not in doc:
            _fail(path, f"op {op!r} requires key: {key}")
    fields: dict[str, Any] = {"index": index, "op": op}
    if "subgroup" in doc:
        name = _expect_str(doc["subgroup"], f"{path}.subgroup")
        if name not in names:
            _fail(f"{path}.subgroup", f"undeclared subgroup {name!r}")
        fields["subgroup"] = name
    for key in ("k", "m", "n", "max_n", "stability_window", "max_m"):
        if key in doc:
            fields[key] = _expect_range(doc[key], key, f"{path}.{key}")
    return TaskSpec(**fields)


def _scenario_from_doc(doc: Any) -> Scenario:
    top = _expect_object(doc, "$")
    _no_extra_keys(top, {"name", "ambient", "endomorphism", "subgroups", "tasks", "options"}, "$")
    for key in ("ambient", "endomorphism", "subgroups", "tasks"):
        if key not in top:
            _fail("$", f"missing key: {key}")
    name = _expect_str(top.get("name", "scenario"), "name")
    ambient = _parse_ambient(top["ambient"], "ambient")
    endo = _parse_endo(top["endomorphism"], ambient, "endomorphism")
    sub_doc = _expect_object(top["subgroups"], "subgroups")
    subgroups: dict[str, FgSubgroup] = {}
    for sub_name, gens_doc in sub_doc.items():
        if not sub_name:
            _fail("subgroups", "subgroup names must be non-empty")
        gens_list = _expect_list(gens_doc, f"subgroups.{sub_name}")
        gens = [
            _parse_element(g, ambient, f"subgroups.{sub_name}[{i}]") for i, g in enumerate(gens_list)
        ]
        subgroups[sub_name] = groups.subgroup(ambient, gens)
    options: dict[str, int] = {}
    if "options" in top:
        opt_doc = _expect_object(top["options"], "options")
        _no_extra_keys(opt_doc, {"max_n", "stability_window", "max_m"}, "options")
        for key in ("max_n", "stability_window", "max_m"):
            if key in opt_doc:
                options[key] = _expect_range(opt_doc[key], key, f"options.{key}")
    tasks_doc = _expect_list(top["tasks"], "tasks")
    tasks = tuple(
        _parse_task(t, i, set(subgroups), f"tasks[{i}]") for i, t in enumerate(tasks_doc)
    )
    return Scenario(
        name=name, ambient=ambient, endo=endo, subgroups=subgroups, tasks=tasks, options=options
    )


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario JSON; diagnostics name the offending path."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"$: invalid JSON: {e}") from e
    return _scenario_from_doc(doc)


# ---------------------------------------------------------------------------
# built-in scenarios

BUILTIN_USAGE = {
    "paper-example": "paper-example",
    "bernoulli": "bernoulli <modulus> <k>",
    "rational-mult": "rational-mult <p>/<q> <k>",
}


def _paper_example_doc() -> dict:
    return {
        "name": "paper-example",
        "ambient": {"kind": "torsion_sum", "modulus": 2},
        "endomorphism": {"kind": "right_shift"},
        "subgroups": {"H": [{"0": 1}], "Hp": [{"0": 1}, {"1": 1}]},
        "tasks": [
            {"op": "growth", "subgroup": "H", "k": 2, "max_n": 8},
            {"op": "growth", "subgroup": "Hp", "k": 2, "max_n": 8},
            {"op": "entropy", "subgroup": "H", "k": 2},
            {"op": "entropy", "subgroup": "Hp", "k": 2},
            {"op": "counterexample"},
        ],
    }


def builtin_scenario(name: str, args: list[str]) -> Scenario:
    """Construct one of the named built-in scenarios."""
    if name == "paper-example":
        if args:
            raise ScenarioError("paper-example takes no arguments")
        return _scenario_from_doc(_paper_example_doc())
    if name == "bernoulli":
        if len(args) != 2:
            raise ScenarioError(f"usage: {BUILTIN_USAGE['bernoulli']}")
        try:
            modulus, k = int(args[0]), int(args[1])
        except ValueError as e:
            raise ScenarioError(f"bernoulli arguments must be integers: {e}") from e
        if modulus < 2:
            raise ScenarioError(f"modulus must be >= 2, got {modulus}")
        if not 1 <= k <= 64:
            raise ScenarioError(f"k must be in [1, 64], got {k}")
        return _scenario_from_doc(
            {
                "name": f"bernoulli-{modulus}-{k}",
                "ambient": {"kind": "torsion_sum", "modulus": modulus},
                "endomorphism": {"kind": "right_shift"},
                "subgroups": {"F": [{"0": 1}]},
                "tasks": [{"op": "log_law", "subgroup": "F", "k": k}],
            }
        )
    if name == "rational-mult":
        if len(args) != 2:
            raise ScenarioError(f"usage: {BUILTIN_USAGE['rational-mult']}")
        try:
            ratio = Fraction(args[0])
        except (ValueError, ZeroDivisionError) as e:
            raise ScenarioError(f"not a rational number {args[0]!r}: {e}") from e
        try:
            k = int(args[1])
        except ValueError as e:
            raise ScenarioError(f"k must be an integer: {e}") from e
        if not 1 <= k <= 64:
            raise ScenarioError(f"k must be in [1, 64], got {k}")
        return _scenario_from_doc(
            {
                "name": f"rational-mult-{ratio.numerator}-{ratio.denominator}-{k}",
                "ambient": {"kind": "rational", "rank": 1},
                "endomorphism": {"kind": "matrix", "entries": [[str(ratio)]]},
                "subgroups": {"F": [["1"]]},
                "tasks": [{"op": "log_law", "subgroup": "F", "k": k}],
            }
        )
    raise ScenarioError(f"unknown builtin {name!r}; see list-builtins")


# ---------------------------------------------------------------------------
# serialization helpers


def _card_doc(c: Cardinality) -> str:
    return str(c.value) if c.is_finite else "infinite"


def _entropy_doc(result) -> dict[str, Any]:
    if isinstance(result, ExactLog):
        return {"kind": "exact", "c": str(result.c), "log": f"{result.log_value:.12f}"}
    return {"kind": "undetermined", "lower": result.lower, "upper": result.upper}


def _element_doc(x: Element) -> Any:
    if isinstance(x.ambient, TorsionSum):
        return {str(i): r for i, r in x.data}
    return [str(v) for v in x.data]


def _subgroup_doc(h: FgSubgroup) -> list:
    return [_element_doc(g) for g in h.generators()]


def _growth_doc(trace: GrowthTrace) -> dict[str, Any]:
    table = []
    for i, idx in enumerate(trace.indices):
        inc = trace.increments[i] if i < len(trace.increments) else None
        table.append(
            {
                "n": i + 1,
                "index": _card_doc(idx),
                "increment": _card_doc(inc) if inc is not None else None,
            }
        )
    return {"table": table, "saturated_at": trace.saturated_at}


def _cert_doc(cert) -> dict[str, Any]:
    return {"defect": _card_doc(cert.defect), "inert": cert.verdict}


# ---------------------------------------------------------------------------
# oracle cross-checking


def _oracle_check_growth(
    f_power, h: FgSubgroup, trace: GrowthTrace, cap: int = oracle.DEFAULT_CAP
) -> dict[str, int]:
    """Re-derive every index in a growth table by an independent route.

    Torsion: literal element counting (skipped once ``|T_n|`` exceeds the
    cap). Rank-1 rational: the cyclic-subgroup gcd formula. Higher-rank
    rational ambients are skipped. A disagreement raises
    :class:`~entropy_lab.errors.OracleMismatchError`.
    """
    ambient = h.ambient
    checked = 0
    skipped = 0
    if isinstance(ambient, TorsionSum):
        for i, idx in enumerate(trace.indices):
            t_n = partial_trajectory(f_power, h, i + 1)
            order = groups.subgroup_order(t_n)
            if not order.is_finite or order.value > cap:
                skipped += 1
                continue
            by_count = oracle.index_by_enumeration(t_n, h, cap)
            if by_count != idx:
                raise OracleMismatchError(
                    f"growth index at n={i + 1}: engine {idx!r}, enumeration {by_count!r}"
                )
            checked += 1
        return {"checked": checked, "skipped": skipped}
    if isinstance(ambient, Rational) and ambient.rank == 1:
        base = oracle.cyclic_from_subgroup(h)
        scalar = _rank1_scalar(f_power)
        term = base.generator
        acc = base
        for i, idx in enumerate(trace.indices):
            if i > 0:
                term = term * scalar
                acc = oracle.cyclic_sum(acc, oracle.CyclicRational(term))
            if acc.generator == 0:
                by_cyclic = Cardinality.finite(1)
            else:
                ratio = base.generator / acc.generator
                if ratio.denominator != 1:
                    raise OracleMismatchError(f"cyclic index at n={i + 1} is not an integer")
                by_cyclic = Cardinality.finite(ratio.numerator)
            if by_cyclic != idx:
                raise OracleMismatchError(
                    f"growth index at n={i + 1}: engine {idx!r}, cyclic oracle {by_cyclic!r}"
                )
            checked += 1
        return {"checked": checked, "skipped": skipped}
    return {"checked": 0, "skipped": len(trace.indices)}


def _rank1_scalar(f_power) -> Fraction:
    base = f_power.base
    if not isinstance(base, MatrixEndo) or base.matrix.rows != 1:
        raise OracleMismatchError("cyclic oracle requires a 1x1 matrix endomorphism")
    return base.matrix[0, 0] ** f_power.exponent


# ---------------------------------------------------------------------------
# task execution


def _resolve_opts(task: TaskSpec, scenario: Scenario, cli: dict[str, Optional[int]], cap: Optional[int]) -> EntropyOptions:
    def pick(key: str, default: int) -> tuple[int, bool]:
        for source in (getattr(task, key, None), cli.get(key), scenario.options.get(key)):
            if source is not None:
                return source, True
        return default, False

    max_n, _ = pick("max_n", _DEFAULT_MAX_N)
    window, window_explicit = pick("stability_window", _DEFAULT_WINDOW)
    max_m, _ = pick("max_m", _DEFAULT_MAX_M)
    if not window_explicit:
        window = min(window, max_n)
    if cap is not None:
        # safety valve: the cap shrinks runs, it never turns them into errors
        max_n = min(max_n, cap)
        window = min(window, max_n)
    try:
        return EntropyOptions(max_n=max_n, stability_window=window, max_m=max_m)
    except ValueError as e:
        raise ScenarioError(f"tasks[{task.index}]: {e}") from e


def _execute_task(
    task: TaskSpec,
    scenario: Scenario,
    opts: EntropyOptions,
    verify_oracle: bool,
) -> tuple[dict[str, Any], dict[str, Any], Optional[bool]]:
    """Returns (inputs echo, result payload, verdict)."""
    endo = scenario.endo
    k = task.k or 1
    h = scenario.subgroups[task.subgroup] if task.subgroup else None
    inputs: dict[str, Any] = {}
    if task.subgroup is not None:
        inputs["subgroup"] = task.subgroup
    if task.op in ("inert", "growth", "entropy", "entropy_power_on_trajectory", "log_law", "trajectory_invariance", "trajectory_identity"):
        inputs["k"] = k
    if task.op == "trajectory_identity":
        inputs["m"] = task.m
        inputs["n"] = task.n
    if task.op in ("growth", "entropy", "entropy_on_trajectory", "entropy_power_on_trajectory", "log_law", "trajectory_invariance"):
        inputs["max_n"] = opts.max_n
    if task.op in ("entropy", "entropy_on_trajectory", "entropy_power_on_trajectory", "log_law", "trajectory_invariance"):
        inputs["stability_window"] = opts.stability_window
    if task.op in ("entropy_on_trajectory", "entropy_power_on_trajectory", "log_law"):
        inputs["max_m"] = opts.max_m

    if task.op == "inert":
        cert = inert_certificate(power(endo, k), h)
        return inputs, _cert_doc(cert), cert.verdict

    if task.op == "growth":
        f = power(endo, k)
        trace = growth_trace(f, h, opts.max_n)
        result = _growth_doc(trace)
        if verify_oracle:
            result["oracle"] = _oracle_check_growth(f, h, trace)
        return inputs, result, None

    if task.op == "entropy":
        f = power(endo, k)
        trace = growth_trace(f, h, opts.max_n)
        ent = ent_mod.certify_trace(trace, opts.stability_window)
        result = _growth_doc(trace)
        result["entropy"] = _entropy_doc(ent)
        if verify_oracle:
            result["oracle"] = _oracle_check_growth(f, h, trace)
        return inputs, result, None

    if task.op == "entropy_on_trajectory":
        f = power(endo, 1)
        found = find_inert_trajectory_level(f, h, opts.max_m)
        if found is None:
            raise InertLevelNotFoundError(f"no inert trajectory level within max_m={opts.max_m}")
        level_m, level = found
        trace = growth_trace(f, level, opts.max_n)
        ent = ent_mod.certify_trace(trace, opts.stability_window)
        result: dict[str, Any] = {"inert_level": level_m, "reference": _subgroup_doc(level)}
        result.update(_growth_doc(trace))
        result["entropy"] = _entropy_doc(ent)
        if verify_oracle:
            result["oracle"] = _oracle_check_growth(f, level, trace)
        return inputs, result, None

    if task.op == "entropy_power_on_trajectory":
        f = power(endo, 1)
        found = find_inert_trajectory_level(f, h, opts.max_m)
        if found is None:
            raise InertLevelNotFoundError(f"no inert trajectory level within max_m={opts.max_m}")
        level_m, _ = found
        reference = partial_trajectory(f, h, level_m + k - 1)
        f_k = power(endo, k)
        if not inert_certificate(f, reference).verdict:
            raise InternalInvariantViolation("extended trajectory level lost base-map inertness")
        if not inert_certificate(f_k, reference).verdict:
            raise InternalInvariantViolation("extended trajectory level is not inert under the power")
        trace = growth_trace(f_k, reference, opts.max_n)
        ent = ent_mod.certify_trace(trace, opts.stability_window)
        result = {"inert_level": level_m, "reference": _subgroup_doc(reference)}
        result.update(_growth_doc(trace))
        result["entropy"] = _entropy_doc(ent)
        if verify_oracle:
            result["oracle"] = _oracle_check_growth(f_k, reference, trace)
        return inputs, result, None

    if task.op == "log_law":
        report = log_law_report(endo, k, h, opts)
        result = {
            "entropy_base": _entropy_doc(report.entropy_base),
            "entropy_power": _entropy_doc(report.entropy_power),
            "k_times_base": _entropy_doc(report.k_times_base) if report.k_times_base else None,
            "law_holds": report.law_holds,
        }
        return inputs, result, report.law_holds

    if task.op == "trajectory_invariance":
        report = trajectory_invariance_report(power(endo, 1), h, k, opts)
        result = {
            "left": _entropy_doc(report.left),
            "right": _entropy_doc(report.right),
            "equal": report.equal,
        }
        return inputs, result, report.equal

    if task.op == "trajectory_identity":
        equal = trajectory_identity_check(endo, k, task.m, h, task.n)
        return inputs, {"equal": equal}, equal

    if task.op == "counterexample":
        report = ent_mod.counterexample_report()
        rows = [
            {"n": n, "index_h": _card_doc(ih), "index_hp": _card_doc(ihp)}
            for n, ih, ihp in report.rows
        ]
        result = {
            "rows": rows,
            "entropy_h": _entropy_doc(report.entropy_h),
            "entropy_hp": _entropy_doc(report.entropy_h_prime),
            "certificates": {name: _cert_doc(c) for name, c in report.certificates.items()},
            "distinct": report.distinct,
        }
        return inputs, result, report.distinct

    raise ScenarioError(f"tasks[{task.index}]: unknown op {task.op!r}")  # pragma: no cover


def run(
    scenario: Scenario,
    *,
    cli_max_n: Optional[int] = None,
    cli_stability_window: Optional[int] = None,
    verify_oracle: bool = False,
    max_n_cap: Optional[int] = None,
) -> Report:
    """Execute every task in declaration order and assemble a report."""
    cli = {"max_n": cli_max_n, "stability_window": cli_stability_window}
    plans = [(task, _resolve_opts(task, scenario, cli, max_n_cap)) for task in scenario.tasks]
    records: list[TaskRecord] = []
    for task, opts in plans:
        started = time.perf_counter()
        try:
            inputs, result, verdict = _execute_task(task, scenario, opts, verify_oracle)
            error = None
        except (EntropyLabError, ValueError) as e:
            inputs = {"subgroup": task.subgroup} if task.subgroup else {}
            result = None
            verdict = None
            error = f"{type(e).__name__}: {e}"
        elapsed = round((time.perf_counter() - started) * 1000.0, 3)
        records.append(
            TaskRecord(
                index=task.index,
                op=task.op,
                inputs=inputs,
                result=result,
                verdict=verdict,
                error=error,
                elapsed_ms=elapsed,
            )
        )
    return Report(scenario=scenario.name, tasks=records)


# ---------------------------------------------------------------------------
# rendering


def report_doc(report: Report) -> dict[str, Any]:
    """Stable-keyed dict form of a report (the JSON rendering serializes this)."""
    return {
        "scenario": report.scenario,
        "tasks": [
            {
                "task": t.index,
                "op": t.op,
                "inputs": t.inputs,
                "result": t.result,
                "verdict": t.verdict,
                "error": t.error,
                "elapsed_ms": t.elapsed_ms,
            }
            for t in report.tasks
        ],
        "all_ok": report.all_ok,
    }


def _verdict_text(verdict: Optional[bool]) -> str:
    if verdict is None:
        return "-"
    return "pass" if verdict else "FAIL"


def _format_rows(headers: list[str], rows: list[list[str]], indent: str = "    ") -> list[str]:
    widths = [len(x) for x in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    out = [indent + "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    for row in rows:
        out.append(indent + "  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return out


def _entropy_text(doc: dict[str, Any]) -> str:
    if doc["kind"] == "exact":
        return f"log({doc['c']}) = {doc['log']}"
    return f"undetermined in [{doc['lower']}, {doc['upper']}]"


def _render_table(report: Report) -> str:
    lines = [f"scenario: {report.scenario}"]
    for t in report.tasks:
        head = f"[{t.index}] {t.op}"
        if t.inputs:
            head += "  " + " ".join(f"{k}={v}" for k, v in t.inputs.items())
        lines.append(head)
        if t.error is not None:
            lines.append(f"    error: {t.error}")
            continue
        r = t.result or {}
        if "inert_level" in r:
            lines.append(f"    inert trajectory level: m={r['inert_level']}")
        if "table" in r:
            rows = [
                [str(row["n"]), row["index"], row["increment"] if row["increment"] is not None else "-"]
                for row in r["table"]
            ]
            lines.extend(_format_rows(["n", "index", "increment"], rows))
            if r.get("saturated_at") is not None:
                lines.append(f"    saturated at n={r['saturated_at']}")
        if "rows" in r:
            rows = [[str(row["n"]), row["index_h"], row["index_hp"]] for row in r["rows"]]
            lines.extend(_format_rows(["n", "|T_n/H|", "|T_n/Hp|"], rows))
        if "defect" in r:
            lines.append(f"    defect: {r['defect']}")
        for key, label in (
            ("entropy", "entropy"),
            ("entropy_base", "entropy(f)"),
            ("entropy_power", "entropy(f^k)"),
            ("k_times_base", "k*entropy(f)"),
            ("entropy_h", "entropy wrt H"),
            ("entropy_hp", "entropy wrt Hp"),
            ("left", "entropy wrt H"),
            ("right", "entropy wrt T_k(H)"),
        ):
            if r.get(key) is not None:
                lines.append(f"    {label}: {_entropy_text(r[key])}")
        if "oracle" in r:
            lines.append(
                f"    oracle: {r['oracle']['checked']} checked, {r['oracle']['skipped']} skipped"
            )
        lines.append(f"    verdict: {_verdict_text(t.verdict)}")
    lines.append(f"overall: {'ok' if report.all_ok else 'FAILED'} ({len(report.tasks)} tasks)")
    return "\n".join(lines)


def render(report: Report, fmt: str = "table") -> str:
    """Render a report as an aligned text table or stable compact JSON."""
    if fmt == "json":
        return json.dumps(report_doc(report), separators=(",", ":"))
    if fmt == "table":
        return _render_table(report)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropy-lab",
        description=(
            "Exact growth and entropy computations for endomorphisms of "
            "representable Abelian groups. Entropies are computed on the "
            "trajectory generated by a declared seed subgroup (or with "
            "respect to a declared inert subgroup), never as a supremum "
            "over all inert subgroups."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--max-n", type=int, dest="max_n", default=None, metavar="N")
        p.add_argument(
            "--stability-window", type=int, dest="stability_window", default=None, metavar="W"
        )
        p.add_argument("--verify-oracle", action="store_true", dest="verify_oracle")

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("file")
    add_common(p_run)

    p_builtin = sub.add_parser("builtin", help="run a built-in scenario")
    p_builtin.add_argument("name")
    p_builtin.add_argument("args", nargs="*")
    add_common(p_builtin)

    sub.add_parser("list-builtins", help="list built-in scenario names")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if ns.command == "list-builtins":
        for usage in BUILTIN_USAGE.values():
            print(usage)
        return 0

    cap_text = os.environ.get(ENV_MAX_N)
    cap: Optional[int] = None
    if cap_text is not None and cap_text != "":
        try:
            cap = int(cap_text)
        except ValueError:
            print(f"error: {ENV_MAX_N} must be an integer, got {cap_text!r}", file=sys.stderr)
            return 2
        if cap < 1:
            print(f"error: {ENV_MAX_N} must be >= 1, got {cap}", file=sys.stderr)
            return 2

    for flag, value in (("--max-n", ns.max_n), ("--stability-window", ns.stability_window)):
        if value is not None and value < 1:
            print(f"error: {flag} must be >= 1, got {value}", file=sys.stderr)
            return 2

    try:
        if ns.command == "run":
            try:
                with open(ns.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as e:
                print(f"error: cannot read {ns.file!r}: {e}", file=sys.stderr)
                return 2
            scenario = parse_scenario(text)
        else:
            scenario = builtin_scenario(ns.name, ns.args)
        report = run(
            scenario,
            cli_max_n=ns.max_n,
            cli_stability_window=ns.stability_window,
            verify_oracle=ns.verify_oracle,
            max_n_cap=cap,
        )
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    print(render(report, ns.format))
    return 0 if report.all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
