"""Declarative pipelines: named operations chained through data slots.

A pipeline spec is an ordered list of steps wired by input/output keys; a
validated spec can itself be registered as an operation and nested inside
another pipeline, appearing as one composite activity in provenance.

Data slots hold a single value or a homogeneous list. Operations registered
in "item" mode are mapped over list slots (list results are concatenated);
"batch" operations receive slot values as-is.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from .exceptions import (
    ConfigError,
    DuplicateNameError,
    MissingInputError,
    StepFailureError,
)
from .provenance import OperationDescriptor, Tracer, VerbosityLevel


@dataclass
class PipelineStep:
    op_name: str
    params: dict = field(default_factory=dict)
    input_keys: list[str] = field(default_factory=list)
    output_keys: list[str] = field(default_factory=list)


@dataclass
class PipelineSpec:
    name: str
    steps: list[PipelineStep] = field(default_factory=list)
    pipeline_inputs: list[str] = field(default_factory=list)
    pipeline_outputs: list[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, obj: dict) -> "PipelineSpec":
        try:
            return cls(
                name=obj["name"],
                pipeline_inputs=list(obj["inputs"]),
                pipeline_outputs=list(obj["outputs"]),
                steps=[
                    PipelineStep(
                        op_name=step["op"],
                        params=dict(step.get("params", {})),
                        input_keys=list(step["inputs"]),
                        output_keys=list(step["outputs"]),
                    )
                    for step in obj["steps"]
                ],
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"invalid pipeline config: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": list(self.pipeline_inputs),
            "outputs": list(self.pipeline_outputs),
            "steps": [
                {
                    "op": s.op_name,
                    "params": s.params,
                    "inputs": s.input_keys,
                    "outputs": s.output_keys,
                }
                for s in self.steps
            ],
        }


@dataclass
class ValidationIssue:
    step_index: Optional[int]
    reason: str


@dataclass
class _Registered:
    factory: Callable
    n_inputs: int
    n_outputs: int
    mode: str  # "item" or "batch"
    nested_spec: Optional[PipelineSpec] = None


class OperationRegistry:
    """Name -> operation factory mapping used to resolve pipeline steps."""

    def __init__(self):
        self._ops: dict[str, _Registered] = {}

    def register(
        self,
        name: str,
        factory: Callable,
        n_inputs: int = 1,
        n_outputs: int = 1,
        mode: str = "item",
    ) -> None:
        if name in self._ops:
            raise DuplicateNameError(f"operation {name!r} already registered")
        if mode not in ("item", "batch"):
            raise ValueError(f"unknown mode {mode!r}")
        self._ops[name] = _Registered(factory, n_inputs, n_outputs, mode)

    def register_pipeline(self, spec: PipelineSpec) -> None:
        issues = validate_pipeline(spec, self)
        if issues:
            raise ConfigError(
                "invalid pipeline: " + "; ".join(i.reason for i in issues)
            )
        reg = _Registered(
            factory=None,
            n_inputs=len(spec.pipeline_inputs),
            n_outputs=len(spec.pipeline_outputs),
            mode="batch",
            nested_spec=spec,
        )
        if spec.name in self._ops:
            raise DuplicateNameError(f"operation {spec.name!r} already registered")
        self._ops[spec.name] = reg

    def get(self, name: str) -> Optional[_Registered]:
        return self._ops.get(name)

    def copy(self) -> "OperationRegistry":
        clone = OperationRegistry()
        clone._ops = dict(self._ops)
        return clone


_default_registry = OperationRegistry()


def default_registry() -> OperationRegistry:
    return _default_registry


def register_operation(
    name: str,
    factory: Callable,
    n_inputs: int = 1,
    n_outputs: int = 1,
    mode: str = "item",
    registry: Optional[OperationRegistry] = None,
) -> None:
    (registry or _default_registry).register(name, factory, n_inputs, n_outputs, mode)


def as_operation(
    spec: PipelineSpec, registry: Optional[OperationRegistry] = None
) -> str:
    """Register a pipeline as an operation under its own name."""
    (registry or _default_registry).register_pipeline(spec)
    return spec.name


def validate_pipeline(
    spec: PipelineSpec, registry: Optional[OperationRegistry] = None
) -> list[ValidationIssue]:
    registry = registry or _default_registry
    issues: list[ValidationIssue] = []
    available = set(spec.pipeline_inputs)
    produced = set(spec.pipeline_inputs)
    for index, step in enumerate(spec.steps):
        if not step.input_keys or not step.output_keys:
            issues.append(ValidationIssue(index, "step has empty key list"))
        registered = registry.get(step.op_name)
        if registered is None:
            issues.append(
                ValidationIssue(index, f"operation {step.op_name!r} not registered")
            )
        else:
            if len(step.input_keys) != registered.n_inputs:
                issues.append(
                    ValidationIssue(
                        index,
                        f"{step.op_name} expects {registered.n_inputs} inputs, "
                        f"step wires {len(step.input_keys)}",
                    )
                )
            if len(step.output_keys) != registered.n_outputs:
                issues.append(
                    ValidationIssue(
                        index,
                        f"{step.op_name} produces {registered.n_outputs} outputs, "
                        f"step wires {len(step.output_keys)}",
                    )
                )
        for key in step.input_keys:
            if key not in available:
                issues.append(
                    ValidationIssue(index, f"input key {key!r} not yet produced")
                )
        for key in step.output_keys:
            if key in produced:
                issues.append(ValidationIssue(index, f"key {key!r} produced twice"))
            produced.add(key)
            available.add(key)
    for key in spec.pipeline_outputs:
        if key not in available:
            issues.append(ValidationIssue(None, f"pipeline output {key!r} never produced"))
    issues.extend(_check_nesting_cycles(spec, registry))
    return issues


def _check_nesting_cycles(
    spec: PipelineSpec, registry: OperationRegistry, stack: Optional[tuple] = None
) -> list[ValidationIssue]:
    stack = stack or (spec.name,)
    issues = []
    for index, step in enumerate(spec.steps):
        registered = registry.get(step.op_name)
        if registered is None or registered.nested_spec is None:
            continue
        if step.op_name in stack:
            issues.append(
                ValidationIssue(index, f"pipeline nesting cycle through {step.op_name!r}")
            )
            continue
        issues.extend(
            _check_nesting_cycles(
                registered.nested_spec, registry, stack + (step.op_name,)
            )
        )
    return issues


def _item_ids(value) -> list[str]:
    """Provenance ids for a slot value; values without ids get a fresh one."""
    items = value if isinstance(value, list) else [value]
    ids = []
    for item in items:
        item_id = getattr(item, "id", None)
        ids.append(item_id if isinstance(item_id, str) else str(uuid.uuid4()))
    return ids


def _run_mapped(registered: _Registered, params: dict, args: list):
    """Execute an operation, mapping item-mode operations over list slots."""
    op = registered.factory(params)
    if registered.mode == "batch" or not any(isinstance(a, list) for a in args):
        return op(*args)

    list_lengths = {len(a) for a in args if isinstance(a, list)}
    if len(list_lengths) > 1:
        raise ValueError("item-mode operation got list inputs of different lengths")
    n = list_lengths.pop()
    per_item = [
        op(*[a[i] if isinstance(a, list) else a for a in args]) for i in range(n)
    ]
    if registered.n_outputs == 1:
        return _combine([r for r in per_item])
    combined = []
    for pos in range(registered.n_outputs):
        combined.append(_combine([r[pos] for r in per_item]))
    return tuple(combined)


def _combine(results: list):
    """Concatenate per-item list results, otherwise collect into a list."""
    if results and all(isinstance(r, list) for r in results):
        return [x for r in results for x in r]
    return results


def run_pipeline(
    spec: PipelineSpec,
    inputs: dict,
    tracer: Optional[Tracer] = None,
    registry: Optional[OperationRegistry] = None,
    _scope: Optional[str] = None,
) -> dict:
    """Execute a validated pipeline over the given input slots."""
    registry = registry or _default_registry
    issues = validate_pipeline(spec, registry)
    if issues:
        raise ConfigError("invalid pipeline: " + "; ".join(i.reason for i in issues))
    for key in spec.pipeline_inputs:
        if key not in inputs:
            raise MissingInputError(f"missing pipeline input {key!r}")

    env = dict(inputs)
    for index, step in enumerate(spec.steps):
        registered = registry.get(step.op_name)
        args = [env[k] for k in step.input_keys]
        try:
            if registered.nested_spec is not None:
                outputs = _run_nested(
                    registered.nested_spec, step, args, tracer, registry, _scope
                )
            else:
                result = _run_mapped(registered, step.params, args)
                outputs = result if registered.n_outputs > 1 else (result,)
                if tracer is not None:
                    source_ids = [i for a in args for i in _item_ids(a)]
                    output_ids = [i for o in outputs for i in _item_ids(o)]
                    tracer.record(
                        OperationDescriptor(name=step.op_name, config=step.params),
                        sources=source_ids,
                        outputs=output_ids or [str(uuid.uuid4())],
                        scope=_scope,
                    )
        except StepFailureError:
            raise
        except Exception as exc:
            raise StepFailureError(index, step.op_name, exc) from exc
        for key, value in zip(step.output_keys, outputs):
            env[key] = value
    return {key: env[key] for key in spec.pipeline_outputs}


def _run_nested(nested, step, args, tracer, registry, parent_scope):
    scope = None
    if tracer is not None and tracer.level != VerbosityLevel.NONE:
        scope = tracer.open_scope(
            OperationDescriptor(name=nested.name, config=step.params),
            parent=parent_scope,
        )
    nested_inputs = dict(zip(nested.pipeline_inputs, args))
    result = run_pipeline(nested, nested_inputs, tracer, registry, _scope=scope)
    return tuple(result[k] for k in nested.pipeline_outputs)
