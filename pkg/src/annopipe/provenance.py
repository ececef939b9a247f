"""Provenance tracing with configurable verbosity and PROV-JSON export.

A Tracer accumulates records of which operation produced which data items
from which inputs. Records carry an optional scope identifying the composite
activity (nested pipeline) they ran under. build_graph turns a trace into a
PROV-style graph: at `steps` verbosity nested pipelines collapse into a
single composite activity, at `full` verbosity composites additionally carry
their expanded sub-graph.
"""

from __future__ import annotations

import enum
import json
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import CycleDetectedError, SelfDerivationError


class VerbosityLevel(enum.IntEnum):
    NONE = 0
    STEPS = 1
    FULL = 2

    @classmethod
    def parse(cls, name: str) -> "VerbosityLevel":
        return cls[name.upper()]


@dataclass
class OperationDescriptor:
    """Identity and configuration of one operation invocation."""

    name: str
    config: dict = field(default_factory=dict)
    id: str = field(default_factory=lambda: str(uuid.uuid4()))

    def __post_init__(self):
        if not self.name:
            raise ValueError("operation name must be non-empty")


@dataclass
class ProvenanceRecord:
    """One produced data item, the operation that made it, and its inputs."""

    data_item_id: str
    op_id: str
    source_ids: list[str]


@dataclass
class _Record:
    op: OperationDescriptor
    sources: list[str]
    outputs: list[str]
    scope: Optional[str]


@dataclass
class _Scope:
    id: str
    op: OperationDescriptor
    parent: Optional[str]


class Tracer:
    """Append-only provenance store at a fixed verbosity level."""

    def __init__(self, level: VerbosityLevel = VerbosityLevel.FULL):
        self.level = VerbosityLevel(level)
        self._records: list[_Record] = []
        self._scopes: dict[str, _Scope] = {}

    def record(
        self,
        op: OperationDescriptor,
        sources: list[str],
        outputs: list[str],
        scope: Optional[str] = None,
    ) -> None:
        if not outputs:
            raise ValueError("record requires at least one output")
        for out in outputs:
            if out in sources:
                raise SelfDerivationError(f"{out} listed as both source and output")
        if self.level == VerbosityLevel.NONE:
            return
        self._records.append(_Record(op, list(sources), list(outputs), scope))

    def open_scope(
        self, op: OperationDescriptor, parent: Optional[str] = None
    ) -> str:
        """Declare a composite activity (nested pipeline); returns its scope id."""
        scope_id = str(uuid.uuid4())
        self._scopes[scope_id] = _Scope(scope_id, op, parent)
        return scope_id

    @property
    def records(self) -> list[ProvenanceRecord]:
        """Flat per-output view of the trace."""
        return [
            ProvenanceRecord(out, rec.op.id, list(rec.sources))
            for rec in self._records
            for out in rec.outputs
        ]

    def merge(self, other: "Tracer") -> None:
        """Absorb another tracer's records (per-worker traces)."""
        self._records.extend(other._records)
        self._scopes.update(other._scopes)


@dataclass
class Activity:
    id: str
    name: str
    config: dict = field(default_factory=dict)
    composite: bool = False


@dataclass
class ProvGraph:
    entities: set = field(default_factory=set)
    activities: dict = field(default_factory=dict)
    used: list = field(default_factory=list)
    was_generated_by: list = field(default_factory=list)
    was_derived_from: list = field(default_factory=list)
    was_informed_by: list = field(default_factory=list)
    sub_graphs: dict = field(default_factory=dict)

    def all_entities(self) -> set:
        """Entities of this graph and every nested sub-graph."""
        out = set(self.entities)
        for sub in self.sub_graphs.values():
            out |= sub.all_entities()
        return out

    def check_acyclic(self) -> None:
        """Topologically sort entities and activities; raise on cycle."""
        nodes = set(self.entities) | set(self.activities)
        succ = {n: [] for n in nodes}
        indeg = {n: 0 for n in nodes}
        for act, ent in self.used:
            succ[ent].append(act)
            indeg[act] += 1
        for ent, act in self.was_generated_by:
            succ[act].append(ent)
            indeg[ent] += 1
        queue = [n for n in nodes if indeg[n] == 0]
        seen = 0
        while queue:
            node = queue.pop()
            seen += 1
            for nxt in succ[node]:
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    queue.append(nxt)
        if seen != len(nodes):
            raise CycleDetectedError("provenance graph contains a cycle")
        for sub in self.sub_graphs.values():
            sub.check_acyclic()


def _descendant_scopes(tracer: Tracer, root: str) -> set:
    out = {root}
    changed = True
    while changed:
        changed = False
        for scope in tracer._scopes.values():
            if scope.parent in out and scope.id not in out:
                out.add(scope.id)
                changed = True
    return out


def _dedupe(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _add_activity_edges(graph: ProvGraph, act_id: str, sources, outputs) -> None:
    graph.entities.update(sources)
    graph.entities.update(outputs)
    for src in sources:
        graph.used.append((act_id, src))
    for out in outputs:
        graph.was_generated_by.append((out, act_id))
        for src in sources:
            graph.was_derived_from.append((out, src))


def _build_level(tracer: Tracer, scope_id: Optional[str]) -> ProvGraph:
    graph = ProvGraph()
    direct = [rec for rec in tracer._records if rec.scope == scope_id]
    children = [s for s in tracer._scopes.values() if s.parent == scope_id]

    positions = {id(rec): i for i, rec in enumerate(tracer._records)}
    events = []  # (position in trace, kind, payload) to keep trace order
    for rec in direct:
        events.append((positions[id(rec)], "record", rec))
    for child in children:
        member_scopes = _descendant_scopes(tracer, child.id)
        group = [r for r in tracer._records if r.scope in member_scopes]
        if not group:
            continue
        first = min(positions[id(r)] for r in group)
        events.append((first, "composite", (child, group)))
    events.sort(key=lambda e: e[0])

    for _, kind, payload in events:
        if kind == "record":
            rec = payload
            act_id = str(uuid.uuid4())
            graph.activities[act_id] = Activity(act_id, rec.op.name, dict(rec.op.config))
            _add_activity_edges(graph, act_id, _dedupe(rec.sources), _dedupe(rec.outputs))
        else:
            child, group = payload
            group_set = set(id(r) for r in group)
            generated = set()
            consumed = set()
            for rec in group:
                generated.update(rec.outputs)
                consumed.update(rec.sources)
            referenced_outside = set()
            for rec in tracer._records:
                if id(rec) not in group_set:
                    referenced_outside.update(rec.sources)
                    referenced_outside.update(rec.outputs)
            ext_sources = _dedupe(
                s for rec in group for s in rec.sources if s not in generated
            )
            exposed = _dedupe(
                o
                for rec in group
                for o in rec.outputs
                if o not in consumed or o in referenced_outside
            )
            act_id = child.id
            graph.activities[act_id] = Activity(
                act_id, child.op.name, dict(child.op.config), composite=True
            )
            _add_activity_edges(graph, act_id, ext_sources, exposed)
            if tracer.level >= VerbosityLevel.FULL:
                graph.sub_graphs[act_id] = _build_level(tracer, child.id)

    generator = {ent: act for ent, act in graph.was_generated_by}
    informed = []
    for act_id in graph.activities:
        informants = _dedupe(
            generator[ent]
            for a, ent in graph.used
            if a == act_id and ent in generator and generator[ent] != act_id
        )
        informed.extend((act_id, informant) for informant in informants)
    graph.was_informed_by = informed
    return graph


def build_graph(tracer: Tracer) -> ProvGraph:
    """Build the PROV graph for a trace at the tracer's verbosity level."""
    if tracer.level == VerbosityLevel.NONE:
        return ProvGraph()
    graph = _build_level(tracer, None)
    graph.check_acyclic()
    return graph


def _graph_to_dict(graph: ProvGraph) -> dict:
    doc = {
        "entity": {ent: {} for ent in sorted(graph.entities)},
        "activity": {},
        "used": {},
        "wasGeneratedBy": {},
        "wasDerivedFrom": {},
        "wasInformedBy": {},
    }
    for act in graph.activities.values():
        rec = {"prov:label": act.name}
        if act.config:
            rec["config"] = act.config
        if act.composite:
            rec["composite"] = True
        if act.id in graph.sub_graphs:
            rec["members"] = _graph_to_dict(graph.sub_graphs[act.id])
        doc["activity"][act.id] = rec
    for i, (act, ent) in enumerate(graph.used, 1):
        doc["used"][f"u{i}"] = {"prov:activity": act, "prov:entity": ent}
    for i, (ent, act) in enumerate(graph.was_generated_by, 1):
        doc["wasGeneratedBy"][f"g{i}"] = {"prov:entity": ent, "prov:activity": act}
    for i, (gen, src) in enumerate(graph.was_derived_from, 1):
        doc["wasDerivedFrom"][f"d{i}"] = {
            "prov:generatedEntity": gen,
            "prov:usedEntity": src,
        }
    for i, (informed, informant) in enumerate(graph.was_informed_by, 1):
        doc["wasInformedBy"][f"i{i}"] = {
            "prov:informed": informed,
            "prov:informant": informant,
        }
    return doc


def _graph_from_dict(doc: dict) -> ProvGraph:
    graph = ProvGraph()
    graph.entities = set(doc.get("entity", {}))
    for act_id, rec in doc.get("activity", {}).items():
        graph.activities[act_id] = Activity(
            act_id,
            rec.get("prov:label", ""),
            dict(rec.get("config", {})),
            composite=bool(rec.get("composite")),
        )
        if "members" in rec:
            graph.sub_graphs[act_id] = _graph_from_dict(rec["members"])
    for rec in doc.get("used", {}).values():
        graph.used.append((rec["prov:activity"], rec["prov:entity"]))
    for rec in doc.get("wasGeneratedBy", {}).values():
        graph.was_generated_by.append((rec["prov:entity"], rec["prov:activity"]))
    for rec in doc.get("wasDerivedFrom", {}).values():
        graph.was_derived_from.append(
            (rec["prov:generatedEntity"], rec["prov:usedEntity"])
        )
    for rec in doc.get("wasInformedBy", {}).values():
        graph.was_informed_by.append((rec["prov:informed"], rec["prov:informant"]))
    return graph


def _graph_to_dot(graph: ProvGraph, lines=None, prefix: str = "") -> str:
    top = lines is None
    if top:
        lines = ["digraph provenance {"]
    for ent in sorted(graph.entities):
        lines.append(f'  "{ent}" [shape=ellipse];')
    for act in graph.activities.values():
        lines.append(f'  "{act.id}" [shape=box, label="{act.name}"];')
    for act, ent in graph.used:
        lines.append(f'  "{act}" -> "{ent}" [label="used"];')
    for ent, act in graph.was_generated_by:
        lines.append(f'  "{ent}" -> "{act}" [label="wasGeneratedBy"];')
    for gen, src in graph.was_derived_from:
        lines.append(f'  "{gen}" -> "{src}" [label="wasDerivedFrom"];')
    for informed, informant in graph.was_informed_by:
        lines.append(f'  "{informed}" -> "{informant}" [label="wasInformedBy"];')
    for sub in graph.sub_graphs.values():
        _graph_to_dot(sub, lines)
    if top:
        lines.append("}")
        return "\n".join(lines) + "\n"
    return ""


def export_prov(graph: ProvGraph, format: str = "prov-json") -> str:
    if format == "prov-json":
        return json.dumps(_graph_to_dict(graph), indent=2, ensure_ascii=False) + "\n"
    if format == "dot":
        return _graph_to_dot(graph)
    raise ValueError(f"unknown provenance export format {format!r}")


def parse_prov_json(text: str) -> ProvGraph:
    """Inverse of export_prov(graph, 'prov-json')."""
    return _graph_from_dict(json.loads(text))


def begin_trace(level: VerbosityLevel = VerbosityLevel.FULL) -> Tracer:
    return Tracer(level)
