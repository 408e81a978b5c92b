"""The code graph: classes, methods, and test blocks as nodes, ownership and
invocation edges, plus the scope query feeding prompt construction and a
versioned JSON round-trip.

Node keys: class -> FQN; method -> "FQN#name(paramTypes)"; block ->
"path::ordinal". A built graph is immutable in practice and safe to share
across readers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .analyzer import (
    BlockDiagnostic,
    ClassDecl,
    CorpusConventions,
    ImportDecl,
    InvocationRef,
    MethodSig,
    SourceFile,
    TestCodeBlock,
    extract_invocations,
    extract_test_blocks,
    imported_classes,
    resolve_invocation,
)
from .errors import DuplicateClassError, GraphFormatError, NotFoundError, TcgenError

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    kind: str  # class | method | test_block
    payload: object  # ClassDecl | MethodSig | TestCodeBlock


@dataclass(frozen=True)
class GraphEdge:
    src: str
    dst: str
    kind: str  # owns | invokes


@dataclass
class FileSummary:
    package_name: str
    imports: list[ImportDecl]
    classes: list[str]  # FQNs in declaration order


@dataclass
class CodeGraph:
    nodes: dict[str, GraphNode] = field(default_factory=dict)
    edges: list[GraphEdge] = field(default_factory=list)
    file_index: dict[str, FileSummary] = field(default_factory=dict)
    conventions: CorpusConventions = field(default_factory=CorpusConventions)
    diagnostics: list[BlockDiagnostic] = field(default_factory=list, compare=False)

    def class_decl(self, fqn: str) -> ClassDecl | None:
        node = self.nodes.get(fqn)
        if node is not None and node.kind == "class":
            return node.payload
        return None

    def classes_in_package(self, package: str) -> list[str]:
        return sorted(
            n.node_id
            for n in self.nodes.values()
            if n.kind == "class" and n.node_id.rsplit(".", 1)[0] == package
        )

    def block(self, block_id: str) -> TestCodeBlock:
        node = self.nodes.get(block_id)
        if node is None or node.kind != "test_block":
            raise NotFoundError(f"unknown test block: {block_id}")
        return node.payload

    def blocks(self) -> list[TestCodeBlock]:
        return [
            n.payload
            for n in sorted(self.nodes.values(), key=lambda n: n.node_id)
            if n.kind == "test_block"
        ]

    def counts(self) -> dict[str, int]:
        by_kind: dict[str, int] = {}
        for n in self.nodes.values():
            by_kind[n.kind] = by_kind.get(n.kind, 0) + 1
        by_kind["edges"] = len(self.edges)
        return by_kind


def build_graph(
    files: Iterable[SourceFile],
    conventions: CorpusConventions = CorpusConventions(),
) -> CodeGraph:
    """Assemble the graph from parsed files; deterministic for a given corpus.

    Duplicate fully-qualified class names (including across repository roots)
    are fatal, with both declaring paths named. Unresolved invocations create
    no edge but stay in the owning block's payload.
    """
    ordered = sorted(files, key=lambda f: f.path)
    graph = CodeGraph(conventions=conventions)
    class_paths: dict[str, str] = {}
    edge_set: set[GraphEdge] = set()

    for sf in ordered:
        if sf.path in graph.file_index:
            raise TcgenError(f"file path occurs twice across roots: {sf.path}")
        graph.file_index[sf.path] = FileSummary(
            package_name=sf.package_name,
            imports=list(sf.imports),
            classes=[c.fully_qualified_name for c in sf.classes],
        )
        for cls in sf.classes:
            fqn = cls.fully_qualified_name
            if fqn in class_paths:
                raise DuplicateClassError(
                    f"class {fqn} declared in both {class_paths[fqn]} and {sf.path}"
                )
            class_paths[fqn] = sf.path
            graph.nodes[fqn] = GraphNode(fqn, "class", cls)
            for m in cls.methods:
                if m.key in graph.nodes:
                    log.warning("duplicate method node ignored: %s", m.key)
                    continue
                graph.nodes[m.key] = GraphNode(m.key, "method", m)
                edge_set.add(GraphEdge(fqn, m.key, "owns"))

    # invocation resolution needs the full class map, so edges come second
    for sf in ordered:
        scan = extract_test_blocks(sf, conventions)
        graph.diagnostics.extend(scan.malformed)
        for block in scan.blocks:
            resolved = frozenset(
                resolve_invocation(ref, block.owner_class, sf, graph)
                for ref in block.invocations
            )
            stored = replace(block, invocations=resolved)
            graph.nodes[block.block_id] = GraphNode(block.block_id, "test_block", stored)
            if block.owner_method in graph.nodes:
                edge_set.add(GraphEdge(block.owner_method, block.block_id, "owns"))
            for target in _invoked_method_keys(graph, resolved):
                edge_set.add(GraphEdge(block.block_id, target, "invokes"))
        for cls in sf.classes:
            for m in cls.methods:
                body = sf.method_body(m.key)
                if not body:
                    continue
                refs = frozenset(
                    resolve_invocation(ref, cls.fully_qualified_name, sf, graph)
                    for ref in extract_invocations(body, exclude=conventions.delimiter_names)
                )
                for target in _invoked_method_keys(graph, refs):
                    if target != m.key:  # a recursive call would be a self-loop
                        edge_set.add(GraphEdge(m.key, target, "invokes"))

    graph.edges = sorted(edge_set, key=lambda e: (e.kind, e.src, e.dst))
    return graph


def _invoked_method_keys(graph: CodeGraph, refs: frozenset[InvocationRef]) -> list[str]:
    """Method node keys for each resolved ref; all overloads of the name."""
    keys: list[str] = []
    for ref in sorted(refs, key=lambda r: (r.simple_name, r.receiver or "")):
        if ref.resolved_fqn is None:
            continue
        cls_fqn, _, name = ref.resolved_fqn.partition("#")
        decl = graph.class_decl(cls_fqn)
        if decl is None:
            continue
        keys.extend(m.key for m in decl.methods if m.name == name and m.key in graph.nodes)
    return keys


def methods_in_scope(block_id: str, graph: CodeGraph) -> list[tuple[str, list[MethodSig]]]:
    """Classes and methods visible to a block, in prompt order.

    First the containing class with every method it declares, then each
    imported class known to the graph (import order, wildcard imports
    expanded by FQN) restricted to its public surface; protected methods of
    other classes are treated as private and left out.
    """
    block = graph.block(block_id)
    path = block_id.rsplit("::", 1)[0]
    summary = graph.file_index.get(path)
    if summary is None:
        raise NotFoundError(f"no file summary for {path}")
    scope: list[tuple[str, list[MethodSig]]] = []
    owner = graph.class_decl(block.owner_class)
    scope.append((block.owner_class, list(owner.methods) if owner else []))
    for cls in imported_classes(summary, graph):
        public = [m for m in cls.methods if _public_surface(m, cls)]
        scope.append((cls.fully_qualified_name, public))
    return scope


def _public_surface(sig: MethodSig, owner: ClassDecl) -> bool:
    if "public" in sig.modifiers:
        return True
    if owner.kind == "interface":
        return not ({"private", "protected"} & sig.modifiers)
    return False


def scope_for_file(path: str, graph: CodeGraph) -> list[tuple[str, list[MethodSig]]]:
    """Scope for a new step intended to live in `path`: the file's first
    top-level class plays the containing-class role."""
    summary = graph.file_index.get(path)
    if summary is None:
        raise NotFoundError(f"unknown file: {path}")
    scope: list[tuple[str, list[MethodSig]]] = []
    if summary.classes:
        anchor = graph.class_decl(summary.classes[0])
        scope.append((summary.classes[0], list(anchor.methods) if anchor else []))
    for cls in imported_classes(summary, graph):
        scope.append(
            (cls.fully_qualified_name, [m for m in cls.methods if _public_surface(m, cls)])
        )
    if not scope:
        raise NotFoundError(f"file declares no classes: {path}")
    return scope


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _method_to_dict(m: MethodSig) -> dict:
    return {
        "name": m.name,
        "return_type": m.return_type,
        "params": [[t, n] for t, n in m.params],
        "modifiers": sorted(m.modifiers),
        "owner": m.owner,
        "doc": m.doc,
    }


def _method_from_dict(d: dict) -> MethodSig:
    return MethodSig(
        name=d["name"],
        return_type=d["return_type"],
        params=tuple((t, n) for t, n in d["params"]),
        modifiers=frozenset(d["modifiers"]),
        owner=d["owner"],
        doc=d.get("doc"),
    )


def _ref_to_dict(r: InvocationRef) -> dict:
    return {"simple_name": r.simple_name, "receiver": r.receiver, "resolved_fqn": r.resolved_fqn}


def _block_to_dict(b: TestCodeBlock) -> dict:
    refs = sorted(b.invocations, key=lambda r: (r.simple_name, r.receiver or ""))
    return {
        "block_id": b.block_id,
        "tcbd": b.tcbd,
        "body": b.body,
        "owner_method": b.owner_method,
        "owner_class": b.owner_class,
        "invocations": [_ref_to_dict(r) for r in refs],
        "line_count": b.line_count,
    }


def _block_from_dict(d: dict) -> TestCodeBlock:
    return TestCodeBlock(
        block_id=d["block_id"],
        tcbd=d["tcbd"],
        body=d["body"],
        owner_method=d["owner_method"],
        owner_class=d["owner_class"],
        invocations=frozenset(
            InvocationRef(r["simple_name"], r.get("receiver"), r.get("resolved_fqn"))
            for r in d["invocations"]
        ),
        line_count=d["line_count"],
    )


def save_graph(graph: CodeGraph, path: str | Path) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "delimiters": {"begin": graph.conventions.begin, "end": graph.conventions.end},
        "nodes": [],
        "edges": [
            {"from": e.src, "to": e.dst, "kind": e.kind}
            for e in sorted(graph.edges, key=lambda e: (e.kind, e.src, e.dst))
        ],
        "files": {
            p: {
                "package": fs.package_name,
                "imports": [
                    {"qualified_name": i.qualified_name, "static": i.is_static, "wildcard": i.is_wildcard}
                    for i in fs.imports
                ],
                "classes": fs.classes,
            }
            for p, fs in sorted(graph.file_index.items())
        },
    }
    for node in sorted(graph.nodes.values(), key=lambda n: n.node_id):
        if node.kind == "class":
            cls: ClassDecl = node.payload
            payload = {
                "fqn": cls.fully_qualified_name,
                "kind": cls.kind,
                "doc": cls.doc,
                "methods": [_method_to_dict(m) for m in cls.methods],
            }
        elif node.kind == "method":
            payload = {"owner": node.payload.owner, "key": node.node_id}
        else:
            payload = _block_to_dict(node.payload)
        doc["nodes"].append({"id": node.node_id, "kind": node.kind, "payload": payload})
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> CodeGraph:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise NotFoundError(f"graph file not found: {path}")
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise GraphFormatError(f"corrupt graph file {path}: {exc}")
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise GraphFormatError(f"corrupt graph file {path}: missing schema_version")
    _check_version(doc["schema_version"], path)
    try:
        conv = CorpusConventions(doc["delimiters"]["begin"], doc["delimiters"]["end"])
        graph = CodeGraph(conventions=conv)
        class_nodes = {}
        for nd in doc["nodes"]:
            if nd["kind"] == "class":
                p = nd["payload"]
                cls = ClassDecl(
                    fully_qualified_name=p["fqn"],
                    kind=p["kind"],
                    doc=p.get("doc"),
                    methods=[_method_from_dict(m) for m in p["methods"]],
                )
                class_nodes[nd["id"]] = cls
                graph.nodes[nd["id"]] = GraphNode(nd["id"], "class", cls)
        for nd in doc["nodes"]:
            if nd["kind"] == "method":
                owner = class_nodes.get(nd["payload"]["owner"])
                sig = None
                if owner is not None:
                    sig = next((m for m in owner.methods if m.key == nd["id"]), None)
                if sig is None:
                    raise GraphFormatError(f"method node without declaring class: {nd['id']}")
                graph.nodes[nd["id"]] = GraphNode(nd["id"], "method", sig)
            elif nd["kind"] == "test_block":
                block = _block_from_dict(nd["payload"])
                graph.nodes[nd["id"]] = GraphNode(nd["id"], "test_block", block)
        graph.edges = sorted(
            (GraphEdge(e["from"], e["to"], e["kind"]) for e in doc["edges"]),
            key=lambda e: (e.kind, e.src, e.dst),
        )
        for p, f in doc["files"].items():
            graph.file_index[p] = FileSummary(
                package_name=f["package"],
                imports=[
                    ImportDecl(i["qualified_name"], i["static"], i["wildcard"])
                    for i in f["imports"]
                ],
                classes=list(f["classes"]),
            )
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"corrupt graph file {path}: {exc!r}")
    return graph


def _check_version(version: object, path: str | Path) -> None:
    try:
        major = int(str(version).split(".")[0])
    except ValueError:
        raise GraphFormatError(f"bad schema_version {version!r} in {path}")
    supported = int(SCHEMA_VERSION.split(".")[0])
    if major > supported:
        raise GraphFormatError(
            f"{path} has schema_version {version}, newer than supported {SCHEMA_VERSION}"
        )
