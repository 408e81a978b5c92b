"""Static analysis of Java sources into structural facts.

Extracts packages, imports, class/interface/enum declarations, method
signatures, and delimiter-framed test code blocks, plus the method
invocations inside arbitrary Java-like text. Parsing is a tolerant lexer
(lexer.py) feeding a brace-tracking structural pass over the token stream;
it deliberately stops short of a full Java grammar. Generics, lambdas, and
anonymous classes are lexed and brace-balanced but not modeled; comments and
string literals never contribute structure.

Per-file operations are pure functions of the file bytes; repository scans
merge results in lexicographic path order.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import NotFoundError, ParseError
from .lexer import Token, lex, match_brackets, structural

if TYPE_CHECKING:  # pragma: no cover
    from .graph import CodeGraph

log = logging.getLogger(__name__)

MODIFIER_KEYWORDS = frozenset(
    "public protected private static final abstract synchronized native "
    "strictfp default transient volatile".split()
)

_WS = re.compile(r"\s+")


def _collapse(text: str) -> str:
    """Normalize a source span to single spaces (types stay 'as written')."""
    return _WS.sub(" ", text).strip()


@dataclass(frozen=True)
class CorpusConventions:
    """Names of the globally available block delimiter methods."""

    begin: str = "TestBegin"
    end: str = "TestEnd"

    @property
    def delimiter_names(self) -> frozenset[str]:
        return frozenset((self.begin, self.end))


@dataclass(frozen=True)
class ImportDecl:
    qualified_name: str
    is_static: bool = False
    is_wildcard: bool = False

    @property
    def simple_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class MethodSig:
    """A method declaration; `render()` is the canonical signature string."""

    name: str
    return_type: str
    params: tuple[tuple[str, str], ...]  # (type as written, parameter name)
    modifiers: frozenset[str]
    owner: str  # fully-qualified declaring class
    doc: str | None = None

    def render(self) -> str:
        prefix = "static " if "static" in self.modifiers else ""
        args = ", ".join(f"{t} {n}" for t, n in self.params)
        return f"{prefix}{self.return_type} {self.name}({args})"

    @property
    def key(self) -> str:
        return f"{self.owner}#{self.name}({','.join(t for t, _ in self.params)})"


@dataclass
class ClassDecl:
    fully_qualified_name: str
    kind: str  # class | interface | enum
    methods: list[MethodSig] = field(default_factory=list)
    doc: str | None = None

    @property
    def simple_name(self) -> str:
        return self.fully_qualified_name.rsplit(".", 1)[-1]


@dataclass
class SourceFile:
    path: str
    package_name: str
    imports: list[ImportDecl]
    classes: list[ClassDecl]
    raw_text: str = field(repr=False)
    # method key -> (start, end) offsets of the body interior in raw_text,
    # in declaration order; parser-internal, used for block extraction and
    # method-level invocation edges.
    method_spans: dict[str, tuple[int, int]] = field(default_factory=dict, repr=False)

    def method_body(self, key: str) -> str:
        lo, hi = self.method_spans[key]
        return self.raw_text[lo:hi]


@dataclass(frozen=True)
class InvocationRef:
    simple_name: str
    receiver: str | None = None  # receiver chain as written, e.g. "a.getInstance()"
    resolved_fqn: str | None = None  # "com.x.Cls#method" when resolution succeeded


@dataclass(frozen=True)
class TestCodeBlock:
    block_id: str  # "<path>::<ordinal>"
    tcbd: str  # decoded first string argument of the opening delimiter call
    body: str  # verbatim source from the opening call through "End();"
    owner_method: str
    owner_class: str
    invocations: frozenset[InvocationRef]
    line_count: int


@dataclass(frozen=True)
class BlockDiagnostic:
    path: str
    owner_method: str
    line: int
    reason: str


@dataclass
class BlockScan:
    blocks: list[TestCodeBlock]
    malformed: list[BlockDiagnostic] = field(default_factory=list)


@dataclass(frozen=True)
class SkippedFile:
    path: str
    reason: str


@dataclass
class ScanResult:
    files: list[SourceFile]
    skipped: list[SkippedFile] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Structural parsing
# ---------------------------------------------------------------------------


def _check_braces(tokens: list[Token], path: str) -> None:
    stack: list[Token] = []
    for t in tokens:
        if t.kind != "punct":
            continue
        if t.value == "{":
            stack.append(t)
        elif t.value == "}":
            if not stack:
                raise ParseError("unmatched '}'", path, t.line)
            stack.pop()
    if stack:
        raise ParseError("unclosed '{'", path, stack[-1].line)


def _doc_text(raw: str) -> str | None:
    """Strip block-comment delimiters and per-line asterisks."""
    if not raw.startswith("/*"):
        return None
    inner = raw[2:]
    if inner.startswith("*"):
        inner = inner[1:]
    if inner.endswith("*/"):
        inner = inner[:-2]
    lines = [re.sub(r"^\s*\*\s?", "", ln) for ln in inner.splitlines()]
    text = "\n".join(lines).strip()
    return text or None


class _FileParser:
    """Single pass over the token stream of one file."""

    def __init__(self, text: str, path: str):
        self.text = text
        self.path = path
        self.tokens = lex(text)
        _check_braces(self.tokens, path)
        self.pairs = match_brackets(self.tokens)
        self.package = ""
        self.imports: list[ImportDecl] = []
        self.classes: list[ClassDecl] = []
        self.method_spans: dict[str, tuple[int, int]] = {}

    # -- small cursor helpers ------------------------------------------------

    def _at(self, i: int) -> Token | None:
        return self.tokens[i] if 0 <= i < len(self.tokens) else None

    def _is_punct(self, i: int, value: str) -> bool:
        t = self._at(i)
        return t is not None and t.kind == "punct" and t.value == value

    def _is_kw(self, i: int, *values: str) -> bool:
        t = self._at(i)
        return t is not None and t.kind == "keyword" and t.value in values

    def _skip_annotation(self, i: int) -> int:
        """i points at '@'; returns index past the annotation."""
        i += 1
        t = self._at(i)
        if t is not None and t.kind in ("ident", "keyword"):
            i += 1
            while self._is_punct(i, ".") and self._at(i + 1) and self._at(i + 1).kind == "ident":
                i += 2
        if self._is_punct(i, "("):
            i = self.pairs.get(i, i) + 1
        return i

    def _skip_generics(self, i: int) -> int:
        """i points at '<'; returns index past the matching '>'."""
        depth = 0
        while i < len(self.tokens):
            if self._is_punct(i, "<"):
                depth += 1
            elif self._is_punct(i, ">"):
                depth -= 1
                if depth == 0:
                    return i + 1
            i += 1
        return i

    # -- top level -----------------------------------------------------------

    def parse(self) -> SourceFile:
        i = 0
        pending_doc: str | None = None
        while i < len(self.tokens):
            t = self.tokens[i]
            if t.kind == "comment":
                pending_doc = _doc_text(t.value) or pending_doc
                i += 1
            elif t.kind == "punct" and t.value == "@":
                i = self._skip_annotation(i)
            elif self._is_kw(i, "package"):
                i = self._parse_package(i + 1)
                pending_doc = None
            elif self._is_kw(i, "import"):
                i = self._parse_import(i + 1)
                pending_doc = None
            elif t.kind == "keyword" and t.value in MODIFIER_KEYWORDS:
                i += 1
            elif self._is_kw(i, "class", "interface", "enum"):
                i = self._parse_type(i, self.package, pending_doc)
                pending_doc = None
            else:
                pending_doc = None
                i += 1
        return SourceFile(
            path=self.path,
            package_name=self.package,
            imports=self.imports,
            classes=self.classes,
            raw_text=self.text,
            method_spans=self.method_spans,
        )

    def _read_dotted(self, i: int) -> tuple[str, int]:
        parts: list[str] = []
        while True:
            t = self._at(i)
            if t is not None and t.kind in ("ident", "keyword") and t.value != "import":
                parts.append(t.value)
                i += 1
                if self._is_punct(i, "."):
                    i += 1
                    continue
            break
        return ".".join(parts), i

    def _parse_package(self, i: int) -> int:
        name, i = self._read_dotted(i)
        if not self.package:
            self.package = name
        while i < len(self.tokens) and not self._is_punct(i, ";"):
            i += 1
        return i + 1

    def _parse_import(self, i: int) -> int:
        is_static = False
        if self._is_kw(i, "static"):
            is_static = True
            i += 1
        parts: list[str] = []
        is_wildcard = False
        while True:
            t = self._at(i)
            if t is not None and t.kind == "ident":
                parts.append(t.value)
                i += 1
            elif self._is_punct(i, "*"):
                is_wildcard = True
                i += 1
            if self._is_punct(i, "."):
                i += 1
                continue
            break
        while i < len(self.tokens) and not self._is_punct(i, ";"):
            i += 1
        if parts:
            self.imports.append(ImportDecl(".".join(parts), is_static, is_wildcard))
        return i + 1

    # -- type declarations ----------------------------------------------------

    def _parse_type(self, i: int, prefix: str, doc: str | None) -> int:
        kind = self.tokens[i].value
        i += 1
        name_tok = self._at(i)
        if name_tok is None or name_tok.kind != "ident":
            return i  # tolerate junk; nothing to record
        fqn = f"{prefix}.{name_tok.value}" if prefix else name_tok.value
        i += 1
        while i < len(self.tokens) and not self._is_punct(i, "{"):
            if self._is_punct(i, "<"):
                i = self._skip_generics(i)
            else:
                i += 1
        if i >= len(self.tokens):
            return i
        body_close = self.pairs.get(i)
        if body_close is None:
            return i + 1
        body_open = i
        decl = ClassDecl(fully_qualified_name=fqn, kind=kind, doc=doc)
        self.classes.append(decl)

        member_start = body_open + 1
        if kind == "enum":
            member_start = self._skip_enum_constants(body_open + 1, body_close)
        self._parse_members(member_start, body_close, decl)
        return body_close + 1

    def _skip_enum_constants(self, i: int, hi: int) -> int:
        """Enum bodies open with a constant list ending at ';' (or the end)."""
        while i < hi:
            if self._is_punct(i, ";"):
                return i + 1
            if self._is_punct(i, "(") or self._is_punct(i, "{"):
                i = self.pairs.get(i, i) + 1
                continue
            i += 1
        return hi

    def _parse_members(self, lo: int, hi: int, decl: ClassDecl) -> None:
        i = lo
        pending_doc: str | None = None
        while i < hi:
            t = self.tokens[i]
            if t.kind == "comment":
                pending_doc = _doc_text(t.value) or pending_doc
                i += 1
                continue
            if t.kind == "punct" and t.value == "@":
                i = self._skip_annotation(i)
                continue
            if t.kind == "punct" and t.value == ";":
                pending_doc = None
                i += 1
                continue
            i = self._parse_member(i, hi, decl, pending_doc)
            pending_doc = None

    def _parse_member(self, i: int, hi: int, decl: ClassDecl, doc: str | None) -> int:
        """Parse one member starting at i; returns the index past it."""
        buf: list[Token] = []
        seen_eq = False
        paren_open = -1
        while i < hi:
            t = self.tokens[i]
            if t.kind == "comment":
                i += 1
                continue
            if t.kind == "punct" and t.value == "@":
                i = self._skip_annotation(i)
                continue
            if t.kind == "keyword" and t.value in ("class", "interface", "enum") and not seen_eq:
                return self._parse_type(i, decl.fully_qualified_name, doc)
            if t.kind == "punct" and t.value == "<" and not seen_eq and paren_open == -1:
                j = self._skip_generics(i)
                buf.extend(self.tokens[i:j])
                i = j
                continue
            if t.kind == "punct" and t.value == "(":
                close = self.pairs.get(i)
                if close is None:
                    return hi
                if seen_eq:
                    i = close + 1
                    continue
                if paren_open == -1:
                    paren_open = len(buf)
                buf.extend(self.tokens[i : close + 1])
                i = close + 1
                continue
            if t.kind == "punct" and t.value == "=":
                seen_eq = True
                i += 1
                continue
            if t.kind == "punct" and t.value == "{":
                close = self.pairs.get(i)
                if close is None:
                    return hi
                if seen_eq:  # field initializer such as `int[] a = {1, 2};`
                    i = close + 1
                    continue
                if paren_open != -1:
                    self._emit_method(buf, decl, doc, body=(self.tokens[i].end, self.tokens[close].start))
                return close + 1
            if t.kind == "punct" and t.value == ";":
                if paren_open != -1 and not seen_eq:
                    self._emit_method(buf, decl, doc, body=None)
                return i + 1
            buf.append(t)
            i += 1
        return hi

    def _emit_method(
        self,
        buf: list[Token],
        decl: ClassDecl,
        doc: str | None,
        body: tuple[int, int] | None,
    ) -> None:
        mods: set[str] = set()
        k = 0
        while k < len(buf) and buf[k].kind == "keyword" and buf[k].value in MODIFIER_KEYWORDS:
            mods.add(buf[k].value)
            k += 1
        if k < len(buf) and buf[k].kind == "punct" and buf[k].value == "<":
            depth = 0
            while k < len(buf):
                if buf[k].kind == "punct" and buf[k].value == "<":
                    depth += 1
                elif buf[k].kind == "punct" and buf[k].value == ">":
                    depth -= 1
                    if depth == 0:
                        k += 1
                        break
                k += 1
        p = next(
            (j for j in range(k, len(buf)) if buf[j].kind == "punct" and buf[j].value == "("),
            -1,
        )
        if p <= k or buf[p - 1].kind != "ident":
            return  # not a method shape we model
        name = buf[p - 1].value
        ret_toks = buf[k : p - 1]
        if not ret_toks:
            return  # constructor: callable only via `new`, which the metric excludes
        return_type = _collapse(self.text[ret_toks[0].start : ret_toks[-1].end])
        close = self._find_close(buf, p)
        params = self._parse_params(buf[p + 1 : close])
        sig = MethodSig(
            name=name,
            return_type=return_type,
            params=tuple(params),
            modifiers=frozenset(mods),
            owner=decl.fully_qualified_name,
            doc=doc,
        )
        if sig.key in self.method_spans:
            log.warning("duplicate method signature ignored: %s (%s)", sig.key, self.path)
            return
        decl.methods.append(sig)
        if body is not None:
            self.method_spans[sig.key] = body
        else:
            self.method_spans[sig.key] = (0, 0)

    @staticmethod
    def _find_close(buf: list[Token], open_idx: int) -> int:
        depth = 0
        for j in range(open_idx, len(buf)):
            if buf[j].kind != "punct":
                continue
            if buf[j].value == "(":
                depth += 1
            elif buf[j].value == ")":
                depth -= 1
                if depth == 0:
                    return j
        return len(buf)

    def _parse_params(self, toks: list[Token]) -> list[tuple[str, str]]:
        groups: list[list[Token]] = [[]]
        depth = 0
        for t in toks:
            if t.kind == "punct" and t.value in "([<":
                depth += 1
            elif t.kind == "punct" and t.value in ")]>":
                depth -= 1
            if t.kind == "punct" and t.value == "," and depth == 0:
                groups.append([])
            else:
                groups[-1].append(t)
        params: list[tuple[str, str]] = []
        for g in groups:
            g = [t for t in g if not (t.kind == "keyword" and t.value == "final")]
            if not g:
                continue
            idents = [j for j, t in enumerate(g) if t.kind == "ident"]
            if not idents:
                continue
            name_idx = idents[-1]
            type_toks = g[:name_idx]
            if not type_toks:
                continue
            ptype = _collapse(self.text[type_toks[0].start : type_toks[-1].end])
            params.append((ptype, g[name_idx].value))
        return params


def parse_source(text: str, path: str) -> SourceFile:
    """Parse one file's text into structural facts.

    Raises ParseError (with a line number) when braces remain unbalanced
    after comment/string stripping; comments and literals are otherwise
    inert, so a `class` keyword inside a comment contributes nothing.
    """
    return _FileParser(text, path).parse()


def scan_repository(
    root: str | Path,
    conventions: CorpusConventions = CorpusConventions(),
) -> ScanResult:
    """Parse every .java file under `root` in lexicographic path order.

    Unparseable or non-UTF-8 files land on the skip-list with a reason and
    the scan continues; a missing root is fatal.
    """
    rootp = Path(root)
    if not rootp.is_dir():
        raise NotFoundError(f"repository root not found or not a directory: {root}")
    del conventions  # delimiters matter for block extraction, not parsing
    files: list[SourceFile] = []
    skipped: list[SkippedFile] = []
    for p in sorted(rootp.rglob("*.java"), key=lambda q: q.relative_to(rootp).as_posix()):
        rel = p.relative_to(rootp).as_posix()
        try:
            text = p.read_bytes().decode("utf-8")
        except UnicodeDecodeError as exc:
            skipped.append(SkippedFile(rel, f"not valid UTF-8: {exc.reason}"))
            log.warning("skip file=%s reason=not-utf8", rel)
            continue
        try:
            files.append(parse_source(text, rel))
        except ParseError as exc:
            skipped.append(SkippedFile(rel, str(exc)))
            log.warning("skip file=%s reason=%s", rel, exc)
    return ScanResult(files=files, skipped=skipped)


# ---------------------------------------------------------------------------
# Test block extraction
# ---------------------------------------------------------------------------


def extract_test_blocks(
    file: SourceFile,
    conventions: CorpusConventions = CorpusConventions(),
) -> BlockScan:
    """Find delimiter-framed blocks inside the file's method bodies.

    Blocks come back in source order with file-level ordinals; a block whose
    opening call is never closed at its own nesting depth, or that runs into
    another opening delimiter first, is excluded and diagnosed.
    """
    scan = BlockScan(blocks=[])
    ordinal = 0
    spans = sorted(
        ((key, span) for key, span in file.method_spans.items() if span != (0, 0)),
        key=lambda kv: kv[1][0],
    )
    owner_by_key = {m.key: c.fully_qualified_name for c in file.classes for m in c.methods}
    for key, (lo, hi) in spans:
        body_text = file.raw_text[lo:hi]
        base_line = file.raw_text.count("\n", 0, lo) + 1
        ordinal = _scan_method(
            file, body_text, base_line, key, owner_by_key.get(key, ""), conventions, ordinal, scan
        )
    return scan


def _scan_method(
    file: SourceFile,
    body_text: str,
    base_line: int,
    method_key: str,
    owner_class: str,
    conv: CorpusConventions,
    ordinal: int,
    out: BlockScan,
) -> int:
    toks = structural(lex(body_text))
    pairs = match_brackets(toks)

    def diag(tok: Token, reason: str) -> None:
        out.malformed.append(
            BlockDiagnostic(file.path, method_key, base_line + tok.line - 1, reason)
        )
        log.warning("malformed block file=%s method=%s reason=%s", file.path, method_key, reason)

    i = 0
    while i < len(toks):
        t = toks[i]
        if not (t.kind == "ident" and t.value == conv.begin and _punct_at(toks, i + 1, "(")):
            i += 1
            continue
        open_idx = i + 1
        close = pairs.get(open_idx)
        if close is None:
            diag(t, f"unclosed {conv.begin} call")
            break
        tcbd_tok = next((x for x in toks[open_idx + 1 : close] if x.kind == "string"), None)
        if tcbd_tok is None:
            diag(t, f"{conv.begin} call has no description string literal")
            i = close + 1
            continue
        stmt_end = close + 1 if _punct_at(toks, close + 1, ";") else close

        j = stmt_end + 1
        depth = 0
        end_tail = -1
        failure: str | None = None
        resume = len(toks)
        while j < len(toks):
            u = toks[j]
            if u.kind == "punct" and u.value == "{":
                depth += 1
            elif u.kind == "punct" and u.value == "}":
                depth -= 1
                if depth < 0:
                    failure = f"enclosing scope closed before {conv.end}"
                    resume = j + 1
                    break
            elif u.kind == "ident" and u.value == conv.begin and _punct_at(toks, j + 1, "("):
                failure = f"nested {conv.begin} before {conv.end}"
                resume = j  # rescan: the inner opener may start a valid block
                break
            elif (
                u.kind == "ident"
                and u.value == conv.end
                and _punct_at(toks, j + 1, "(")
                and depth == 0
            ):
                end_close = pairs.get(j + 1)
                if end_close is None:
                    failure = f"unclosed {conv.end} call"
                    resume = len(toks)
                    break
                end_tail = end_close + 1 if _punct_at(toks, end_close + 1, ";") else end_close
                break
            j += 1
        else:
            failure = f"{conv.begin} without matching {conv.end}"

        if failure is not None or end_tail == -1:
            diag(t, failure or f"{conv.begin} without matching {conv.end}")
            i = resume
            continue

        body = body_text[t.start : toks[end_tail].end]
        out.blocks.append(
            TestCodeBlock(
                block_id=f"{file.path}::{ordinal}",
                tcbd=tcbd_tok.value,
                body=body,
                owner_method=method_key,
                owner_class=owner_class,
                invocations=extract_invocations(body, exclude=conv.delimiter_names),
                line_count=body.count("\n") + 1,
            )
        )
        ordinal += 1
        i = end_tail + 1
    return ordinal


def _punct_at(toks: list[Token], i: int, value: str) -> bool:
    return 0 <= i < len(toks) and toks[i].kind == "punct" and toks[i].value == value


# ---------------------------------------------------------------------------
# Invocation extraction and resolution
# ---------------------------------------------------------------------------


def extract_invocations(
    text: str,
    exclude: frozenset[str] | set[str] | tuple[str, ...] = (),
    include_constructors: bool = False,
) -> frozenset[InvocationRef]:
    """Collect `identifier(` call sites outside comments and strings.

    Total on arbitrary text (it also runs on LLM output). Control keywords
    never match because they lex as keywords; `new X(...)` is skipped unless
    `include_constructors` is set; annotations are skipped; each nested call
    yields its own reference.
    """
    toks = structural(lex(text))
    pairs = match_brackets(toks)
    openers = {v: k for k, v in pairs.items()}
    refs: set[InvocationRef] = set()
    for i, t in enumerate(toks):
        if t.kind != "ident" or not _punct_at(toks, i + 1, "("):
            continue
        start, crossed_call = _chain_start(toks, openers, i)
        before = toks[start - 1] if start > 0 else None
        if before is not None and before.kind == "punct" and before.value == "@":
            continue
        if before is not None and before.kind == "keyword" and before.value == "new":
            if not crossed_call:
                # the chain back to `new` is pure dotted names: a constructor
                if not include_constructors:
                    continue
            else:
                start -= 1  # method on a fresh instance; keep `new` in the receiver
        if t.value in exclude:
            continue
        receiver = None
        if start < i:
            receiver = _collapse(text[toks[start].start : toks[i - 2].end])
        refs.add(InvocationRef(simple_name=t.value, receiver=receiver))
    return frozenset(refs)


def _chain_start(toks: list[Token], openers: dict[int, int], i: int) -> tuple[int, bool]:
    """Walk a dotted receiver chain backwards from the called identifier.

    Returns the chain's first token index and whether the walk jumped over
    a call or index expression (which rules out the constructor reading).
    """
    start = i
    j = i - 1
    crossed_call = False
    while j >= 1 and toks[j].kind == "punct" and toks[j].value == ".":
        prev = toks[j - 1]
        if prev.kind == "ident" or (prev.kind == "keyword" and prev.value in ("this", "super")):
            start = j - 1
            j = start - 1
            continue
        if prev.kind == "punct" and prev.value in (")", "]"):
            o = openers.get(j - 1)
            if o is None:
                break
            crossed_call = True
            if o >= 1 and toks[o - 1].kind == "ident":
                start = o - 1
                j = start - 1
                continue
            start = o
            break
        break
    return start, crossed_call


def _is_public(sig: MethodSig, owner: ClassDecl) -> bool:
    if "public" in sig.modifiers:
        return True
    if owner.kind == "interface":
        return not ({"private", "protected"} & sig.modifiers)
    return False


def imported_classes(file: SourceFile, graph: "CodeGraph") -> list[ClassDecl]:
    """Graph-known classes named by the file's imports, in import order.

    Wildcard imports expand to all graph-known classes in the package,
    sorted by FQN; static member imports map to their declaring class.
    Classes absent from the graph are omitted; duplicates keep first place.
    """
    seen: set[str] = set()
    result: list[ClassDecl] = []

    def add(fqn: str) -> None:
        if fqn in seen:
            return
        decl = graph.class_decl(fqn)
        if decl is not None:
            seen.add(fqn)
            result.append(decl)

    for imp in file.imports:
        if imp.is_wildcard and not imp.is_static:
            for fqn in graph.classes_in_package(imp.qualified_name):
                add(fqn)
        elif imp.is_wildcard and imp.is_static:
            add(imp.qualified_name)
        elif imp.is_static:
            add(imp.qualified_name.rsplit(".", 1)[0])
        else:
            add(imp.qualified_name)
    return result


def resolve_invocation(
    ref: InvocationRef,
    owner_class: str,
    file: SourceFile,
    graph: "CodeGraph",
) -> InvocationRef:
    """Best-effort, deterministic resolution to `Class#method`.

    Tiers: (1) the containing class declares the name (bare, `this`, or the
    class's own simple name as receiver); (2) the receiver is exactly an
    imported class's simple name — resolved there or nowhere; (3) a unique
    simple-name match among imported classes' public methods. Ambiguity at
    tier 3 stays unresolved and is logged.
    """
    if ref.resolved_fqn is not None:
        return ref
    name = ref.simple_name
    owner = graph.class_decl(owner_class)
    own_simple = owner.simple_name if owner is not None else None
    if ref.receiver in (None, "this", own_simple):
        if owner is not None and any(m.name == name for m in owner.methods):
            return replace(ref, resolved_fqn=f"{owner_class}#{name}")
        if ref.receiver == own_simple and ref.receiver is not None:
            return ref
    imported = imported_classes(file, graph)
    if ref.receiver is not None and ref.receiver.isidentifier():
        for cls in imported:
            if cls.simple_name == ref.receiver:
                if any(m.name == name and _is_public(m, cls) for m in cls.methods):
                    return replace(ref, resolved_fqn=f"{cls.fully_qualified_name}#{name}")
                return ref  # explicitly named class lacks the method
        if any(imp.simple_name == ref.receiver for imp in file.imports):
            return ref  # names an import the graph does not know; never guess
    candidates = [
        cls
        for cls in imported
        if any(m.name == name and _is_public(m, cls) for m in cls.methods)
    ]
    if len(candidates) == 1:
        return replace(ref, resolved_fqn=f"{candidates[0].fully_qualified_name}#{name}")
    if len(candidates) > 1:
        log.info(
            "ambiguous invocation name=%s file=%s candidates=%s",
            name,
            file.path,
            ",".join(c.fully_qualified_name for c in candidates),
        )
    return ref
