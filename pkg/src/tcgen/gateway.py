"""Generation through a chat-completions-compatible HTTP endpoint, plus
hermetic mock backends selected by URL scheme:

  mock://echo           ground-truth body of the bundle's block, verbatim
  mock://dropper        ground truth minus one invocation per block
  mock://script:<path>  scripted status/content sequence from a JSON file

The echo and dropper mocks make end-to-end metrics analytically predictable;
the script mock drives the retry path without a network.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .analyzer import CorpusConventions, extract_invocations, lex
from .errors import ConfigError, NotFoundError, TcgenError
from .graph import CodeGraph
from .lexer import match_brackets, structural
from .prompt import PromptBundle
from .transport import LLM_API_KEY_VAR, RetryPolicy, bearer_headers, post_json, retry_call

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LlmEndpointConfig:
    base_url: str = "mock://echo"
    model_name: str = "mock"
    temperature: float = 0.0  # greedy by default; evaluation must reproduce
    max_output_tokens: int = 1024
    timeout_s: float = 60.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    wire: str = "chat"  # chat | raw
    concurrency: int = 1

    def __post_init__(self) -> None:
        if self.wire not in ("chat", "raw"):
            raise ConfigError(f"wire must be 'chat' or 'raw', not {self.wire!r}")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.concurrency < 1:
            raise ConfigError("concurrency must be >= 1")


@dataclass(frozen=True)
class GenerationResult:
    raw_text: str
    extracted_code: str
    usage: tuple[int, int] | None  # (prompt_tokens, completion_tokens)
    latency_s: float
    attempts: int


class HttpBackend:
    def __init__(self, config: LlmEndpointConfig):
        self.config = config

    def send(self, bundle: PromptBundle) -> tuple[int, object]:
        cfg = self.config
        if cfg.wire == "chat":
            body = {
                "model": cfg.model_name,
                "messages": [{"role": "user", "content": bundle.chat_content}],
                "temperature": cfg.temperature,
                "max_tokens": cfg.max_output_tokens,
            }
        else:
            body = {
                "model": cfg.model_name,
                "prompt": bundle.rendered,
                "temperature": cfg.temperature,
                "max_tokens": cfg.max_output_tokens,
            }
        return post_json(cfg.base_url, body, cfg.timeout_s, headers=bearer_headers(LLM_API_KEY_VAR))

    def text_of(self, payload: object) -> tuple[str, tuple[int, int] | None]:
        try:
            choice = payload["choices"][0]
            text = choice["message"]["content"] if self.config.wire == "chat" else choice["text"]
        except (TypeError, KeyError, IndexError) as exc:
            raise TcgenError(f"malformed completion response: {exc!r}")
        usage = None
        u = payload.get("usage") if isinstance(payload, dict) else None
        if isinstance(u, dict) and "prompt_tokens" in u and "completion_tokens" in u:
            usage = (int(u["prompt_tokens"]), int(u["completion_tokens"]))
        return str(text), usage


class EchoBackend:
    """Returns the ground-truth body for the bundle's block."""

    def __init__(self, graph: CodeGraph):
        self.graph = graph

    def send(self, bundle: PromptBundle) -> tuple[int, object]:
        return 200, self._ground_truth(bundle)

    def _ground_truth(self, bundle: PromptBundle) -> str:
        if bundle.block_id is not None:
            return self.graph.block(bundle.block_id).body
        for block in self.graph.blocks():
            if block.tcbd == bundle.target_tcbd:
                return block.body
        raise NotFoundError(
            f"echo mock has no ground truth for description {bundle.target_tcbd!r}"
        )

    def text_of(self, payload: object) -> tuple[str, None]:
        return str(payload), None


class DropperBackend(EchoBackend):
    """Ground truth minus exactly one invocation: the lexicographically first
    name disappears and the rest come back as plain calls, so expected scores
    are computable from the annotation sets alone."""

    def send(self, bundle: PromptBundle) -> tuple[int, object]:
        body = self._ground_truth(bundle)
        conv = self.graph.conventions
        names = sorted(
            {r.simple_name for r in extract_invocations(body, exclude=conv.delimiter_names)}
        )
        kept = names[1:]  # drop the first
        tcbd = bundle.target_tcbd.replace("\\", "\\\\").replace('"', '\\"')
        lines = [f'{conv.begin}("{tcbd}");']
        lines.extend(f"{name}();" for name in kept)
        lines.append(f"{conv.end}();")
        return 200, "\n".join(lines)


class ScriptBackend:
    """Replays a JSON script: {"responses": [{"status": 503}, {"status": 200,
    "content": "..."}], "repeat_last": false}."""

    def __init__(self, script_path: str):
        try:
            doc = json.loads(Path(script_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read mock script {script_path}: {exc}")
        self.responses = list(doc.get("responses", []))
        self.repeat_last = bool(doc.get("repeat_last", False))
        self.calls = 0
        if not self.responses:
            raise ConfigError(f"mock script {script_path} has no responses")

    def send(self, bundle: PromptBundle) -> tuple[int, object]:
        i = self.calls
        if i >= len(self.responses):
            if not self.repeat_last:
                raise ConfigError("mock script exhausted")
            i = len(self.responses) - 1
        self.calls += 1
        entry = self.responses[i]
        return int(entry.get("status", 200)), entry.get("content", "")

    def text_of(self, payload: object) -> tuple[str, None]:
        return str(payload), None


def make_backend(config: LlmEndpointConfig, graph: CodeGraph | None = None):
    url = config.base_url
    if url.startswith("mock://"):
        kind = url.removeprefix("mock://")
        if kind == "echo" or kind == "dropper":
            if graph is None:
                raise ConfigError(f"{url} needs a loaded graph for ground truth")
            return EchoBackend(graph) if kind == "echo" else DropperBackend(graph)
        if kind.startswith("script:"):
            return ScriptBackend(kind.removeprefix("script:"))
        raise ConfigError(f"unknown mock backend: {url}")
    if url.startswith(("http://", "https://")):
        return HttpBackend(config)
    raise ConfigError(f"unsupported endpoint url: {url}")


class LlmGateway:
    def __init__(
        self,
        config: LlmEndpointConfig,
        graph: CodeGraph | None = None,
        sleep: Callable[[float], None] = time.sleep,
        backend=None,
    ):
        self.config = config
        self.backend = backend if backend is not None else make_backend(config, graph)
        self.conventions = graph.conventions if graph is not None else CorpusConventions()
        self._sleep = sleep

    def generate(self, bundle: PromptBundle) -> GenerationResult:
        started = time.monotonic()
        payload, attempts = retry_call(
            lambda: self.backend.send(bundle), self.config.retry, sleep=self._sleep
        )
        raw_text, usage = self.backend.text_of(payload)
        latency = time.monotonic() - started
        result = GenerationResult(
            raw_text=raw_text,
            extracted_code=extract_code(raw_text, self.conventions),
            usage=usage,
            latency_s=latency,
            attempts=attempts,
        )
        log.info(
            "generation block=%s attempts=%d latency=%.3fs",
            bundle.block_id or "-",
            attempts,
            latency,
        )
        return result

    def generate_many(self, bundles: list[PromptBundle]) -> list[GenerationResult]:
        """Bounded concurrent requests, results joined back in input order."""
        if self.config.concurrency == 1 or len(bundles) <= 1:
            return [self.generate(b) for b in bundles]
        with ThreadPoolExecutor(max_workers=self.config.concurrency) as pool:
            return list(pool.map(self.generate, bundles))


def extract_code(raw_text: str, conventions: CorpusConventions = CorpusConventions()) -> str:
    """Isolate code from model output. Rules, in fixed order: the first
    fenced code block's interior; else the delimiter-framed span; else the
    trimmed text."""
    fence = _first_fence(raw_text)
    if fence is not None:
        return fence
    span = _delimited_span(raw_text, conventions)
    if span is not None:
        return span
    return raw_text.strip()


def _first_fence(text: str) -> str | None:
    open_idx = text.find("```")
    if open_idx == -1:
        return None
    line_end = text.find("\n", open_idx)
    if line_end == -1:
        return None  # opening fence with no body
    close_idx = text.find("```", line_end)
    if close_idx == -1:
        inner = text[line_end + 1 :]
    else:
        inner = text[line_end + 1 : close_idx]
    return inner.rstrip("\n")


def _delimited_span(text: str, conv: CorpusConventions) -> str | None:
    toks = structural(lex(text))
    pairs = match_brackets(toks)
    begin_idx = next(
        (
            i
            for i, t in enumerate(toks)
            if t.kind == "ident"
            and t.value == conv.begin
            and i + 1 < len(toks)
            and toks[i + 1].kind == "punct"
            and toks[i + 1].value == "("
        ),
        None,
    )
    if begin_idx is None:
        return None
    for j in range(begin_idx + 1, len(toks)):
        t = toks[j]
        if (
            t.kind == "ident"
            and t.value == conv.end
            and j + 1 < len(toks)
            and toks[j + 1].kind == "punct"
            and toks[j + 1].value == "("
        ):
            close = pairs.get(j + 1, j + 1)
            tail = close
            if close + 1 < len(toks) and toks[close + 1].kind == "punct" and toks[close + 1].value == ";":
                tail = close + 1
            return text[toks[begin_idx].start : toks[tail].end]
    return None
