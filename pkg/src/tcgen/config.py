"""Pipeline configuration: one YAML file, overridable by CLI flags.

The API key is never read from this file; it comes from the LLM_API_KEY
environment variable (EMBEDDING_API_KEY for the embedding service).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .analyzer import CorpusConventions
from .embedding import EmbeddingServiceConfig
from .errors import ConfigError
from .gateway import LlmEndpointConfig
from .prompt import PromptBudget
from .transport import RetryPolicy

FORBIDDEN_CONFIG_KEYS = ("api_key", "llm_api_key", "token", "secret")


@dataclass
class EmbedderConfig:
    kind: str = "lexical"  # lexical | external
    base_url: str = ""
    model: str = ""
    timeout_s: float = 30.0

    def service_config(self, retry: RetryPolicy) -> EmbeddingServiceConfig:
        if self.kind != "external":
            raise ConfigError("embedder.kind must be 'external' to build a service config")
        if not self.base_url or not self.model:
            raise ConfigError("external embedder needs base_url and model")
        return EmbeddingServiceConfig(
            base_url=self.base_url, model=self.model, timeout_s=self.timeout_s, retry=retry
        )


@dataclass
class PipelineConfig:
    repo_roots: list[str] = field(default_factory=list)
    delimiters: CorpusConventions = field(default_factory=CorpusConventions)
    graph_path: str = "out/graph.json"
    index_path: str = "out/index.json"
    report_dir: str = "out/reports"
    dataset_dir: str = "out/dataset"
    budget: PromptBudget = field(default_factory=PromptBudget)
    retrieval_k: int = 2
    split_seed: int = 1
    matching_mode: str = "simple_name"
    count_constructor_calls: bool = False
    instruction: str | None = None
    llm: LlmEndpointConfig = field(default_factory=LlmEndpointConfig)
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)

    def validate(self) -> None:
        if not self.repo_roots:
            raise ConfigError("config needs at least one repo root")
        for root in self.repo_roots:
            if not Path(root).is_dir():
                raise ConfigError(f"repo root is not a directory: {root}")
        if self.retrieval_k < 0:
            raise ConfigError("retrieval_k must be >= 0")
        if self.matching_mode not in ("simple_name", "qualified"):
            raise ConfigError(f"unknown matching_mode: {self.matching_mode}")
        if self.embedder.kind not in ("lexical", "external"):
            raise ConfigError(f"unknown embedder kind: {self.embedder.kind}")


def _reject_secrets(doc: dict) -> None:
    for key in doc:
        if any(marker in key.lower() for marker in FORBIDDEN_CONFIG_KEYS):
            raise ConfigError(
                f"config key {key!r} looks like a credential; keys come from the environment"
            )


def load_config(path: str | Path, overrides: dict | None = None) -> PipelineConfig:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    doc.update(overrides or {})
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> PipelineConfig:
    _reject_secrets(doc)
    cfg = PipelineConfig()
    try:
        cfg.repo_roots = [str(p) for p in doc.get("repo_roots", [])]
        delim = doc.get("delimiters", {})
        cfg.delimiters = CorpusConventions(
            begin=delim.get("begin", "TestBegin"), end=delim.get("end", "TestEnd")
        )
        cfg.graph_path = str(doc.get("graph_path", cfg.graph_path))
        cfg.index_path = str(doc.get("index_path", cfg.index_path))
        cfg.report_dir = str(doc.get("report_dir", cfg.report_dir))
        cfg.dataset_dir = str(doc.get("dataset_dir", cfg.dataset_dir))
        b = doc.get("budget", {})
        cfg.budget = PromptBudget(
            max_tokens=int(b.get("max_tokens", 10000)),
            estimator_id=str(b.get("estimator", "chars-div-4")),
        )
        cfg.retrieval_k = int(doc.get("retrieval_k", 2))
        cfg.split_seed = int(doc.get("split_seed", 1))
        cfg.matching_mode = str(doc.get("matching_mode", "simple_name"))
        cfg.count_constructor_calls = bool(doc.get("count_constructor_calls", False))
        instruction = doc.get("instruction")
        cfg.instruction = str(instruction) if instruction is not None else None
        llm = doc.get("llm", {})
        cfg.llm = LlmEndpointConfig(
            base_url=str(llm.get("base_url", "mock://echo")),
            model_name=str(llm.get("model_name", "mock")),
            temperature=float(llm.get("temperature", 0.0)),
            max_output_tokens=int(llm.get("max_output_tokens", 1024)),
            timeout_s=float(llm.get("timeout_s", 60.0)),
            retry=RetryPolicy(
                max_attempts=int(llm.get("max_attempts", 3)),
                backoff_s=float(llm.get("backoff_s", 0.5)),
            ),
            wire=str(llm.get("wire", "chat")),
            concurrency=int(llm.get("concurrency", 1)),
        )
        emb = doc.get("embedder", {})
        cfg.embedder = EmbedderConfig(
            kind=str(emb.get("kind", "lexical")),
            base_url=str(emb.get("base_url", "")),
            model=str(emb.get("model", "")),
            timeout_s=float(emb.get("timeout_s", 30.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}")
    cfg.validate()
    return cfg
