"""Instruction-fine-tuning export: JSON-lines of fully rendered prompts with
ground-truth completions wrapped `<s>[INST] ... [/INST] ... </s>`, plus a
training-config sidecar with the low-rank-adapter hyperparameters a standard
PEFT harness consumes. Running the actual fine-tune is out of scope; this is
the boundary where reproducibility ends and GPU scale begins.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path

from .embedding import VectorIndex
from .errors import ConfigError, PromptBudgetError, TcgenError
from .graph import CodeGraph
from .prompt import PromptBudget, build_prompt_for_block
from .splits import SPLITS, select_blocks

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IftTrainConfig:
    task_type: str = "CAUSAL_LM"
    lora_rank: int = 256
    lora_alpha: int = 512
    lora_dropout: float = 0.1
    bias: str = "none"
    context_length: int = 10000
    base_model: str = "mixtral-8x7b"

    def __post_init__(self) -> None:
        if not isinstance(self.lora_rank, int) or self.lora_rank <= 0:
            raise ConfigError("lora_rank must be a positive integer")
        if not isinstance(self.lora_alpha, int) or self.lora_alpha <= 0:
            raise ConfigError("lora_alpha must be a positive integer")
        if not isinstance(self.lora_dropout, (int, float)) or not 0 <= self.lora_dropout <= 1:
            raise ConfigError("lora_dropout must be within [0, 1]")
        if self.context_length <= 0:
            raise ConfigError("context_length must be positive")
        if self.bias not in ("none", "all", "lora_only"):
            raise ConfigError(f"unsupported bias setting: {self.bias!r}")

    def to_document(self) -> dict:
        return {
            "task_type": self.task_type,
            "r": self.lora_rank,
            "alpha": self.lora_alpha,
            "dropout": self.lora_dropout,
            "bias": self.bias,
            "context_length": self.context_length,
            "base_model": self.base_model,
        }


def export_train_config(
    overrides: dict | None = None, path: str | Path | None = None
) -> dict:
    """Defaults merged with overrides; unknown keys and bad values refuse."""
    overrides = dict(overrides or {})
    known = set(asdict(IftTrainConfig()))
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown training-config overrides: {sorted(unknown)}")
    try:
        cfg = IftTrainConfig(**overrides)
    except TypeError as exc:
        raise ConfigError(f"invalid training-config override types: {exc}")
    doc = cfg.to_document()
    if path is not None:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return doc


@dataclass(frozen=True)
class IftRecord:
    block_id: str
    prompt: str  # "<s>[INST] ..." through "[/INST]"
    completion: str  # the ground-truth block body
    full_text: str
    token_estimate: int


@dataclass(frozen=True)
class ExportSummary:
    split: str
    records_written: int
    skipped_over_budget: int
    dataset_path: str


def render_full_text(prompt: str, completion: str) -> str:
    return f"{prompt}\n{completion}\n</s>"


def export_dataset(
    graph: CodeGraph,
    index: VectorIndex,
    split: str,
    budget: PromptBudget,
    out_path: str | Path,
    *,
    seed: int = 0,
    k: int = 2,
    instruction: str | None = None,
) -> ExportSummary:
    """One JSON line per block in the split, ordered by block id. Exemplar
    retrieval excludes the record's own block; records whose full text would
    exceed the context budget are skipped and counted."""
    if split not in SPLITS:
        raise ConfigError(f"dataset split must be one of {SPLITS}, not {split!r}")
    block_ids = select_blocks([b.block_id for b in graph.blocks()], split, seed)
    if not block_ids:
        raise TcgenError(f"split {split!r} selected no blocks; nothing to export")
    records: list[IftRecord] = []
    skipped = 0
    for block_id in block_ids:
        block = graph.block(block_id)
        try:
            bundle = build_prompt_for_block(
                block_id, graph, index, budget=budget, k=k, instruction=instruction
            )
        except PromptBudgetError:
            skipped += 1
            log.info("skipping %s: prompt alone exceeds the context budget", block_id)
            continue
        full_text = render_full_text(bundle.rendered, block.body)
        estimate = budget.estimate(full_text)
        if estimate > budget.max_tokens:
            skipped += 1
            log.info("skipping %s: %d tokens over %d budget", block_id, estimate, budget.max_tokens)
            continue
        records.append(
            IftRecord(
                block_id=block_id,
                prompt=bundle.rendered,
                completion=block.body,
                full_text=full_text,
                token_estimate=estimate,
            )
        )
    out = Path(out_path)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(
                    json.dumps(
                        {
                            "block_id": rec.block_id,
                            "prompt": rec.prompt,
                            "completion": rec.completion,
                            "full_text": rec.full_text,
                        },
                        sort_keys=True,
                    )
                )
                fh.write("\n")
    except OSError as exc:
        raise TcgenError(f"cannot write dataset to {out}: {exc}")
    log.info("exported %d records to %s (%d skipped)", len(records), out, skipped)
    return ExportSummary(
        split=split,
        records_written=len(records),
        skipped_over_budget=skipped,
        dataset_path=str(out),
    )


def read_dataset(path: str | Path) -> list[IftRecord]:
    """Parse an exported file back into records (round-trip aid)."""
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        records.append(
            IftRecord(
                block_id=d["block_id"],
                prompt=d["prompt"],
                completion=d["completion"],
                full_text=d["full_text"],
                token_estimate=0,
            )
        )
    return records
