"""Prompt assembly: instruction, `<methods>` context from the code graph,
up to two retrieved exemplar blocks, and the target step description, under
a token budget.

The template numbers the target description 1 and the exemplars 2 and 3 —
the fine-tuned format is what it is, and matching it matters more than
tidiness. When the estimate exceeds the budget, imported-class stanzas drop
from the end of import order first, then exemplar 3, then exemplar 2; the
owning class and the target are never dropped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .analyzer import MethodSig
from .embedding import VectorIndex, leakage_exclusion, top_k
from .errors import ConfigError, PromptBudgetError
from .graph import CodeGraph, methods_in_scope, scope_for_file

log = logging.getLogger(__name__)

PROMPT_PREFIX = "<s>[INST] "
PROMPT_SUFFIX = "\n[/INST]"

DEFAULT_INSTRUCTION = (
    "You are an expert 5G network trace and test engineer and you are a Java "
    "programming expert. You are given a list of methods and example code blocks. "
    "Your task is to write a Java code block for a given test description"
)


def _estimate_chars_div_4(text: str) -> int:
    return (len(text) + 3) // 4


TOKEN_ESTIMATORS: dict[str, Callable[[str], int]] = {
    "chars-div-4": _estimate_chars_div_4,
}


def estimate_tokens(text: str, estimator_id: str = "chars-div-4") -> int:
    try:
        return TOKEN_ESTIMATORS[estimator_id](text)
    except KeyError:
        raise ConfigError(f"unknown token estimator: {estimator_id}")


@dataclass(frozen=True)
class PromptBudget:
    max_tokens: int = 10000
    estimator_id: str = "chars-div-4"

    def __post_init__(self) -> None:
        if self.max_tokens <= 0:
            raise ConfigError("budget max_tokens must be positive")
        if self.estimator_id not in TOKEN_ESTIMATORS:
            raise ConfigError(f"unknown token estimator: {self.estimator_id}")

    def estimate(self, text: str) -> int:
        return TOKEN_ESTIMATORS[self.estimator_id](text)


@dataclass
class PromptBundle:
    instruction: str
    methods_section: str
    exemplars: tuple[tuple[str, str], ...]  # (description, code body), at most 2
    target_tcbd: str
    rendered: str
    token_estimate: int
    block_id: str | None = None
    truncation: tuple[str, ...] = ()
    exemplar_ids: tuple[str, ...] = ()

    @property
    def truncated(self) -> bool:
        return bool(self.truncation)

    @property
    def no_exemplars(self) -> bool:
        return not self.exemplars

    @property
    def chat_content(self) -> str:
        """The prompt without the raw-template framing, for chat endpoints."""
        return self.rendered.removeprefix(PROMPT_PREFIX).removesuffix(PROMPT_SUFFIX)

    def to_dict(self) -> dict:
        return {
            "block_id": self.block_id,
            "target_tcbd": self.target_tcbd,
            "exemplar_ids": list(self.exemplar_ids),
            "truncation": list(self.truncation),
            "token_estimate": self.token_estimate,
            "rendered": self.rendered,
        }


def render_methods_section(scope: list[tuple[str, list[MethodSig]]]) -> str:
    """One stanza per class: the `Class Name:` line, then `Method Names:`
    carrying the first signature with the rest one per indented line."""
    stanzas = []
    for fqn, methods in scope:
        lines = [f"Class Name:\t{fqn}"]
        if methods:
            lines.append(f"Method Names:\t{methods[0].render()}")
            lines.extend(f"\t{m.render()}" for m in methods[1:])
        else:
            lines.append("Method Names:")
        stanzas.append("\n".join(lines))
    return "\n".join(stanzas)


def render_prompt(
    instruction: str,
    methods_section: str,
    exemplars: tuple[tuple[str, str], ...],
    target_tcbd: str,
) -> str:
    parts = [f"{PROMPT_PREFIX}{instruction}", "<methods>", methods_section, "</methods>"]
    for i, (tcbd, body) in enumerate(exemplars):
        n = i + 2
        parts.extend(
            [
                f"<test_description_{n}>",
                f'"{tcbd}"',
                f"</test_description_{n}>",
                f"<code_block_{n}>",
                body,
                f"</code_block_{n}>",
            ]
        )
    parts.extend(
        [
            "Write code for the below test description.",
            "<test_description_1>",
            f'"{target_tcbd}"',
            "</test_description_1>",
        ]
    )
    return "\n".join(parts) + PROMPT_SUFFIX


def build_prompt_for_block(
    block_id: str,
    graph: CodeGraph,
    index: VectorIndex,
    budget: PromptBudget = PromptBudget(),
    k: int = 2,
    instruction: str | None = None,
    exclude: set[str] | None = None,
) -> PromptBundle:
    """Bundle for regenerating an existing block; its own ground truth (and
    any byte-identical description) is excluded from retrieval."""
    block = graph.block(block_id)
    scope = methods_in_scope(block_id, graph)
    if exclude is None:
        exclude = leakage_exclusion(index, block_id)
    query = index.entry(block_id).vector
    hits = top_k(index, query, k, exclude=frozenset(exclude))
    return _assemble(scope, hits, block.tcbd, graph, budget, instruction, block_id)


def build_prompt_for_tcbd(
    tcbd: str,
    file_path: str,
    graph: CodeGraph,
    index: VectorIndex,
    budget: PromptBudget = PromptBudget(),
    k: int = 2,
    instruction: str | None = None,
) -> PromptBundle:
    """Bundle for a brand-new step; the caller names the file it will live in
    so imports can scope the `<methods>` section. No retrieval exclusion: an
    identical existing step is exactly the exemplar you want."""
    scope = scope_for_file(file_path, graph)
    query = index.query_embedder().embed(tcbd)
    hits = top_k(index, query, k)
    return _assemble(scope, hits, tcbd, graph, budget, instruction, None)


def _assemble(
    scope: list[tuple[str, list[MethodSig]]],
    hits: list[tuple[str, float]],
    target_tcbd: str,
    graph: CodeGraph,
    budget: PromptBudget,
    instruction: str | None,
    block_id: str | None,
) -> PromptBundle:
    instruction = DEFAULT_INSTRUCTION if instruction is None else instruction
    exemplar_ids = [hit_id for hit_id, _ in hits]
    exemplars = [(graph.block(h).tcbd, graph.block(h).body) for h in exemplar_ids]
    if not exemplars:
        log.warning("no exemplars available for %s", block_id or repr(target_tcbd))

    kept_scope = list(scope)
    kept_exemplars = list(exemplars)
    kept_ids = list(exemplar_ids)
    truncation: list[str] = []
    while True:
        methods_section = render_methods_section(kept_scope)
        rendered = render_prompt(instruction, methods_section, tuple(kept_exemplars), target_tcbd)
        estimate = budget.estimate(rendered)
        if estimate <= budget.max_tokens:
            break
        if len(kept_scope) > 1:
            dropped_fqn, _ = kept_scope.pop()
            truncation.append(f"dropped_class:{dropped_fqn}")
        elif kept_exemplars:
            kept_exemplars.pop()
            dropped_id = kept_ids.pop()
            truncation.append(f"dropped_exemplar:{len(kept_exemplars) + 2}:{dropped_id}")
        else:
            raise PromptBudgetError(
                f"instruction, owning class, and target exceed the budget "
                f"({estimate} > {budget.max_tokens} tokens)"
            )
    if truncation:
        log.info("prompt truncated for %s: %s", block_id or target_tcbd, ", ".join(truncation))
    return PromptBundle(
        instruction=instruction,
        methods_section=methods_section,
        exemplars=tuple(kept_exemplars),
        target_tcbd=target_tcbd,
        rendered=rendered,
        token_estimate=estimate,
        block_id=block_id,
        truncation=tuple(truncation),
        exemplar_ids=tuple(kept_ids),
    )
