"""Method-invocation F1 between generated and ground-truth code, with corpus
aggregates and report files.

The metric compares the *sets* of method names invoked: names only in the
ground truth are false negatives, names only in the generated code are false
positives, shared names are true positives. Two empty sets agree perfectly
(f1 = 1.0); that case never decides anything in practice but the definition
must be total. Logic correctness of generated code is out of scope.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .analyzer import CorpusConventions, InvocationRef, extract_invocations
from .embedding import VectorIndex
from .errors import PartialFailure, TcgenError, TransportError
from .figures import plot_f1_histogram
from .gateway import LlmEndpointConfig, LlmGateway
from .graph import CodeGraph
from .prompt import PromptBudget, build_prompt_for_block
from .splits import select_blocks

log = logging.getLogger(__name__)

Resolver = Callable[[InvocationRef], InvocationRef]


@dataclass(frozen=True)
class EvalResult:
    block_id: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    gt_methods: tuple[str, ...]
    gen_methods: tuple[str, ...]
    matching_mode: str


@dataclass(frozen=True)
class HistogramBin:
    low: float
    high: float
    count: int


@dataclass
class CorpusReport:
    model_label: str
    matching_mode: str
    per_block: list[EvalResult]
    mean_f1: float
    sd_f1: float  # population formula
    histogram: list[HistogramBin]
    partial: bool = False


def invocation_names(
    text: str,
    conventions: CorpusConventions = CorpusConventions(),
    mode: str = "simple_name",
    resolver: Resolver | None = None,
    include_constructors: bool = False,
) -> set[str]:
    """The comparable name set for a body of code under the matching mode."""
    refs = extract_invocations(
        text, exclude=conventions.delimiter_names, include_constructors=include_constructors
    )
    if mode == "simple_name":
        return {r.simple_name for r in refs}
    if mode == "qualified":
        names = set()
        for ref in refs:
            if resolver is not None and ref.resolved_fqn is None:
                ref = resolver(ref)
            names.add(ref.resolved_fqn or ref.simple_name)
        return names
    raise TcgenError(f"unknown matching mode: {mode}")


def compute_block_f1(
    gt_body: str,
    gen_body: str,
    mode: str = "simple_name",
    conventions: CorpusConventions = CorpusConventions(),
    block_id: str = "",
    resolver: Resolver | None = None,
    include_constructors: bool = False,
) -> EvalResult:
    """Total on arbitrary texts; the generated side rarely compiles."""
    gt = invocation_names(gt_body, conventions, mode, resolver, include_constructors)
    gen = invocation_names(gen_body, conventions, mode, resolver, include_constructors)
    tp = len(gt & gen)
    fp = len(gen - gt)
    fn = len(gt - gen)
    if not gt and not gen:
        precision = recall = f1 = 1.0  # perfect agreement on doing nothing
    else:
        precision = tp / (tp + fp) if (tp + fp) else 0.0
        recall = tp / (tp + fn) if (tp + fn) else 0.0
        denom = precision + recall
        f1 = (2 * precision * recall / denom) if denom else 0.0
    return EvalResult(
        block_id=block_id,
        tp=tp,
        fp=fp,
        fn=fn,
        precision=precision,
        recall=recall,
        f1=f1,
        gt_methods=tuple(sorted(gt)),
        gen_methods=tuple(sorted(gen)),
        matching_mode=mode,
    )


def aggregate(results: list[EvalResult], model_label: str) -> CorpusReport:
    if not results:
        raise TcgenError("cannot aggregate an empty result list")
    scores = [r.f1 for r in results]
    mean = sum(scores) / len(scores)
    sd = math.sqrt(sum((s - mean) ** 2 for s in scores) / len(scores))
    counts = [0] * 10
    for s in scores:
        counts[min(int(s * 10), 9)] += 1
    bins = [HistogramBin(i / 10, (i + 1) / 10, counts[i]) for i in range(10)]
    mode = results[0].matching_mode
    return CorpusReport(
        model_label=model_label,
        matching_mode=mode,
        per_block=list(results),
        mean_f1=mean,
        sd_f1=sd,
        histogram=bins,
    )


def evaluate_corpus(
    graph: CodeGraph,
    index: VectorIndex,
    llm_config: LlmEndpointConfig,
    *,
    split: str = "test",
    seed: int = 0,
    budget: PromptBudget = PromptBudget(),
    k: int = 2,
    mode: str = "simple_name",
    model_label: str = "unlabeled",
    instruction: str | None = None,
    report_dir: str | Path | None = None,
    gateway: LlmGateway | None = None,
) -> CorpusReport:
    """Prompt, generate, and score every block in the split (self-excluded
    retrieval throughout). A fatal gateway failure aborts the run but the
    completed per-block results are still written, marked partial."""
    block_ids = select_blocks([b.block_id for b in graph.blocks()], split, seed)
    if not block_ids:
        raise TcgenError(f"split {split!r} selected no blocks")
    gw = gateway if gateway is not None else LlmGateway(llm_config, graph)
    results: list[EvalResult] = []
    failure: Exception | None = None
    for block_id in block_ids:
        block = graph.block(block_id)
        try:
            bundle = build_prompt_for_block(
                block_id, graph, index, budget=budget, k=k, instruction=instruction
            )
            generation = gw.generate(bundle)
        except TransportError as exc:
            failure = exc
            log.error("aborting evaluation at %s: %s", block_id, exc)
            break
        results.append(
            compute_block_f1(
                block.body,
                generation.extracted_code,
                mode=mode,
                conventions=graph.conventions,
                block_id=block_id,
            )
        )
    if failure is not None:
        report = (
            aggregate(results, model_label) if results else _empty_report(model_label, mode)
        )
        report.partial = True
        if report_dir is not None:
            write_report(report, report_dir)
        raise PartialFailure(
            f"evaluation aborted after {len(results)}/{len(block_ids)} blocks: {failure}",
            partial_path=str(report_dir) if report_dir else None,
        )
    report = aggregate(results, model_label)
    if report_dir is not None:
        write_report(report, report_dir)
    return report


def _empty_report(model_label: str, mode: str) -> CorpusReport:
    return CorpusReport(
        model_label=model_label,
        matching_mode=mode,
        per_block=[],
        mean_f1=0.0,
        sd_f1=0.0,
        histogram=[HistogramBin(i / 10, (i + 1) / 10, 0) for i in range(10)],
    )


# ---------------------------------------------------------------------------
# Report files
# ---------------------------------------------------------------------------

TABLE_HEADER = "Approach | F1 (Mean) | F1 (SD)"


def render_table(report: CorpusReport) -> str:
    lines = [
        TABLE_HEADER,
        "--- | --- | ---",
        f"{report.model_label} | {report.mean_f1:.4f} | {report.sd_f1:.4f}",
        "",
        f"blocks evaluated: {len(report.per_block)}",
        f"matching mode: {report.matching_mode}",
        "SD uses the population formula.",
    ]
    if report.partial:
        lines.append("PARTIAL RESULT: the run aborted before finishing; do not compare.")
    return "\n".join(lines) + "\n"


def histogram_csv(report: CorpusReport) -> str:
    rows = ["bin_low,bin_high,count"]
    rows.extend(f"{b.low:.1f},{b.high:.1f},{b.count}" for b in report.histogram)
    return "\n".join(rows) + "\n"


def report_to_dict(report: CorpusReport) -> dict:
    return {
        "model_label": report.model_label,
        "matching_mode": report.matching_mode,
        "mean_f1": report.mean_f1,
        "sd_f1": report.sd_f1,
        "partial": report.partial,
        "histogram": [{"bin_low": b.low, "bin_high": b.high, "count": b.count} for b in report.histogram],
        "per_block": [
            {
                "block_id": r.block_id,
                "tp": r.tp,
                "fp": r.fp,
                "fn": r.fn,
                "precision": r.precision,
                "recall": r.recall,
                "f1": r.f1,
                "gt_methods": list(r.gt_methods),
                "gen_methods": list(r.gen_methods),
            }
            for r in report.per_block
        ],
    }


def write_report(report: CorpusReport, report_dir: str | Path) -> dict[str, Path]:
    """Emit the table, the per-block JSON, the histogram CSV, and the
    histogram figure under stable names."""
    out = Path(report_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "table": out / "report.txt",
        "json": out / "report.json",
        "csv": out / "histogram.csv",
        "figure": out / "histogram.png",
    }
    paths["table"].write_text(render_table(report), encoding="utf-8")
    paths["json"].write_text(
        json.dumps(report_to_dict(report), indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    paths["csv"].write_text(histogram_csv(report), encoding="utf-8")
    plot_f1_histogram(report, paths["figure"])
    log.info("report written under %s", out)
    return paths
