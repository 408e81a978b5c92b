"""Command-line front end: explicit pipeline stages over a shared config.

    tcgen --config pipeline.yaml analyze
    tcgen --config pipeline.yaml index
    tcgen --config pipeline.yaml generate --block-id <id> [--show-prompt]
    tcgen --config pipeline.yaml generate --tcbd "..." --file <path>
    tcgen --config pipeline.yaml evaluate --split test --label my-model
    tcgen --config pipeline.yaml export-ift --split train

Every stage is an artifact on disk (graph, index, reports, dataset), so each
paper-described step can be inspected and cached. Exit codes: 0 success,
1 user/config error, 2 partial pipeline failure.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .analyzer import ScanResult, scan_repository
from .config import PipelineConfig, load_config
from .embedding import ExternalEmbedder, build_index, load_index, save_index
from .errors import PartialFailure, TcgenError
from .evaluator import evaluate_corpus, render_table, write_report
from .gateway import LlmGateway
from .graph import build_graph, load_graph, save_graph
from .ift import export_dataset, export_train_config
from .prompt import build_prompt_for_block, build_prompt_for_tcbd

log = logging.getLogger(__name__)


@click.group()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Pipeline config YAML.")
@click.option("--verbose", is_flag=True, help="Log debug detail to stderr.")
@click.pass_context
def cli(ctx: click.Context, config_path: str, verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = load_config(config_path)


def _scan_all(cfg: PipelineConfig) -> ScanResult:
    merged = ScanResult(files=[], skipped=[])
    for root in cfg.repo_roots:
        result = scan_repository(root, cfg.delimiters)
        merged.files.extend(result.files)
        merged.skipped.extend(result.skipped)
    return merged


@cli.command()
@click.pass_obj
def analyze(cfg: PipelineConfig) -> None:
    """Scan the repositories and write the code graph."""
    result = _scan_all(cfg)
    graph = build_graph(result.files, cfg.delimiters)
    save_graph(graph, cfg.graph_path)
    counts = graph.counts()
    click.echo(
        f"graph written to {cfg.graph_path}: "
        f"{counts.get('class', 0)} classes, {counts.get('method', 0)} methods, "
        f"{counts.get('test_block', 0)} test blocks, {counts.get('edges', 0)} edges"
    )
    if result.skipped:
        click.echo(f"skipped {len(result.skipped)} files:")
        for s in result.skipped:
            click.echo(f"  {s.path}: {s.reason}")
    if graph.diagnostics:
        click.echo(f"malformed blocks excluded: {len(graph.diagnostics)}")
    if not result.files:
        click.echo("warning: no parseable .java files found", err=True)


@cli.command()
@click.pass_obj
def index(cfg: PipelineConfig) -> None:
    """Embed every block description and write the vector index."""
    graph = load_graph(cfg.graph_path)
    embedder = None
    if cfg.embedder.kind == "external":
        embedder = ExternalEmbedder(cfg.embedder.service_config(cfg.llm.retry))
    vindex = build_index(graph.blocks(), embedder)
    save_index(vindex, cfg.index_path)
    click.echo(
        f"index written to {cfg.index_path}: {len(vindex.entries)} entries, "
        f"dim {vindex.dim}, embedder {vindex.embedder_id}"
    )


@cli.command()
@click.option("--block-id", default=None, help="Regenerate an existing block by id.")
@click.option("--tcbd", default=None, help="Generate for a new step description.")
@click.option("--file", "file_path", default=None, help="Containing file for --tcbd scoping.")
@click.option("--show-prompt", is_flag=True, help="Print the assembled prompt too.")
@click.pass_obj
def generate(
    cfg: PipelineConfig,
    block_id: str | None,
    tcbd: str | None,
    file_path: str | None,
    show_prompt: bool,
) -> None:
    """Build the prompt for one step and print the generated code."""
    if (block_id is None) == (tcbd is None):
        raise TcgenError("pass exactly one of --block-id or --tcbd")
    if tcbd is not None and file_path is None:
        raise TcgenError("--tcbd needs --file to scope imports")
    graph = load_graph(cfg.graph_path)
    vindex = load_index(cfg.index_path)
    if block_id is not None:
        bundle = build_prompt_for_block(
            block_id, graph, vindex, budget=cfg.budget, k=cfg.retrieval_k,
            instruction=cfg.instruction,
        )
    else:
        bundle = build_prompt_for_tcbd(
            tcbd, file_path, graph, vindex, budget=cfg.budget, k=cfg.retrieval_k,
            instruction=cfg.instruction,
        )
    if show_prompt:
        click.echo(bundle.rendered)
        click.echo("--- generated " + "-" * 50)
    gateway = LlmGateway(cfg.llm, graph)
    result = gateway.generate(bundle)
    click.echo(result.extracted_code)


@cli.command()
@click.option("--split", default="test", help="train / validation / test / all.")
@click.option("--label", default=None, help="Model label for the report.")
@click.pass_obj
def evaluate(cfg: PipelineConfig, split: str, label: str | None) -> None:
    """Generate for every block in the split and report invocation F1."""
    graph = load_graph(cfg.graph_path)
    vindex = load_index(cfg.index_path)
    report = evaluate_corpus(
        graph,
        vindex,
        cfg.llm,
        split=split,
        seed=cfg.split_seed,
        budget=cfg.budget,
        k=cfg.retrieval_k,
        mode=cfg.matching_mode,
        model_label=label or cfg.llm.model_name,
        instruction=cfg.instruction,
        report_dir=cfg.report_dir,
    )
    click.echo(render_table(report), nl=False)
    click.echo(f"report files under {cfg.report_dir}")


@cli.command("export-ift")
@click.option("--split", default="train", help="train or validation.")
@click.pass_obj
def export_ift(cfg: PipelineConfig, split: str) -> None:
    """Write the fine-tuning dataset and its training-config sidecar."""
    if split == "test":
        raise TcgenError("refusing to export the test split for training")
    graph = load_graph(cfg.graph_path)
    vindex = load_index(cfg.index_path)
    out_dir = Path(cfg.dataset_dir)
    summary = export_dataset(
        graph,
        vindex,
        split,
        cfg.budget,
        out_dir / f"ift_{split}.jsonl",
        seed=cfg.split_seed,
        k=cfg.retrieval_k,
        instruction=cfg.instruction,
    )
    config_doc = export_train_config({}, out_dir / "train_config.json")
    click.echo(
        f"wrote {summary.records_written} records to {summary.dataset_path} "
        f"({summary.skipped_over_budget} skipped over budget)"
    )
    click.echo(f"training config: {out_dir / 'train_config.json'} {config_doc}")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the stable exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except PartialFailure as exc:
        click.echo(f"partial failure: {exc}", err=True)
        return 2
    except TcgenError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
