"""Command-line interface: build, serve, nearby, panel.

Option precedence is flags > environment variables (ATLAS_<COMMAND>_<OPTION>)
> config file (JSON passed via --config) > built-in defaults.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import atlas, explorer
from .artifact import ArtifactError, BuildConfig, build_artifact, load_artifact
from .corpus import CorpusError
from .names import display_name


@click.group(context_settings={"auto_envvar_prefix": "ATLAS"})
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON config file with per-command defaults, e.g. {\"build\": {\"seed\": 7}}.",
)
@click.pass_context
def main(ctx: click.Context, config_path: Path | None) -> None:
    """Technology-space atlas: build patent map artifacts and query them."""
    if config_path is not None:
        ctx.default_map = json.loads(config_path.read_text(encoding="utf-8"))


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", default=atlas.DEFAULT_SEED, show_default=True, type=int)
@click.option("--backbone-k", default=atlas.DEFAULT_BACKBONE_K, show_default=True, type=int)
@click.option("--iterations", default=atlas.DEFAULT_ITERATIONS, show_default=True, type=int)
def build(corpus_path: str, out_dir: str, seed: int, backbone_k: int, iterations: int) -> None:
    """Parse a corpus file and build the artifact directory."""
    config = BuildConfig(seed=seed, backbone_k=backbone_k, layout_iterations=iterations)
    try:
        artifact = build_artifact(corpus_path, out_dir, config)
    except (CorpusError, ArtifactError) as exc:
        click.echo(f"build failed: {exc}", err=True)
        sys.exit(1)
    click.echo(f"built {out_dir}")
    click.echo(f"manifest hash: {artifact.manifest_hash}")


@main.command()
@click.option("--artifact", "artifact_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ledger", "ledger_path", default=None, type=click.Path())
def serve(artifact_dir: str, port: int, host: str, ledger_path: str | None) -> None:
    """Serve the query API for a built artifact."""
    from .server import serve as run_server

    try:
        run_server(artifact_dir, port=port, host=host, ledger_path=ledger_path)
    except ArtifactError as exc:
        click.echo(f"refusing to serve: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--artifact", "artifact_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--q", "query", required=True)
@click.option("--level", default=3, show_default=True, type=click.IntRange(3, 4))
@click.option("--k", default=10, show_default=True, type=int)
def nearby(artifact_dir: str, query: str, level: int, k: int) -> None:
    """Rank the white-space fields nearest to a query's target domain."""
    try:
        art = load_artifact(artifact_dir)
        position = explorer.position_domain(art.index, query, level)
        entries = explorer.rank_nearby(position, art.matrices[level], k)
    except (ArtifactError, explorer.ExplorerError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"target {query!r}: {len(position.matched_ids)} matching patents,"
               f" red space {sorted(position.red_fields)}")
    click.echo(f"{'field':<7}{'omega':<12}name")
    for fld, omega in entries:
        click.echo(f"{fld:<7}{omega:<12.6f}{display_name(fld)}")


@main.command()
@click.option("--artifact", "artifact_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--field", "field_code", required=True)
@click.option("--q", "query", default=None)
@click.option("--k-terms", default=10, show_default=True, type=int)
@click.option("--k-patents", default=10, show_default=True, type=int)
def panel(
    artifact_dir: str, field_code: str, query: str | None, k_terms: int, k_patents: int
) -> None:
    """Print the information panel for one field."""
    try:
        art = load_artifact(artifact_dir)
        level = explorer.field_code_level(field_code)
        position = (
            explorer.position_domain(art.index, query, level) if query else None
        )
        pane = explorer.field_panel(
            art.index, field_code, position=position, k_terms=k_terms, k_patents=k_patents
        )
    except (ArtifactError, explorer.ExplorerError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    click.echo(f"{field_code} ({display_name(field_code)}) :: {pane.stimulus_scope},"
               f" {len(pane.scope_ids)} patents")
    click.echo("top terms:")
    for term, score in pane.top_terms:
        click.echo(f"  {score:>8g}  {term}")
    click.echo("most cited:")
    for pid, title, cites in pane.patents_by_citations:
        click.echo(f"  {cites:>4d}  {pid}  {title}")
    click.echo("most recent:")
    for pid, title, date in pane.patents_by_recency:
        click.echo(f"  {date:<10}  {pid}  {title}")
    click.echo("inventors:")
    for name, count in pane.top_inventors:
        click.echo(f"  {count:>4d}  {name}")
    click.echo("assignees:")
    for name, count in pane.top_assignees:
        click.echo(f"  {count:>4d}  {name}")


if __name__ == "__main__":
    main()
