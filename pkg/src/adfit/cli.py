"""Command line interface.

    adfit validate PROJECT.json
    adfit render PROJECT.json --mode inline --seed 7 --out-dir out/
    adfit serve --store-root ./store --port 8000

Exit codes: 0 success, 2 validation failure, 3 infeasible presence lock.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .candidates import load_term_file
from .model import validate_project
from .optimizer import InfeasiblePlacementError, OptimizerConfig
from .pipeline import build_scoring, run_pipeline, write_artifacts
from .project_io import load_project
from .scoring import load_frequency_table

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3


@click.group()
def main():
    """Automatic shortening and placement of audio descriptions."""


def _load_and_validate(project_path):
    try:
        project = load_project(project_path)
    except Exception as exc:  # malformed JSON / missing fields
        click.echo(f"error: cannot read project: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    diags = validate_project(project)
    if diags:
        for d in diags:
            click.echo(f"invalid: {d}", err=True)
        sys.exit(EXIT_VALIDATION)
    return project


@main.command()
@click.argument("project_path", type=click.Path(exists=True, dir_okay=False))
def validate(project_path):
    """Check a project file against the model invariants."""
    _load_and_validate(project_path)
    click.echo("ok")


@main.command()
@click.argument("project_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["inline", "extended", "extended-inline"]), default="inline")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grid", type=float, default=None, help="Placement grid in seconds.")
@click.option("--window", type=float, default=None, help="Search window around the anchor, seconds.")
@click.option("--skip-cost", type=float, default=None)
@click.option("--glossary", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--freq-table", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out-dir", type=click.Path(file_okay=False), default="adfit-out", show_default=True)
def render(project_path, mode, seed, grid, window, skip_cost, glossary, freq_table, out_dir):
    """Run the full pipeline and write plan, manifest, WAV and report."""
    project = _load_and_validate(project_path)

    overrides = dict(project.optimizer_overrides)
    overrides["mode"] = mode.replace("-", "_")
    if grid is not None:
        overrides["time_grid"] = grid
    if window is not None:
        overrides["placement_window"] = window
    if skip_cost is not None:
        overrides["skip_cost"] = skip_cost
    try:
        config = OptimizerConfig().with_overrides(overrides)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    setup = build_scoring(
        project,
        glossary=load_term_file(glossary) if glossary else None,
        freq=load_frequency_table(freq_table) if freq_table else None,
    )
    try:
        result = run_pipeline(
            project,
            config,
            seed=seed,
            audio_dir=Path(project_path).parent,
            setup=setup,
        )
    except InfeasiblePlacementError as exc:
        click.echo(f"infeasible: {exc}", err=True)
        sys.exit(EXIT_INFEASIBLE)
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    paths = write_artifacts(result, out_dir)
    for name, p in paths.items():
        click.echo(f"{name}: {p}")
    click.echo(f"total cost E = {result.plan.total_cost:.6f}")


@main.command()
@click.option("--store-root", type=click.Path(file_okay=False), envvar="ADFIT_STORE_ROOT",
              default="adfit-store", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(store_root, host, port):
    """Run the HTTP authoring service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store_root), host=host, port=port)


if __name__ == "__main__":
    main()
