"""Command line entry points.

Exit codes: 0 success, 2 invalid input (bad graphs, layouts, config), 3
infrastructure trouble (endpoint, backend, storage).  Imports inside the
commands keep startup light; `benchmark` and `solve` never pull in the web
stack.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import INFRASTRUCTURE_ERRORS, VALIDATION_ERRORS, LandscaperError

EXIT_VALIDATION = 2
EXIT_INFRASTRUCTURE = 3


@click.group()
def cli():
    """Landscape design pipeline: scene graphs, layouts, renders, metrics."""


def _load_config(path: str | None):
    from .config import load_config

    return load_config(path)


def _read_graph(path: str):
    """Graph from a JSON document or a triples text file, by extension."""
    from .model import SceneGraph
    from .textform import parse_triples

    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        graph = SceneGraph.from_json_dict(json.loads(text))
    else:
        graph = parse_triples(text)
    graph.validate()
    return graph


@cli.command()
@click.option("--config", "config_path", default=None, help="Path to a TOML or JSON config file.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8600, show_default=True, type=int)
def serve(config_path: str | None, host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(_load_config(config_path))
    uvicorn.run(app, host=host, port=port, log_level="info")


@cli.command()
@click.option("--graph-file", "-g", required=True, help="Graph as .json or triples text.")
@click.option("--config", "config_path", default=None)
@click.option("--out", "-o", default=None, help="Write layout JSON here instead of stdout.")
@click.option("--tuples", is_flag=True, help="Print layout tuples instead of JSON.")
def oracle(graph_file: str, config_path: str | None, out: str | None, tuples: bool):
    """Lay out a scene graph with the rule-based oracle solver."""
    from .solver import solve as solve_graph
    from .textform import serialize_layout

    config = _load_config(config_path)
    graph = _read_graph(graph_file)
    layout = solve_graph(graph, config.kb, config.canvas)
    if tuples:
        payload = serialize_layout(layout)
    else:
        payload = json.dumps(layout.to_json_dict(), indent=2)
    if out:
        Path(out).write_text(payload + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(payload)


cli.add_command(oracle, name="solve")  # familiar alias


@cli.command()
@click.option("--description", "-d", default=None, help="Scene description (needs an endpoint or fixtures).")
@click.option("--graph-file", "-g", default=None, help="Skip graph generation; use this graph.")
@click.option("--config", "config_path", default=None)
@click.option("--layout-from", type=click.Choice(["oracle", "llm"]), default="oracle",
              show_default=True, help="Where the layout comes from.")
@click.option("--backend", type=click.Choice(["mock", "worker"]), default=None,
              help="Override the configured render backend.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--season", default="summer", show_default=True)
@click.option("--time-of-day", default="noon", show_default=True)
@click.option("--style", "style_name", default="realistic", show_default=True)
@click.option("--out", "-o", default="scene.png", show_default=True, help="Output image path.")
@click.option("--layout-out", default=None, help="Also write the layout JSON here.")
def generate(
    description: str | None,
    graph_file: str | None,
    config_path: str | None,
    layout_from: str,
    backend: str | None,
    seed: int,
    season: str,
    time_of_day: str,
    style_name: str,
    out: str,
    layout_out: str | None,
):
    """One-shot pipeline: description or graph to layout to rendered PNG."""
    from .compose import StyleParams, plan_composition, render_scene
    from .llm import generate_layout, generate_scene_graph
    from .mock_backend import MockBackend
    from .raster import save_png
    from .solver import solve as solve_graph
    from .textform import serialize_layout
    from .worker_client import WorkerClient

    config = _load_config(config_path)
    style = StyleParams(season=season, time_of_day=time_of_day, style=style_name)
    style.validate()

    if graph_file:
        graph = _read_graph(graph_file)
    elif description:
        graph, _ = generate_scene_graph(description, config.endpoint, kb=config.kb)
    else:
        raise click.UsageError("pass --description or --graph-file")

    if layout_from == "llm":
        layout, _ = generate_layout(graph, config.endpoint, kb=config.kb, canvas=config.canvas)
    else:
        layout = solve_graph(graph, config.kb, config.canvas)

    plan = plan_composition(graph, layout, style, seed, config.frozen_fraction)
    if (backend or config.backend) == "worker":
        image, _ = WorkerClient(config.worker_url).render(plan)
    else:
        image = render_scene(plan, MockBackend(config.kb)).image
    save_png(out, image)

    click.echo(serialize_layout(layout))
    if layout_out:
        Path(layout_out).write_text(
            json.dumps(layout.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )
        click.echo(f"wrote {layout_out}")
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--generator", type=click.Choice(["oracle", "llm"]), default="oracle", show_default=True)
@click.option("--samples", default=100, show_default=True, type=int)
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--config", "config_path", default=None)
@click.option("--json", "json_out", default=None, help="Also write the full report JSON here.")
@click.option("--no-reference", is_flag=True, help="Drop the reference rows from the table.")
def benchmark(
    generator: str,
    samples: int,
    seed: int,
    config_path: str | None,
    json_out: str | None,
    no_reference: bool,
):
    """Score a layout generator over seeded random scenes."""
    from .benchmark import oracle_generator, run_benchmark

    config = _load_config(config_path)
    if generator == "oracle":
        generate_fn = oracle_generator(config.kb, config.canvas)
    else:
        from .llm import generate_layout

        def generate_fn(graph, description, sample_seed):
            layout, _ = generate_layout(graph, config.endpoint, kb=config.kb, canvas=config.canvas)
            return layout

    report = run_benchmark(
        generate_fn, seed=seed, sample_count=samples,
        kb=config.kb, canvas=config.canvas, label=generator,
    )
    click.echo(report.render_table(include_reference=not no_reference))
    if json_out:
        Path(json_out).write_text(
            json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )
        click.echo(f"wrote {json_out}")


@cli.command()
@click.argument("image_a")
@click.argument("image_b")
def ssim(image_a: str, image_b: str):
    """Structural similarity of two PNG images."""
    from .raster import load_png
    from .ssim import ssim as compute_ssim

    value = compute_ssim(load_png(image_a), load_png(image_b))
    click.echo(f"{value:.6f}")


@cli.group()
def session():
    """Inspect and replay stored design sessions."""


@session.command("list")
@click.option("--config", "config_path", default=None)
def session_list(config_path: str | None):
    """List sessions in the configured data directory."""
    from .studio import Studio

    studio = Studio(_load_config(config_path))
    sessions = studio.list_sessions()
    if not sessions:
        click.echo("no sessions")
        return
    for entry in sessions:
        click.echo(
            f"{entry['session_id']}  {entry['records']:>3} records  {entry['description'][:60]}"
        )


@session.command("show")
@click.argument("session_id")
@click.option("--config", "config_path", default=None)
def session_show(session_id: str, config_path: str | None):
    """Dump a session's records as JSON lines."""
    from .studio import Studio

    studio = Studio(_load_config(config_path))
    for record in studio.session(session_id).records:
        click.echo(json.dumps(record.to_json_dict(), sort_keys=True))


@session.command("replay")
@click.argument("session_id")
@click.option("--config", "config_path", default=None)
def session_replay(session_id: str, config_path: str | None):
    """Re-execute a session and verify it reproduces byte for byte."""
    from .studio import Studio

    studio = Studio(_load_config(config_path))
    report = studio.replay(session_id)
    for entry in report.entries:
        click.echo(f"[{entry.index}] {entry.kind}: {entry.status}")
    if not report.ok:
        raise SystemExit(EXIT_INFRASTRUCTURE)
    click.echo("replay ok")


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)
    except (*VALIDATION_ERRORS, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except INFRASTRUCTURE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INFRASTRUCTURE)
    except LandscaperError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()
