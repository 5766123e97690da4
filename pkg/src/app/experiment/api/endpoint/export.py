from pathlib import Path
from typing import Annotated

import typer

from src.app.experiment.api.dependencies import exit_on_error, experiment_service
from src.app.experiment.api.endpoint.run import collect_overrides
from src.app.forward.schema.forward import SolverMode


def export_msr(
    config: Annotated[Path | None, typer.Option("--config")] = None,
    preset: Annotated[str | None, typer.Option()] = None,
    n: Annotated[int | None, typer.Option("--n")] = None,
    wavelength: Annotated[float | None, typer.Option("--lambda")] = None,
    snr_db: Annotated[float | None, typer.Option("--snr-db")] = None,
    seed: Annotated[int | None, typer.Option()] = None,
    mode: Annotated[SolverMode | None, typer.Option()] = None,
    out: Annotated[Path | None, typer.Option("--out")] = None,
    name: Annotated[str, typer.Option(help="File name below the output directory")] = "msr.json",
):
    """Write the (noisy) MSR matrix as a JSON container."""
    with exit_on_error():
        overrides = collect_overrides(n, wavelength, snr_db, seed, None, mode, out)
        path = experiment_service.export_msr(experiment_service.load_config(config, preset, overrides), name)

    typer.echo(str(path))
